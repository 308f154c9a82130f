#include "scm/metric.hpp"

#include <algorithm>
#include <cmath>

#include "scm/errors.hpp"

namespace scm {

// ---------------------------------------------------------------------------
// HarmonicPoly
// ---------------------------------------------------------------------------

HarmonicPoly::HarmonicPoly(std::vector<std::vector<double>> coeffs) : coeffs_(std::move(coeffs)) {
    // Laplacian coefficient of x^i y^j: (i+2)(i+1) c[i+2][j] + (j+2)(j+1) c[i][j+2].
    auto at = [&](std::size_t i, std::size_t j) -> double {
        if (i >= coeffs_.size()) return 0.0;
        if (j >= coeffs_[i].size()) return 0.0;
        return coeffs_[i][j];
    };
    double scale = 0.0;
    for (const auto& row : coeffs_)
        for (double c : row) scale = std::max(scale, std::abs(c));
    std::size_t imax = coeffs_.size() + 2;
    for (std::size_t i = 0; i < imax; ++i) {
        for (std::size_t j = 0; j < imax; ++j) {
            double lap = (i + 2.0) * (i + 1.0) * at(i + 2, j) + (j + 2.0) * (j + 1.0) * at(i, j + 2);
            if (std::abs(lap) > 1e-12 * std::max(1.0, scale))
                throw config_error("harmonic polynomial: Laplacian does not vanish identically");
        }
    }
}

HarmonicPoly HarmonicPoly::constant(double c) {
    if (c == 0.0) return {};
    return HarmonicPoly(std::vector<std::vector<double>>{{c}});
}

HarmonicPoly HarmonicPoly::harmonic_mode(int k, double c_re, double c_im) {
    // Binomial expansion of z^k = (x + iy)^k: the x^{k-j} y^j term carries i^j.
    std::vector<std::vector<double>> coeffs(k + 1, std::vector<double>(k + 1, 0.0));
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        double re_ij = (j % 4 == 0) ? 1.0 : (j % 4 == 2 ? -1.0 : 0.0);
        double im_ij = (j % 4 == 1) ? 1.0 : (j % 4 == 3 ? -1.0 : 0.0);
        coeffs[k - j][j] = binom * (c_re * re_ij + c_im * im_ij);
        binom = binom * (k - j) / (j + 1.0);
    }
    return HarmonicPoly(std::move(coeffs));
}

double HarmonicPoly::operator()(Point2 z) const {
    double total = 0.0;
    double xi = 1.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double yj = 1.0;
        for (std::size_t j = 0; j < coeffs_[i].size(); ++j) {
            if (coeffs_[i][j] != 0.0) total += coeffs_[i][j] * xi * yj;
            yj *= z.y;
        }
        xi *= z.x;
    }
    return total;
}

static std::vector<std::vector<double>> add_tables(const std::vector<std::vector<double>>& a,
                                                   const std::vector<std::vector<double>>& b, double sb) {
    std::vector<std::vector<double>> out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t w = std::max(i < a.size() ? a[i].size() : 0, i < b.size() ? b[i].size() : 0);
        out[i].assign(w, 0.0);
        for (std::size_t j = 0; j < w; ++j) {
            if (i < a.size() && j < a[i].size()) out[i][j] += a[i][j];
            if (i < b.size() && j < b[i].size()) out[i][j] += sb * b[i][j];
        }
    }
    return out;
}

HarmonicPoly operator+(const HarmonicPoly& a, const HarmonicPoly& b) {
    return HarmonicPoly(add_tables(a.coeffs_, b.coeffs_, 1.0));
}
HarmonicPoly operator-(const HarmonicPoly& a, const HarmonicPoly& b) {
    return HarmonicPoly(add_tables(a.coeffs_, b.coeffs_, -1.0));
}

// ---------------------------------------------------------------------------
// RadialExpr
// ---------------------------------------------------------------------------

RadialExpr RadialExpr::rational(double A, double p, double B, double C, double s) {
    RadialExpr e;
    e.kind = Kind::RationalPower;
    if (!(A > 0.0)) throw config_error("radial expression: A must be positive");
    if (C == 0.0) {
        // Canonical form with trivial denominator.
        e.A = A / (B * B);
        e.p = p;
        e.B = 1.0;
        e.C = 0.0;
        e.s = 1.0;
    } else if (B == 0.0) {
        e.A = A / (C * C);
        e.p = p - 2.0 * s;
        e.B = 1.0;
        e.C = 0.0;
        e.s = 1.0;
    } else {
        e.A = A;
        e.p = p;
        e.B = B;
        e.C = C;
        e.s = s;
    }
    return e;
}

RadialExpr RadialExpr::log_power(double a) {
    RadialExpr e;
    e.kind = Kind::LogPower;
    e.a = a;
    return e;
}

double RadialExpr::rho(double r) const {
    if (kind == Kind::LogPower) {
        double L = 1.0 - std::log(r);
        if (!(L > 0.0)) throw numerical_rejection("log-power metric evaluated outside its validity range");
        return -a * std::log(L);
    }
    double W = B + C * std::pow(r, s);
    if (!(W > 0.0)) throw numerical_rejection("radial metric: denominator vanishes at requested radius");
    double power = p == 0.0 ? 0.0 : p * std::log(r);
    return std::log(A) + power - 2.0 * std::log(W);
}

double RadialExpr::laplacian(double r) const {
    if (kind == Kind::LogPower) {
        double L = 1.0 - std::log(r);
        return a / (r * r * L * L);
    }
    if (C == 0.0) return 0.0;
    double rs = std::pow(r, s);
    double W = B + C * rs;
    return -2.0 * B * C * s * s * std::pow(r, s - 2.0) / (W * W);
}

double RadialExpr::curvature_density(double r) const {
    if (kind == Kind::LogPower) {
        double L = 1.0 - std::log(r);
        return -(a / 2.0) * std::pow(r, -2.0) * std::pow(L, -(2.0 - a));
    }
    if (C == 0.0) return 0.0;
    return B * C * s * s * std::pow(r, s - 2.0 - p) / A;
}

// ---------------------------------------------------------------------------
// PiecewiseRadial
// ---------------------------------------------------------------------------

PiecewiseRadial::PiecewiseRadial(Point2 center, std::vector<RadialPiece> pieces, double log_scale)
    : center_(center), pieces_(std::move(pieces)), log_scale_(log_scale) {
    if (pieces_.empty()) throw config_error("piecewise radial metric: no pieces");
    if (pieces_.front().r_lo != 0.0) throw config_error("piecewise radial metric: first piece must start at 0");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (pieces_[i].r_hi != pieces_[i + 1].r_lo)
            throw config_error("piecewise radial metric: pieces must partition the radius range");
        double rb = pieces_[i].r_hi;
        double left = pieces_[i].expr.rho(rb);
        double right = pieces_[i + 1].expr.rho(rb);
        if (std::abs(left - right) > 1e-10 * std::max(1.0, std::abs(left)))
            throw config_error("piecewise radial metric: discontinuity at breakpoint");
    }
    if (!(pieces_.back().r_hi > pieces_.back().r_lo))
        throw config_error("piecewise radial metric: empty piece");
}

const RadialExpr& PiecewiseRadial::piece_at(double r) const {
    for (const auto& pc : pieces_) {
        if (r < pc.r_hi || &pc == &pieces_.back()) {
            if (r > pc.r_hi) throw numerical_rejection("radius outside metric validity range");
            return pc.expr;
        }
    }
    return pieces_.back().expr;
}

double PiecewiseRadial::rho_radial(double r) const { return log_scale_ + piece_at(r).rho(r); }

double PiecewiseRadial::leading_exponent() const {
    const auto& e = pieces_.front().expr;
    return e.kind == RadialExpr::Kind::LogPower ? 0.0 : e.p;
}

std::vector<double> PiecewiseRadial::interior_breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].r_hi);
    return out;
}

PiecewiseRadial PiecewiseRadial::rescaled(double log_factor) const {
    return PiecewiseRadial(center_, pieces_, log_scale_ + log_factor);
}

PiecewiseRadial PiecewiseRadial::translated(Point2 new_center) const {
    return PiecewiseRadial(new_center, pieces_, log_scale_);
}

// ---------------------------------------------------------------------------
// Evaluation over the variant
// ---------------------------------------------------------------------------

namespace {

double potential_rho(const PotentialMetric& m, Point2 z) {
    double total = m.harmonic(z);
    for (const auto& a : m.atoms.atoms()) {
        double r = dist(z, a.position);
        if (r == 0.0) throw singular_point_error("metric evaluated at an atom");
        total -= (a.weight / (2.0 * pi)) * std::log(r);
    }
    if (m.u.value) total += m.u.value(z);
    return total;
}

}  // namespace

double eval_rho(const MetricSpec& g, Point2 z) {
    if (std::holds_alternative<Flat>(g)) return 0.0;
    if (const auto* pw = std::get_if<PiecewiseRadial>(&g)) {
        double r = dist(z, pw->center());
        if (r == 0.0) {
            if (pw->leading_exponent() != 0.0 ||
                pw->pieces().front().expr.kind == RadialExpr::Kind::LogPower)
                throw singular_point_error("metric evaluated at its conical point");
        }
        return pw->rho_radial(r);
    }
    if (const auto* cone = std::get_if<SphericalCone>(&g)) {
        double r = dist(z, cone->center);
        if (r == 0.0 && cone->alpha != 0.0)
            throw singular_point_error("metric evaluated at its conical point");
        return cone_as_radial(*cone).rho_radial(r);
    }
    return potential_rho(std::get<PotentialMetric>(g), z);
}

double eval_conformal_factor(const MetricSpec& g, Point2 z) { return std::exp(eval_rho(g, z)); }

SignedAtomicMeasure atoms_of(const MetricSpec& g) {
    if (std::holds_alternative<Flat>(g)) return {};
    if (const auto* pw = std::get_if<PiecewiseRadial>(&g)) {
        double w = -2.0 * pi * pw->leading_exponent();
        if (w == 0.0) return {};
        return SignedAtomicMeasure({{pw->center(), w}});
    }
    if (const auto* cone = std::get_if<SphericalCone>(&g)) {
        if (cone->alpha == 0.0) return {};
        return SignedAtomicMeasure({{cone->center, 4.0 * pi * cone->alpha}});
    }
    return std::get<PotentialMetric>(g).atoms;
}

FieldInfo metric_field_info(const MetricSpec& g) {
    FieldInfo info;
    if (std::holds_alternative<Flat>(g)) return info;
    if (const auto* cone = std::get_if<SphericalCone>(&g)) {
        if (cone->alpha != 0.0)
            info.singular_points.push_back({cone->center, Singularity::Kind::Power, 2.0 * cone->alpha});
        return info;
    }
    if (const auto* pw = std::get_if<PiecewiseRadial>(&g)) {
        const auto& first = pw->pieces().front().expr;
        if (first.kind == RadialExpr::Kind::LogPower) {
            info.singular_points.push_back({pw->center(), Singularity::Kind::InvLog, 2.0});
        } else if (first.p != 0.0) {
            info.singular_points.push_back({pw->center(), Singularity::Kind::Power, -first.p});
        }
        for (double rb : pw->interior_breakpoints()) info.jump_circles.push_back({pw->center(), rb});
        return info;
    }
    const auto& pot = std::get<PotentialMetric>(g);
    for (const auto& a : pot.atoms.atoms())
        info.singular_points.push_back({a.position, Singularity::Kind::Power, a.weight / (2.0 * pi)});
    info = info.merged_with(pot.u.info);
    return info;
}

// ---------------------------------------------------------------------------
// Cones and presets
// ---------------------------------------------------------------------------

MetricSpec spherical_cone(double K0, double alpha, double tau0, Point2 center) {
    if (!(K0 >= 0.0)) throw config_error("spherical cone: K0 must be nonnegative");
    if (!(alpha < 1.0)) throw config_error("spherical cone: alpha must be < 1");
    if (tau0 == 0.0) throw config_error("spherical cone: tau0 must be nonzero");
    return SphericalCone{K0, alpha, std::abs(tau0), center};
}

PiecewiseRadial cone_as_radial(const SphericalCone& c) {
    double q = 1.0 - c.alpha;
    double m = c.K0 * c.tau0 * c.tau0 / (4.0 * q * q);
    RadialPiece piece{0.0, std::numeric_limits<double>::infinity(),
                      RadialExpr::rational(c.tau0 * c.tau0, -2.0 * c.alpha, 1.0, m, 2.0 * q)};
    return PiecewiseRadial(c.center, {piece});
}

PiecewiseRadial example1(double a) {
    if (a == 0.0 || !(a < 1.0)) throw config_error("example1: parameter a must satisfy 0 != a < 1");
    RadialPiece piece{0.0, std::exp(1.0), RadialExpr::log_power(a)};
    return PiecewiseRadial({0.0, 0.0}, {piece});
}

PiecewiseRadial example2(double alpha1, double alpha2) {
    if (!(-1.0 < alpha1 && alpha1 <= alpha2 && alpha2 <= 0.0))
        throw config_error("example2: need -1 < alpha1 <= alpha2 <= 0");
    double q1 = 1.0 + alpha1, q2 = 1.0 + alpha2;
    double A = 4.0 * q2 * q2;
    RadialPiece inner{0.0, 1.0, RadialExpr::rational(A, 2.0 * alpha2, 1.0, 1.0, 2.0 * q2)};
    RadialPiece outer{1.0, std::numeric_limits<double>::infinity(),
                      RadialExpr::rational(A, 2.0 * alpha1, 1.0, 1.0, 2.0 * q1)};
    return PiecewiseRadial({0.0, 0.0}, {inner, outer});
}

PiecewiseRadial example3_chart2() {
    RadialPiece inner{0.0, 1.0, RadialExpr::rational(2.0, 0.0, 2.0, -1.0, 0.5)};
    RadialPiece outer{1.0, std::numeric_limits<double>::infinity(),
                      RadialExpr::rational(8.0, 1.5, 1.0, 1.0, 0.5)};
    return PiecewiseRadial({0.0, 0.0}, {inner, outer});
}

PiecewiseRadial example3_chart1() {
    return std::get<PiecewiseRadial>(pullback_inversion(example3_chart2()));
}

MetricSpec preset_metric(const std::string& name, double p1, double p2) {
    if (name == "example1") return example1(p1 == 0.0 ? 0.5 : p1);
    if (name == "example2") return example2(p1, p2);
    if (name == "example3_chart2") return example3_chart2();
    if (name == "example3_chart1") return example3_chart1();
    if (name == "flat") return Flat{};
    throw config_error("unknown preset metric: " + name);
}

// ---------------------------------------------------------------------------
// Pullback under w = 1/z
// ---------------------------------------------------------------------------

namespace {

RadialExpr invert_expr(const RadialExpr& e) {
    if (e.kind == RadialExpr::Kind::LogPower)
        throw numerical_rejection("pullback of log-type radial pieces is not supported");
    if (e.C == 0.0) {
        // A r^p / B^2 composed with 1/r, times r^{-4}.
        return RadialExpr::rational(e.A, -e.p - 4.0, e.B, 0.0, e.s);
    }
    // A r^{-p} / (B + C r^{-s})^2 * r^{-4} = A r^{2s-p-4} / (C + B r^s)^2.
    return RadialExpr::rational(e.A, 2.0 * e.s - e.p - 4.0, e.C, e.B, e.s);
}

}  // namespace

MetricSpec pullback_inversion(const MetricSpec& g) {
    if (std::holds_alternative<Flat>(g)) {
        RadialPiece piece{0.0, std::numeric_limits<double>::infinity(),
                          RadialExpr::rational(1.0, -4.0, 1.0, 0.0, 1.0)};
        return PiecewiseRadial({0.0, 0.0}, {piece});
    }
    if (std::holds_alternative<PotentialMetric>(g))
        throw numerical_rejection("pullback_inversion: chart transport of non-radial metrics not implemented");

    PiecewiseRadial pw = std::holds_alternative<SphericalCone>(g)
                             ? cone_as_radial(std::get<SphericalCone>(g))
                             : std::get<PiecewiseRadial>(g);
    if (norm(pw.center()) != 0.0)
        throw numerical_rejection("pullback_inversion: metric must be centered at the origin");

    std::vector<RadialPiece> out;
    const auto& pieces = pw.pieces();
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        double lo = std::isinf(it->r_hi) ? 0.0 : 1.0 / it->r_hi;
        double hi = it->r_lo == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / it->r_lo;
        out.push_back({lo, hi, invert_expr(it->expr)});
    }
    return PiecewiseRadial(pw.center(), std::move(out), pw.log_scale());
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

double Decomposition::eval_f(Point2 z) const {
    double total = f_harmonic.is_zero() ? 0.0 : f_harmonic(z);
    for (const auto& a : f_atoms.atoms()) {
        double r = dist(z, a.position);
        if (r == 0.0) throw singular_point_error("f evaluated at an atom");
        total -= (a.weight / (2.0 * pi)) * std::log(r);
    }
    return total;
}

Decomposition Decomposition::gauge_shifted(const HarmonicPoly& h) const {
    Decomposition out = *this;
    out.f_harmonic = f_harmonic + h;
    auto base = u.eval;
    out.u.eval = [base, h](Point2 z) { return (base ? base(z) : 0.0) - h(z); };
    return out;
}

namespace {

Decomposition decompose_radial(const PiecewiseRadial& pw) {
    SignedAtomicMeasure atoms = atoms_of(MetricSpec{pw});
    if (!assert_no_cusps(atoms))
        throw numerical_rejection(
            "decompose: cusp present (atom mass >= 4pi); e^rho is not locally integrable there");

    double p1 = pw.leading_exponent();
    Point2 c = pw.center();
    Decomposition d;
    d.f_atoms = atoms;
    d.f_harmonic = HarmonicPoly::zero();

    PiecewiseRadial m = pw;
    d.u.eval = [m, p1, c](Point2 z) {
        double r = dist(z, c);
        return m.rho_radial(r) - p1 * std::log(r);
    };
    d.u.laplacian = [m, c](Point2 z) {
        double r = dist(z, c);
        return m.piece_at(r).laplacian(r);
    };
    double ls = pw.log_scale();
    d.K.eval = [m, c, ls](Point2 z) {
        double r = dist(z, c);
        return m.piece_at(r).curvature_density(r) * std::exp(-ls);
    };
    // Structure of the product K * e^rho near the center, plus breakpoints.
    const auto& first = pw.pieces().front().expr;
    if (first.kind == RadialExpr::Kind::LogPower) {
        d.K.info.singular_points.push_back({c, Singularity::Kind::InvLog, 2.0});
    } else if (first.C != 0.0 && first.s < 2.0) {
        d.K.info.singular_points.push_back({c, Singularity::Kind::Power, 2.0 - first.s});
    }
    for (double rb : pw.interior_breakpoints()) d.K.info.jump_circles.push_back({c, rb});
    d.u.info = d.K.info;
    return d;
}

}  // namespace

Decomposition decompose(const MetricSpec& g) {
    if (std::holds_alternative<Flat>(g)) {
        Decomposition d;
        d.u = constant_field(0.0);
        d.u.laplacian = [](Point2) { return 0.0; };
        d.K = constant_field(0.0);
        return d;
    }
    if (const auto* cone = std::get_if<SphericalCone>(&g)) return decompose_radial(cone_as_radial(*cone));
    if (const auto* pw = std::get_if<PiecewiseRadial>(&g)) return decompose_radial(*pw);

    const auto& pot = std::get<PotentialMetric>(g);
    if (!assert_no_cusps(pot.atoms))
        throw numerical_rejection(
            "decompose: cusp present (atom mass >= 4pi); e^rho is not locally integrable there");
    Decomposition d;
    d.f_atoms = pot.atoms;
    d.f_harmonic = pot.harmonic;
    if (pot.u.is_zero()) {
        d.u = constant_field(0.0);
        d.u.laplacian = [](Point2) { return 0.0; };
        d.K = constant_field(0.0);
        return d;
    }
    d.u.eval = pot.u.value;
    d.u.laplacian = pot.u.laplacian;
    d.u.info = pot.u.info;
    MetricSpec metric = g;
    if (pot.u.laplacian) {
        auto lap = pot.u.laplacian;
        d.K.eval = [metric, lap](Point2 z) { return -lap(z) / (2.0 * eval_conformal_factor(metric, z)); };
    } else {
        // Finite-difference fallback for sampled regular parts.
        auto val = pot.u.value;
        d.K.eval = [metric, val](Point2 z) {
            const double h = 1e-4;
            double lap = (val({z.x + h, z.y}) + val({z.x - h, z.y}) + val({z.x, z.y + h}) +
                          val({z.x, z.y - h}) - 4.0 * val(z)) /
                         (h * h);
            return -lap / (2.0 * eval_conformal_factor(metric, z));
        };
    }
    d.K.info = pot.u.info;
    return d;
}

}  // namespace scm
