#include "scm/curvature.hpp"

#include <cmath>

#include "scm/errors.hpp"

namespace scm {

CurvatureDecomposition curvature_of(const Decomposition& d) {
    CurvatureDecomposition c;
    c.K = d.K;
    std::vector<WeightedPoint> ks;
    for (const auto& a : d.f_atoms.atoms()) ks.push_back({a.position, 0.5 * a.weight});
    c.k_s_atoms = SignedAtomicMeasure(std::move(ks));
    return c;
}

CurvatureDecomposition curvature_of(const MetricSpec& g) { return curvature_of(decompose(g)); }

namespace {

double atom_sum_inside(const SignedAtomicMeasure& m, const PlanarDomain& d, bool positive_only) {
    double s = 0.0;
    for (const auto& a : m.atoms()) {
        if (positive_only && a.weight <= 0.0) continue;
        if (d.locate(a.position) == Location::Inside) s += a.weight;
    }
    return s;
}

}  // namespace

QuadResult total_curvature(const CurvatureDecomposition& c, const MetricSpec& g, const PlanarDomain& d,
                           QuadOptions opts) {
    QuadResult r = weighted_area(g, d, c.K, opts);
    r.value += atom_sum_inside(c.k_s_atoms, d, false);
    return r;
}

QuadResult positive_variation(const CurvatureDecomposition& c, const MetricSpec& g,
                              const PlanarDomain& d, double K0, QuadOptions opts) {
    ScalarField excess;
    auto K = c.K.eval;
    excess.eval = [K, K0](Point2 z) { return std::max(K(z) - K0, 0.0); };
    excess.info = c.K.info;
    QuadResult r = weighted_area(g, d, excess, opts);
    r.value += atom_sum_inside(c.k_s_atoms, d, true);
    return r;
}

GaussBonnetResult gauss_bonnet_two_chart(const MetricSpec& g2, double r0, QuadOptions opts) {
    if (!(r0 > 1.0)) throw config_error("gauss_bonnet_two_chart: need r0 > 1");
    if (!std::holds_alternative<PiecewiseRadial>(g2) && !std::holds_alternative<SphericalCone>(g2) &&
        !std::holds_alternative<Flat>(g2))
        throw numerical_rejection("gauss_bonnet_two_chart: radial metrics only");

    MetricSpec g1 = pullback_inversion(g2);
    if (!assert_no_cusps(atoms_of(g2)))
        throw numerical_rejection("gauss_bonnet_two_chart: cusp in the finite chart");
    if (!assert_no_cusps(atoms_of(g1)))
        throw numerical_rejection(
            "gauss_bonnet_two_chart: cusp at z=infinity (pullback atom mass >= 4pi); total curvature of "
            "the surface is defined but its area is not");

    CurvatureDecomposition c2 = curvature_of(g2);
    CurvatureDecomposition c1 = curvature_of(g1);

    GaussBonnetResult out;
    QuadResult k2 = total_curvature(c2, g2, PlanarDomain::disk({0, 0}, r0), opts);
    QuadResult k1 = total_curvature(c1, g1, PlanarDomain::disk({0, 0}, 1.0 / r0), opts);
    out.chart2 = k2.value;
    out.chart1 = k1.value;
    out.total = k2.value + k1.value;

    QuadResult s2 = weighted_area(g2, PlanarDomain::disk({0, 0}, 1.0), c2.K, opts);
    QuadResult s1 = weighted_area(g1, PlanarDomain::disk({0, 0}, 1.0), c1.K, opts);
    out.smooth_part = s2.value + s1.value;
    out.error_estimate = k2.error_estimate + k1.error_estimate + s2.error_estimate + s1.error_estimate;
    return out;
}

namespace {

void check_fd_clearance(const MetricSpec& g, Point2 z, double h) {
    const SignedAtomicMeasure metric_atoms = atoms_of(g);
    for (const auto& a : metric_atoms.atoms()) {
        if (dist(z, a.position) <= 10.0 * h)
            throw numerical_rejection("finite differences too close to an atom");
    }
    if (const auto* pw = std::get_if<PiecewiseRadial>(&g)) {
        double r = dist(z, pw->center());
        for (double rb : pw->interior_breakpoints())
            if (std::abs(r - rb) <= 10.0 * h)
                throw numerical_rejection("finite differences too close to a radial breakpoint");
        if (r + 10.0 * h > pw->r_max())
            throw numerical_rejection("finite differences outside the metric validity range");
    }
}

template <typename F>
double fd_laplacian(F&& f, Point2 z, double h) {
    return (f(Point2{z.x + h, z.y}) + f(Point2{z.x - h, z.y}) + f(Point2{z.x, z.y + h}) +
            f(Point2{z.x, z.y - h}) - 4.0 * f(z)) /
           (h * h);
}

}  // namespace

double recover_density(const MetricSpec& g, Point2 z, double h) {
    if (!(h > 0.0)) throw config_error("recover_density: h must be positive");
    check_fd_clearance(g, z, h);
    double lap = fd_laplacian([&](Point2 w) { return eval_rho(g, w); }, z, h);
    return -lap / (2.0 * eval_conformal_factor(g, z));
}

double subsolution_residual(const Decomposition& dec, const ScalarField& K, double K0, Point2 z,
                            double h) {
    double lap_u = fd_laplacian([&](Point2 w) { return dec.eval_u(w); }, z, h);
    double efu = std::exp(dec.eval_f(z) + dec.eval_u(z));
    double Kz = K.eval(z);
    return -lap_u - 2.0 * (Kz - K0) * efu - 2.0 * K0 * efu;
}

double subsolution_residual(const MetricSpec& g, const CurvatureDecomposition& c, double K0, Point2 z,
                            double h) {
    if (!(h > 0.0)) throw config_error("subsolution_residual: h must be positive");
    check_fd_clearance(g, z, h);
    return subsolution_residual(decompose(g), c.K, K0, z, h);
}

}  // namespace scm
