#include "scm/iso.hpp"

#include <algorithm>
#include <cmath>

#include "scm/errors.hpp"

namespace scm {

namespace {

IsoReport assemble_report(double L, double L_err, double M, double M_err, double Kplus,
                          double Kplus_err, double K0, double tol) {
    IsoReport rep;
    rep.tol = tol;
    rep.inputs = IsoInputs{L * L, M, Kplus, K0};
    rep.lhs = L * L;
    rep.lhs_error = 2.0 * std::abs(L) * L_err;
    double factor = 4.0 * pi - 2.0 * Kplus - K0 * M;
    rep.rhs = factor * M;
    rep.rhs_error = std::abs(factor - K0 * M) * M_err + 2.0 * M * Kplus_err;
    rep.deficit = rep.lhs - rep.rhs;
    rep.vacuous = rep.rhs < 0.0;
    double scale = std::max({rep.lhs, std::abs(rep.rhs), 1.0});
    double errors = rep.lhs_error + rep.rhs_error;
    rep.equality = std::abs(rep.deficit) <= tol * scale + errors;
    rep.strict_certified = rep.deficit > errors;
    rep.violated = rep.deficit < -(tol * scale + errors);
    return rep;
}

void require_simple(const PlanarDomain& E, const char* who) {
    if (!E.is_simple()) throw config_error(std::string(who) + ": domain must be simple (no holes)");
}

void require_subdomain(const PlanarDomain& U, const PlanarDomain& E, const char* who) {
    // Sampled inclusion check of U's boundary in the closure of E.
    for (const auto& arc : U.boundary_arcs()) {
        for (int k = 0; k <= 16; ++k) {
            double t = arc.t0 + (arc.t1 - arc.t0) * k / 16.0;
            if (E.locate(arc.position(t)) == Location::Outside)
                throw config_error(std::string(who) + ": U is not contained in E");
        }
    }
}

}  // namespace

IsoReport huber_check(const MetricSpec& f_metric, const PlanarDomain& E, double tol, QuadOptions opts) {
    require_simple(E, "huber_check");
    QuadResult L = boundary_length(f_metric, E);
    QuadResult M = area(f_metric, E, opts);
    double omega_plus = 0.0;
    const SignedAtomicMeasure metric_atoms = atoms_of(f_metric);
    for (const auto& a : metric_atoms.atoms())
        if (a.weight > 0.0 && E.locate(a.position) == Location::Inside) omega_plus += a.weight;
    // Huber's factor (4pi - omega_+) matches the Alexandrov form with
    // K_+ = omega_+/2 and K0 = 0.
    return assemble_report(L.value, L.error_estimate, M.value, M.error_estimate, 0.5 * omega_plus, 0.0,
                           0.0, tol);
}

IsoReport huber_regular_check(const MetricSpec& f_metric, const PlanarDomain& U, const PlanarDomain& E,
                              double tol, QuadOptions opts) {
    require_simple(E, "huber_regular_check");
    require_subdomain(U, E, "huber_regular_check");
    QuadResult L = boundary_length(f_metric, U);
    QuadResult M = area(f_metric, U, opts);
    double omega_plus = 0.0;
    const SignedAtomicMeasure metric_atoms = atoms_of(f_metric);
    for (const auto& a : metric_atoms.atoms())
        if (a.weight > 0.0 && E.locate(a.position) == Location::Inside) omega_plus += a.weight;
    IsoReport rep = assemble_report(L.value, L.error_estimate, M.value, M.error_estimate,
                                    0.5 * omega_plus, 0.0, 0.0, tol);
    rep.must_be_strict = !U.is_simple();
    if (rep.must_be_strict) rep.note = "multiply connected: inequality must be strict";
    return rep;
}

IsoReport alexandrov_check(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                           double K0, double tol, QuadOptions opts) {
    if (!(K0 >= 0.0)) throw config_error("alexandrov_check: K0 must be nonnegative");
    require_simple(E, "alexandrov_check");
    if (!assert_no_cusps(atoms_of(g))) throw numerical_rejection("alexandrov_check: metric has a cusp");
    QuadResult L = boundary_length(g, E);
    QuadResult M = area(g, E, opts);
    QuadResult Kp = positive_variation(c, g, E, K0, opts);
    return assemble_report(L.value, L.error_estimate, M.value, M.error_estimate, Kp.value,
                           Kp.error_estimate, K0, tol);
}

IsoReport alexandrov_regular_check(const MetricSpec& g, const CurvatureDecomposition& c,
                                   const PlanarDomain& E, double K0, double tol, QuadOptions opts) {
    if (!(K0 >= 0.0)) throw config_error("alexandrov_regular_check: K0 must be nonnegative");
    PlanarDomain Es = E.fill_holes();
    if (!assert_no_cusps(atoms_of(g)))
        throw numerical_rejection("alexandrov_regular_check: metric has a cusp");
    QuadResult L = boundary_length(g, E);
    QuadResult M = area(g, E, opts);
    QuadResult Kp = positive_variation(c, g, Es, K0, opts);
    IsoReport rep = assemble_report(L.value, L.error_estimate, M.value, M.error_estimate, Kp.value,
                                    Kp.error_estimate, K0, tol);
    if (!E.is_simple()) {
        rep.must_be_strict = true;
        rep.note = "hole-filled variant: curvature taken over E_s, strict inequality expected";
    }
    return rep;
}

IsoReport bol_check(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                    double tol, QuadOptions opts) {
    require_simple(E, "bol_check");
    // K == 1 on E, sampled through the finite-difference recovery.
    Box bb = E.bounding_box();
    int checked = 0;
    for (int i = 0; i < 32 && checked < 12; ++i) {
        double fx = 0.5 + 0.5 * std::cos(2.41 * i + 0.7);
        double fy = 0.5 + 0.5 * std::sin(1.73 * i + 1.3);
        Point2 z{bb.x0 + fx * bb.width(), bb.y0 + fy * bb.height()};
        if (E.locate(z) != Location::Inside) continue;
        if (E.distance_to_boundary(z) < 1e-2 * E.diameter()) continue;
        double K;
        try {
            K = recover_density(g, z, 1e-5 * std::max(1.0, E.diameter()));
        } catch (const numerical_rejection&) {
            continue;  // too close to an atom or breakpoint; try another point
        }
        if (std::abs(K - 1.0) > 1e-3)
            throw numerical_rejection("bol_check: sampled curvature differs from 1");
        ++checked;
    }
    int positive = 0;
    for (const auto& a : c.k_s_atoms.atoms()) {
        if (E.locate(a.position) != Location::Inside) continue;
        if (a.weight < 0.0) throw numerical_rejection("bol_check: negative curvature atom in E");
        ++positive;
    }
    if (positive > 1) throw numerical_rejection("bol_check: more than one curvature atom in E");
    return alexandrov_check(g, c, E, 1.0, tol, opts);
}

// ---------------------------------------------------------------------------
// Sharp-metric fitting
// ---------------------------------------------------------------------------

SharpFit fit_sharp_metric(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                          double K0, int samples, double tol) {
    SharpFit fit;
    const auto* disk = std::get_if<Circle>(&E.outer());
    if (disk == nullptr || !E.is_simple())
        throw config_error("fit_sharp_metric: E must be a disk");
    if (!(K0 >= 0.0)) throw config_error("fit_sharp_metric: K0 must be nonnegative");

    // Locate the (at most one, nonnegative) curvature atom.
    Point2 z0 = disk->center;
    int found = 0;
    for (const auto& a : c.k_s_atoms.atoms()) {
        if (E.locate(a.position) != Location::Inside) continue;
        if (a.weight < 0.0) {
            fit.diagnostic = "negative curvature atom in E";
            return fit;
        }
        ++found;
        z0 = a.position;
        fit.alpha = 2.0 * a.weight / (4.0 * pi);  // omega_+ = 2 k_s
    }
    if (found > 1) {
        fit.diagnostic = "multiple atoms in E";
        fit.alpha = 0.0;
        return fit;
    }
    if (fit.alpha >= 1.0) {
        fit.diagnostic = "atom mass at or above the cusp threshold";
        return fit;
    }

    const double R = disk->radius;
    std::complex<double> cE = to_complex(disk->center);
    std::complex<double> a = (to_complex(z0) - cE) / R;
    fit.mobius_a = a;
    fit.rotation = 0.0;

    auto phi = [&](std::complex<double> z) {
        std::complex<double> zeta = (z - cE) / R;
        return (zeta - a) / (1.0 - std::conj(a) * zeta);
    };
    auto phi_prime_abs = [&](std::complex<double> z) {
        std::complex<double> zeta = (z - cE) / R;
        std::complex<double> den = 1.0 - std::conj(a) * zeta;
        return (1.0 - std::norm(a)) / std::norm(den) / R;
    };

    // Sample points on rings, skipping the atom's and boundary's neighborhoods.
    std::vector<Point2> pts;
    int rings = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    int per_ring = std::max(8, samples / rings);
    for (int i = 0; i < rings && static_cast<int>(pts.size()) < samples; ++i) {
        double rr = R * (0.15 + 0.7 * (i + 0.5) / rings);
        for (int j = 0; j < per_ring && static_cast<int>(pts.size()) < samples; ++j) {
            double th = 2.0 * pi * (j + 0.31 * (i % 3)) / per_ring;
            Point2 z = disk->center + Point2{rr * std::cos(th), rr * std::sin(th)};
            if (dist(z, z0) < 0.05 * R) continue;
            bool near_jump = false;
            for (const auto& jc : c.K.info.jump_circles)
                if (std::abs(dist(z, jc.center) - jc.radius) < 1e-6 * R) near_jump = true;
            if (!near_jump) pts.push_back(z);
        }
    }
    if (pts.size() < 8) throw config_error("fit_sharp_metric: too few usable sample points");

    // K == K0 on the samples.
    for (const auto& z : pts) {
        double Kz = c.K.eval(z);
        if (std::abs(Kz - K0) > 1e-6 * std::max(1.0, std::abs(K0))) {
            fit.diagnostic = "curvature density differs from K0 on samples (K mismatch)";
            return fit;
        }
    }

    const double q = 1.0 - fit.alpha;
    std::vector<double> y(pts.size()), gshape(pts.size()), ccoef(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::complex<double> z = to_complex(pts[i]);
        double abs_phi = std::abs(phi(z));
        y[i] = eval_rho(g, pts[i]);
        gshape[i] = 2.0 * std::log(phi_prime_abs(z)) - 2.0 * fit.alpha * std::log(abs_phi);
        ccoef[i] = K0 * std::pow(abs_phi, 2.0 * q) / (4.0 * q * q);
    }

    // Least squares over x = log tau^2 of
    //   m_i(x) = x + gshape_i - 2 log(1 + ccoef_i e^x).
    // The objective is multimodal in x, so locate the global basin by a scan
    // and polish with golden section.
    auto S = [&](double x) {
        double ex = std::exp(x);
        double acc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double mi = x + gshape[i] - 2.0 * std::log1p(ccoef[i] * ex);
            acc += (mi - y[i]) * (mi - y[i]);
        }
        return acc;
    };

    double x = 0.0;
    if (K0 == 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) acc += y[i] - gshape[i];
        x = acc / pts.size();
    } else {
        double best_x = 0.0, best_S = std::numeric_limits<double>::infinity();
        for (double xx = -80.0; xx <= 80.0; xx += 0.25) {
            double s = S(xx);
            if (s < best_S) {
                best_S = s;
                best_x = xx;
            }
        }
        double lo = best_x - 0.25, hi = best_x + 0.25;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double s1 = S(x1), s2 = S(x2);
        for (int it = 0; it < 120; ++it) {
            if (s1 < s2) {
                hi = x2;
                x2 = x1;
                s2 = s1;
                x1 = hi - gr * (hi - lo);
                s1 = S(x1);
            } else {
                lo = x1;
                x1 = x2;
                s1 = s2;
                x2 = lo + gr * (hi - lo);
                s2 = S(x2);
            }
        }
        x = 0.5 * (lo + hi);
    }
    fit.tau = std::exp(0.5 * x);

    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double mi = x + gshape[i] - 2.0 * std::log1p(ccoef[i] * std::exp(x));
        worst = std::max(worst, std::abs(std::expm1(y[i] - mi)));
    }
    fit.residual = worst;
    fit.sharp = worst <= tol;
    if (!fit.sharp && fit.diagnostic.empty()) fit.diagnostic = "pointwise profile misfit above tolerance";
    return fit;
}

}  // namespace scm
