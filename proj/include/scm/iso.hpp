#pragma once

#include <complex>
#include <string>

#include "scm/curvature.hpp"
#include "scm/domain.hpp"
#include "scm/metric.hpp"
#include "scm/quad.hpp"

namespace scm {

// Result of one isoperimetric check: lhs = L^2(boundary), rhs the inequality's
// right-hand side, deficit = lhs - rhs. Quadrature errors are propagated to
// first order and folded into the equality verdict.
struct IsoReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double deficit = 0.0;
    bool equality = false;
    IsoInputs inputs;
    double tol = 1e-6;

    double lhs_error = 0.0;
    double rhs_error = 0.0;
    bool vacuous = false;          // rhs < 0: inequality holds trivially
    bool must_be_strict = false;   // multiply connected / hole-filled variants
    bool strict_certified = false; // deficit exceeds the propagated errors
    bool violated = false;         // deficit below -(errors + tol scale)
    std::string note;
};

// L^2(dE) >= (4pi - omega_+(E)) M(E) for a pure f-part metric on a simple
// domain (the whole metric is treated as f).
IsoReport huber_check(const MetricSpec& f_metric, const PlanarDomain& E, double tol = 1e-6,
                      QuadOptions opts = {});

// Regular-domain variant: lengths and area over U, omega_+ evaluated on the
// enclosing simple E >= U; strict whenever U has holes.
IsoReport huber_regular_check(const MetricSpec& f_metric, const PlanarDomain& U, const PlanarDomain& E,
                              double tol = 1e-6, QuadOptions opts = {});

// L^2(dE) >= (4pi - 2 K_+(E;K0) - K0 M(E)) M(E) on simple domains.
IsoReport alexandrov_check(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                           double K0, double tol = 1e-6, QuadOptions opts = {});

// Hole-filled variant: K_+ over fill_holes(E), M over E; always strict.
IsoReport alexandrov_regular_check(const MetricSpec& g, const CurvatureDecomposition& c,
                                   const PlanarDomain& E, double K0, double tol = 1e-6,
                                   QuadOptions opts = {});

// Bol specialization: requires K == 1 on E (sampled via recover_density) and
// at most one positive curvature atom in E; runs alexandrov_check with K0 = 1.
IsoReport bol_check(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                    double tol = 1e-6, QuadOptions opts = {});

// Least-squares fit of the metric against the extremal cone profile
//   e^rho = tau^2 |Phi' Phi^{-alpha}|^2 / (1 + K0 tau^2 |Phi|^{2(1-alpha)} / (4(1-alpha)^2))^2
// on a disk E, with Phi the Moebius-plus-rescaling map sending the atom to 0.
struct SharpFit {
    double alpha = 0.0;
    double tau = 0.0;
    std::complex<double> mobius_a{0.0, 0.0};  // |a| < 1, pre-rotation parameter
    double rotation = 0.0;                    // canonical 0 (drops out of the profile)
    double residual = 0.0;                    // max relative pointwise misfit
    bool sharp = false;
    std::string diagnostic;
};

SharpFit fit_sharp_metric(const MetricSpec& g, const CurvatureDecomposition& c, const PlanarDomain& E,
                          double K0, int samples = 200, double tol = 1e-6);

}  // namespace scm
