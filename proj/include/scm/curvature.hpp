#pragma once

#include "scm/measure.hpp"
#include "scm/metric.hpp"
#include "scm/quad.hpp"

namespace scm {

// Curvature data of a metric: density K with respect to e^rho * area measure
// plus the atomic singular part. Atoms here carry curvature mass k_s = omega/2;
// the conversion from the measure convention happens exactly once, in
// curvature_of().
struct CurvatureDecomposition {
    ScalarField K;
    SignedAtomicMeasure k_s_atoms;
};

CurvatureDecomposition curvature_of(const Decomposition& d);
CurvatureDecomposition curvature_of(const MetricSpec& g);

// Iso-inequality ingredients for one check.
struct IsoInputs {
    double L2 = 0.0;     // squared boundary length
    double M = 0.0;      // area
    double Kplus = 0.0;  // positive curvature variation
    double K0 = 0.0;
};

// integral of K e^rho over d plus the k_s mass of atoms inside d.
QuadResult total_curvature(const CurvatureDecomposition& c, const MetricSpec& g, const PlanarDomain& d,
                           QuadOptions opts = {});

// k_{s,+}(d) + integral of [K - K0]^+ e^rho over d. With purely atomic
// singular parts this realizes the Borel supremum exactly (attained on the
// positive atoms united with {K > K0}).
QuadResult positive_variation(const CurvatureDecomposition& c, const MetricSpec& g,
                              const PlanarDomain& d, double K0, QuadOptions opts = {});

struct GaussBonnetResult {
    double total = 0.0;        // curvature of both charts, atoms included
    double smooth_part = 0.0;  // density integrals over the two unit disks
    double chart2 = 0.0;       // curvature of {|z| < r0}
    double chart1 = 0.0;       // curvature of the image chart {|w| <= 1/r0}
    double error_estimate = 0.0;
};

// Total curvature of a radial two-chart closed surface: chart 2 on {|z| < r0}
// plus the w = 1/z chart on {|w| <= 1/r0}. Rejects surfaces whose chart at
// infinity has a cusp. Requires r0 > 1 and a radial metric centered at 0.
GaussBonnetResult gauss_bonnet_two_chart(const MetricSpec& g2, double r0, QuadOptions opts = {});

// K(z) ~ -Delta_h rho / (2 e^rho) with the 5-point Laplacian; second-order in
// h. z must sit at distance > 10h from atoms and radial breakpoints.
double recover_density(const MetricSpec& g, Point2 z, double h = 1e-4);

// The pointwise subsolution defect
//   phi(z) = -Delta_h u - 2 [K - K0] e^{f+u} - 2 K0 e^{f+u},
// computed from the metric's decomposition; <= 0 (within discretization
// tolerance) certifies the subsolution property at z, 0 for exact solutions.
double subsolution_residual(const MetricSpec& g, const CurvatureDecomposition& c, double K0, Point2 z,
                            double h = 1e-4);
// Same defect for an explicitly supplied decomposition (perturbation studies).
double subsolution_residual(const Decomposition& dec, const ScalarField& K, double K0, Point2 z,
                            double h = 1e-4);

}  // namespace scm
