#pragma once

#include <vector>

#include "scm/domain.hpp"
#include "scm/fields.hpp"
#include "scm/metric.hpp"

namespace scm {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    long cells_used = 0;
    int singular_patches = 0;
};

struct QuadOptions {
    double rel_tol = 1e-8;
    double abs_floor = 1e-14;
    long max_cells = 300000;
    // Straddling cells refine down to diameter min_cell_factor * diam(E).
    double min_cell_factor = 1e-6;
};

// Metric length of the boundary: adaptive Gauss-Kronrod of e^{rho/2} * speed
// over every boundary arc. Rejects atoms within the ambiguity band of the
// boundary.
QuadResult boundary_length(const MetricSpec& g, const PlanarDomain& d, double rel_tol = 1e-10);

// Metric area of d: adaptive cell subdivision with exact cell/domain overlap
// for boundary-straddling cells and polar patches around interior atoms
// (substitution t = r^{1 - beta/4pi} renders the patch integrand bounded).
// Rejects cusp atoms (weight >= 4pi) inside d.
QuadResult area(const MetricSpec& g, const PlanarDomain& d, QuadOptions opts = {});

// Integral of w * e^rho over d. `w.info.singular_points` describes the local
// behaviour of the product w * e^rho (see fields.hpp); metric atoms not listed
// there are patched with the metric's own exponents.
QuadResult weighted_area(const MetricSpec& g, const PlanarDomain& d, const ScalarField& w,
                         QuadOptions opts = {});

// Cumulative integrals of |density|^p over the annuli
// { radii[k] < |z - center| < radii[0] }, k = 1..n-1, for a strictly
// decreasing radii list. Evidence source for integrability probes: bounded
// sequences indicate convergence, growing increments divergence.
std::vector<double> lp_probe(const ScalarField& density, Point2 center, double p,
                             const std::vector<double>& radii);

// Per-annulus increments (same geometry as lp_probe but non-cumulative).
std::vector<double> lp_probe_increments(const ScalarField& density, Point2 center, double p,
                                        const std::vector<double>& radii);

// Generic engine behind area/weighted_area, exposed for curvature integrals:
// integrates `f` over d with the given structure hints.
QuadResult integrate_over_domain(const std::function<double(Point2)>& f, const FieldInfo& info,
                                 const PlanarDomain& d, QuadOptions opts = {});

}  // namespace scm
