#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "scm/fields.hpp"
#include "scm/geometry.hpp"
#include "scm/measure.hpp"

namespace scm {

// ---------------------------------------------------------------------------
// Harmonic polynomials
// ---------------------------------------------------------------------------

// Real bivariate polynomial with identically zero Laplacian, verified
// symbolically on the coefficient table at construction.
class HarmonicPoly {
  public:
    HarmonicPoly() = default;
    // coeffs[i][j] multiplies x^i y^j.
    explicit HarmonicPoly(std::vector<std::vector<double>> coeffs);

    static HarmonicPoly zero() { return {}; }
    static HarmonicPoly constant(double c);
    // c_re * Re(z^k) + c_im * Im(z^k)
    static HarmonicPoly harmonic_mode(int k, double c_re, double c_im);

    double operator()(Point2 z) const;
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }

    friend HarmonicPoly operator+(const HarmonicPoly& a, const HarmonicPoly& b);
    friend HarmonicPoly operator-(const HarmonicPoly& a, const HarmonicPoly& b);

  private:
    std::vector<std::vector<double>> coeffs_;
};

// ---------------------------------------------------------------------------
// Metric representations
// ---------------------------------------------------------------------------

// Closed-form radial expressions for log-conformal factors rho(|z|).
//   RationalPower: rho = log(A r^p / (B + C r^s)^2)
//   LogPower:      rho = -a log(1 - log r)           (defined for r < e)
// Both carry analytic off-center Laplacians, so curvature densities of
// radial metrics are exact.
struct RadialExpr {
    enum class Kind { RationalPower, LogPower };
    Kind kind = Kind::RationalPower;
    double A = 1.0, p = 0.0, B = 1.0, C = 0.0, s = 1.0;  // RationalPower
    double a = 0.0;                                      // LogPower

    static RadialExpr rational(double A, double p, double B, double C, double s);
    static RadialExpr log_power(double a);

    double rho(double r) const;
    // Laplacian of rho away from r = 0 (the absolutely continuous part).
    double laplacian(double r) const;
    // K = -laplacian / (2 e^rho) in closed form.
    double curvature_density(double r) const;
};

struct RadialPiece {
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();
    RadialExpr expr;
};

// rho(z) = log_scale + piece expression at r = |z - center|. Pieces partition
// (0, r_max); continuity at interior breakpoints is checked at construction
// (1e-10 relative). Breakpoints of the bundled presets are C^1, which the
// curvature operations assume.
class PiecewiseRadial {
  public:
    PiecewiseRadial(Point2 center, std::vector<RadialPiece> pieces, double log_scale = 0.0);

    Point2 center() const { return center_; }
    const std::vector<RadialPiece>& pieces() const { return pieces_; }
    double log_scale() const { return log_scale_; }
    double r_max() const { return pieces_.back().r_hi; }

    double rho_radial(double r) const;  // includes log_scale
    const RadialExpr& piece_at(double r) const;
    // Leading power of r at the center (p of the innermost piece).
    double leading_exponent() const;
    std::vector<double> interior_breakpoints() const;

    // Metric multiplied by exp(log_factor); curvature scales by its inverse.
    PiecewiseRadial rescaled(double log_factor) const;
    PiecewiseRadial translated(Point2 new_center) const;

  private:
    Point2 center_{0.0, 0.0};
    std::vector<RadialPiece> pieces_;
    double log_scale_ = 0.0;
};

// Constant-curvature metric with one conical point at `center`:
// rho(w) = -2 alpha log|w| + v(w),
// e^{v} = tau0^2 / (1 + K0 tau0^2 |w|^{2(1-alpha)} / (4(1-alpha)^2))^2.
struct SphericalCone {
    double K0 = 1.0;
    double alpha = 0.0;  // cone order, < 1; the omega-atom weighs 4*pi*alpha
    double tau0 = 1.0;   // nonzero scale
    Point2 center{0.0, 0.0};
};

struct Flat {};

// Optional closed-form regular part u for Potential metrics. `laplacian` may
// be empty; exact curvature densities are then unavailable and callers fall
// back to finite differences.
struct RegularPart {
    std::function<double(Point2)> value;
    std::function<double(Point2)> laplacian;
    FieldInfo info;

    bool is_zero() const { return !value; }
};

// rho = harmonic + log-potential of atoms + u, kernel (1/2pi) log(1/|z-y|).
struct PotentialMetric {
    HarmonicPoly harmonic;
    SignedAtomicMeasure atoms;
    RegularPart u;
};

using MetricSpec = std::variant<Flat, PiecewiseRadial, SphericalCone, PotentialMetric>;

// ---------------------------------------------------------------------------
// Core evaluation
// ---------------------------------------------------------------------------

// log of the conformal factor; throws singular_point_error at atom locations.
double eval_rho(const MetricSpec& g, Point2 z);
// e^{rho(z)}.
double eval_conformal_factor(const MetricSpec& g, Point2 z);

// The measure omega of the metric's singular potential part (atoms only).
SignedAtomicMeasure atoms_of(const MetricSpec& g);

// Structure hints for integrating e^rho: polar-patch singularities at atoms,
// jump circles at radial breakpoints.
FieldInfo metric_field_info(const MetricSpec& g);

// Validated constructor for the spherical cone (alpha < 1, tau0 != 0, K0 >= 0).
MetricSpec spherical_cone(double K0, double alpha, double tau0, Point2 center = {0.0, 0.0});
// The same metric in PiecewiseRadial form (single rational piece).
PiecewiseRadial cone_as_radial(const SphericalCone& c);

// ---------------------------------------------------------------------------
// Preset corpus
// ---------------------------------------------------------------------------

// Metric of a disk with density (1 - log|z|)^{-a}; valid for 0 != a < 1,
// defined on |z| < e. Unbounded curvature of borderline integrability.
PiecewiseRadial example1(double a);
// Two-zone sphere with conical points of orders alpha1 (at infinity) and
// alpha2 (at 0); requires -1 < alpha1 <= alpha2 <= 0.
PiecewiseRadial example2(double alpha1, double alpha2);
// Cusp example, finite chart.
PiecewiseRadial example3_chart2();
// Cusp example, chart at infinity (the cusp chart), i.e. the 1/z pullback.
PiecewiseRadial example3_chart1();
// Lookup by CLI preset name; throws config_error for unknown names.
MetricSpec preset_metric(const std::string& name, double p1 = 0.0, double p2 = 0.0);

// ---------------------------------------------------------------------------
// Chart inversion and decomposition
// ---------------------------------------------------------------------------

// The metric in the w = 1/z chart: rho_1(w) = rho(1/w) - 4 log|w|.
// Radial metrics centered at the origin only.
MetricSpec pullback_inversion(const MetricSpec& g);

// The rho = f + u split: f carries the atoms (omega units) plus a harmonic
// gauge, u the regular part; K is the curvature density with respect to
// e^rho times area measure. Satisfies -Delta u = 2 K e^{f+u} away from atoms.
struct Decomposition {
    SignedAtomicMeasure f_atoms;  // omega convention (k_s = omega / 2)
    HarmonicPoly f_harmonic;
    ScalarField u;
    ScalarField K;

    double eval_f(Point2 z) const;  // harmonic + log potential of f_atoms
    double eval_u(Point2 z) const { return u.eval(z); }
    double eval_K(Point2 z) const { return K.eval(z); }

    // Gauge freedom: {u - h, f + h} represents the same metric; K and the
    // atoms are unchanged.
    Decomposition gauge_shifted(const HarmonicPoly& h) const;
};

// Throws numerical_rejection when the metric has a cusp (e^rho then fails to
// be locally integrable and no curvature density exists).
Decomposition decompose(const MetricSpec& g);

}  // namespace scm
