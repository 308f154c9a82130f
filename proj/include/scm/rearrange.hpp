#pragma once

#include <vector>

#include "scm/geometry.hpp"

namespace scm {

// Radial solution data of the weighted Dirichlet problem
//   -Delta eta = 2 K0 C r^{-2 alpha} e^eta on B_1,  eta = 0 on |z| = 1,
// stored densely in the regularized coordinate t = r^{1-alpha} (in which the
// equation loses its singular weight). eta decreases from t_plus = eta(0) to 0.
class RadialProfile {
  public:
    // Dense Hermite data on a uniform t-grid: values, t-derivatives, and the
    // cumulative integral Q(t) = int_0^t e^eta s ds.
    RadialProfile(double alpha, double C, double K0, std::vector<double> t_grid,
                  std::vector<double> eta, std::vector<double> eta_t);

    double alpha() const { return alpha_; }
    double weight_constant() const { return C_; }
    double K0() const { return K0_; }
    double t_plus() const { return t_plus_; }

    double eta_of_t(double t) const;
    double eta_t_of_t(double t) const;
    double eta_of_r(double r) const;
    double Q_of_t(double t) const;  // int_0^t e^eta s ds
    // Inverse of eta: the t with eta(t) = level (level in [0, t_plus]).
    double t_of_level(double level) const;

    // Profile with eta replaced by factor * eta (subsolution perturbations).
    RadialProfile scaled_eta(double factor) const;

    const std::vector<double>& grid() const { return t_; }

  private:
    double alpha_, C_, K0_, t_plus_;
    std::vector<double> t_, eta_, eta_t_, Q_;
    void build_Q();
};

// Shooting solve of the radial problem; matches the closed-form cone solution.
// Throws numerical_rejection with bracket diagnostics when no solution exists
// (supercritical weight).
RadialProfile solve_radial_liouville(double K0, double alpha, double C);

// mu(t) = weighted measure of the superlevel set {eta > t}; decreasing, with
// mu(0) = pi C / (1 - alpha).
std::vector<double> distribution(const RadialProfile& p, const std::vector<double>& t_grid);
double distribution_at(const RadialProfile& p, double t);

struct RearrangementData {
    std::vector<double> s_grid;
    std::vector<double> eta_star;  // decreasing rearrangement (inverse of mu)
    std::vector<double> F;         // F(s) = 2 K0 int_0^s e^{eta*(l)} dl
    std::vector<double> P_plus;    // 2 gamma s F' - 2 gamma F + F^2/2
    double mu0 = 0.0;
    double gamma = 0.0;  // 2 pi - K_+(B1;K0) = 2 pi (1 - alpha) for the cone weight
    double alpha = 0.0;
    double C = 1.0;
    double K0 = 0.0;
    double M = 0.0;  // metric area of B_1
};

// The level-set rearrangement quantities on the given s-grid (s in [0, mu(0)]).
RearrangementData rearrangement(const RadialProfile& p, const std::vector<double>& s_grid);

// Default grid: 2001 points refined toward both endpoints, where eta* has
// unbounded slope.
std::vector<double> default_s_grid(const RadialProfile& p, int n = 2001);

struct ChainVerdict {
    bool huber_ok = false;     // (level boundary sigma-length)^2 >= 2 gamma s
    bool monotone_ok = false;  // discrete P_plus non-decreasing
    bool final_ok = false;     // L^2 >= 2 gamma mu0 and 2 gamma mu0 >= (2 gamma - K0 M) M
    bool all_ok = false;

    double huber_margin = 0.0;       // worst margin of (i)
    double monotone_margin = 0.0;    // most negative P_plus increment
    double final_margin1 = 0.0;      // L^2 - 2 gamma mu0
    double final_margin2 = 0.0;      // 2 gamma mu0 - (2 gamma - K0 M) M
    double p_plus_drift = 0.0;       // P_plus(mu0) - P_plus(0)
    double equality_margin = 0.0;    // |L^2 - (4pi - 4pi alpha - K0 M) M|
    double lipschitz_bound = 0.0;    // max |d eta*/ds| difference quotient on the interior window
};

// Grid checks of the inequality chain; verdicts, not exceptions.
ChainVerdict verify_chain(const RearrangementData& d, double tol);

}  // namespace scm
