#include "scm/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scm/errors.hpp"

namespace scm {

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

RadialProfile::RadialProfile(double alpha, double C, double K0, std::vector<double> t_grid,
                             std::vector<double> eta, std::vector<double> eta_t)
    : alpha_(alpha), C_(C), K0_(K0), t_(std::move(t_grid)), eta_(std::move(eta)), eta_t_(std::move(eta_t)) {
    if (!(alpha_ < 1.0)) throw config_error("radial profile: alpha must be < 1");
    if (!(C_ > 0.0)) throw config_error("radial profile: C must be positive");
    if (!(K0_ >= 0.0)) throw config_error("radial profile: K0 must be nonnegative");
    if (t_.size() < 4 || t_.size() != eta_.size() || t_.size() != eta_t_.size())
        throw config_error("radial profile: inconsistent sample arrays");
    if (t_.front() != 0.0 || std::abs(t_.back() - 1.0) > 1e-14)
        throw config_error("radial profile: t-grid must span [0, 1]");
    if (std::abs(eta_.back()) > 1e-10)
        throw config_error("radial profile: eta(1) must vanish (Dirichlet boundary)");
    t_plus_ = eta_.front();
    double max_increment = 0.0;
    for (std::size_t i = 0; i + 1 < eta_.size(); ++i)
        max_increment = std::max(max_increment, eta_[i + 1] - eta_[i]);
    bool trivial = std::abs(t_plus_) <= 1e-13;
    if (!trivial && max_increment > 1e-12)
        throw config_error("radial profile: eta must be decreasing");
    for (double v : eta_)
        if (v < -1e-10) throw config_error("radial profile: eta must be nonnegative");
    eta_.back() = 0.0;
    build_Q();
}

void RadialProfile::build_Q() {
    // Composite Simpson on the uniform grid for Q(t) = int_0^t e^eta s ds.
    Q_.assign(t_.size(), 0.0);
    for (std::size_t i = 1; i < t_.size(); ++i) {
        double a = t_[i - 1], b = t_[i];
        double fa = std::exp(eta_[i - 1]) * a;
        double fb = std::exp(eta_[i]) * b;
        double tm = 0.5 * (a + b);
        double fm = std::exp(eta_of_t(tm)) * tm;
        Q_[i] = Q_[i - 1] + (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
}

namespace {

std::size_t segment_index(const std::vector<double>& t, double x) {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(t.begin(), it));
    if (i == 0) return 0;
    return std::min(i - 1, t.size() - 2);
}

// Cubic Hermite on an increasing (not necessarily uniform) grid.
double hermite(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& yp,
               double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    std::size_t i = segment_index(t, x);
    double hi = t[i + 1] - t[i];
    double u = (x - t[i]) / hi;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    return h00 * y[i] + h10 * hi * yp[i] + h01 * y[i + 1] + h11 * hi * yp[i + 1];
}

double hermite_derivative(const std::vector<double>& t, const std::vector<double>& y,
                          const std::vector<double>& yp, double x) {
    if (x <= t.front()) return yp.front();
    if (x >= t.back()) return yp.back();
    std::size_t i = segment_index(t, x);
    double hi = t[i + 1] - t[i];
    double u = (x - t[i]) / hi;
    double d00 = (6 * u * u - 6 * u) / hi;
    double d10 = 3 * u * u - 4 * u + 1;
    double d01 = (6 * u - 6 * u * u) / hi;
    double d11 = 3 * u * u - 2 * u;
    return d00 * y[i] + d10 * yp[i] + d01 * y[i + 1] + d11 * yp[i + 1];
}

}  // namespace

double RadialProfile::eta_of_t(double t) const { return hermite(t_, eta_, eta_t_, t); }
double RadialProfile::eta_t_of_t(double t) const { return hermite_derivative(t_, eta_, eta_t_, t); }
double RadialProfile::eta_of_r(double r) const { return eta_of_t(std::pow(r, 1.0 - alpha_)); }

double RadialProfile::Q_of_t(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return Q_.back();
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::distance(t_.begin(), it)) - 1,
                                          t_.size() - 2);
    // Simpson over the partial subinterval.
    double a = t_[i];
    double fa = std::exp(eta_[i]) * a;
    double tm = 0.5 * (a + t);
    double fm = std::exp(eta_of_t(tm)) * tm;
    double fb = std::exp(eta_of_t(t)) * t;
    return Q_[i] + (t - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double RadialProfile::t_of_level(double level) const {
    if (!(level >= -1e-12 && level <= t_plus_ + 1e-12))
        throw config_error("radial profile: level outside [0, eta(0)]");
    if (t_plus_ <= 1e-13) return level <= 0.0 ? 1.0 : 0.0;
    level = std::clamp(level, 0.0, t_plus_);
    // Monotone bisection on the Hermite interpolant.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (eta_of_t(mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RadialProfile RadialProfile::scaled_eta(double factor) const {
    std::vector<double> e(eta_.size()), ep(eta_t_.size());
    for (std::size_t i = 0; i < eta_.size(); ++i) {
        e[i] = factor * eta_[i];
        ep[i] = factor * eta_t_[i];
    }
    return RadialProfile(alpha_, C_, K0_, t_, std::move(e), std::move(ep));
}

// ---------------------------------------------------------------------------
// Shooting solver
// ---------------------------------------------------------------------------

namespace {

struct ShotResult {
    std::vector<double> t, eta, eta_t;
    double eta1 = 0.0;  // eta(1)
    double xi1 = 0.0;   // d eta(1) / d eta0 (variational solution)
};

// Integrates the regularized system in t = r^{1-alpha}:
//   eta'' + eta'/t = -S e^eta,   S = 2 K0 C / (1-alpha)^2,
// with the variational equation for xi = d eta / d eta0 alongside.
ShotResult shoot(double S, double eta0, int n_steps, bool keep_profile) {
    const double t0 = 1e-3;
    double lam2 = S * std::exp(eta0) / 8.0;  // series scale

    ShotResult out;
    double t = t0;
    // Series start: eta = eta0 - 2 log(1 + lam2 t^2) + O(t^6) correction terms
    // are below 1e-18 at t0 for moderate lam2; use the exact local model.
    double eta = eta0 - 2.0 * std::log1p(lam2 * t0 * t0);
    double eta_t = -4.0 * lam2 * t0 / (1.0 + lam2 * t0 * t0);
    double xi = 1.0 - 2.0 * lam2 * t0 * t0 / (1.0 + lam2 * t0 * t0);
    double xi_t = -4.0 * lam2 * t0 / std::pow(1.0 + lam2 * t0 * t0, 2);

    if (keep_profile) {
        out.t.push_back(0.0);
        out.eta.push_back(eta0);
        out.eta_t.push_back(0.0);
    }

    const double h = (1.0 - t0) / n_steps;
    auto rhs = [S](double tt, const double y[4], double dy[4]) {
        double src = S * std::exp(y[0]);
        dy[0] = y[1];
        dy[1] = -y[1] / tt - src;
        dy[2] = y[3];
        dy[3] = -y[3] / tt - src * y[2];
    };

    double y[4] = {eta, eta_t, xi, xi_t};
    int record_every = keep_profile ? std::max(1, n_steps / 4096) : n_steps + 1;
    for (int i = 0; i < n_steps; ++i) {
        double k1[4], k2[4], k3[4], k4[4], tmp[4];
        rhs(t, y, k1);
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
        rhs(t + 0.5 * h, tmp, k2);
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
        rhs(t + 0.5 * h, tmp, k3);
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
        rhs(t + h, tmp, k4);
        for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        t += h;
        if (keep_profile && ((i + 1) % record_every == 0 || i + 1 == n_steps)) {
            out.t.push_back(t);
            out.eta.push_back(y[0]);
            out.eta_t.push_back(y[1]);
        }
    }
    out.eta1 = y[0];
    out.xi1 = y[2];
    return out;
}

RadialProfile profile_from_shot(double K0, double alpha, double C, double S, double eta0) {
    // Final dense pass on a uniform grid (resampled from the integrator),
    // shifted so eta(1) = 0 exactly.
    const int N = 8192;
    ShotResult res = shoot(S, eta0, N, true);
    // Resample onto a uniform grid including t = 0 via Hermite on the raw
    // output (the raw grid is uniform on [t0, 1] plus the t = 0 node).
    int M = 2048;
    std::vector<double> t(M + 1), e(M + 1), ep(M + 1);
    // Build a helper interpolant over the recorded nodes.
    for (int i = 0; i <= M; ++i) {
        double tt = static_cast<double>(i) / M;
        t[i] = tt;
        if (tt <= res.t[1]) {
            // series zone
            double lam2 = S * std::exp(eta0) / 8.0;
            e[i] = eta0 - 2.0 * std::log1p(lam2 * tt * tt);
            ep[i] = -4.0 * lam2 * tt / (1.0 + lam2 * tt * tt);
        } else {
            e[i] = hermite(res.t, res.eta, res.eta_t, tt);
            ep[i] = hermite_derivative(res.t, res.eta, res.eta_t, tt);
        }
    }
    double shift = e.back();
    for (auto& v : e) v -= shift;  // pin the Dirichlet condition exactly
    e.back() = 0.0;
    return RadialProfile(alpha, C, K0, std::move(t), std::move(e), std::move(ep));
}

}  // namespace

RadialProfile solve_radial_liouville(double K0, double alpha, double C) {
    if (!(alpha < 1.0)) throw config_error("solve_radial_liouville: alpha must be < 1");
    if (!(C > 0.0)) throw config_error("solve_radial_liouville: C must be positive");
    if (!(K0 >= 0.0)) throw config_error("solve_radial_liouville: K0 must be nonnegative");

    const double q = 1.0 - alpha;
    if (K0 == 0.0) {
        // Linear problem with zero source: eta == 0.
        int M = 2048;
        std::vector<double> t(M + 1), e(M + 1, 0.0), ep(M + 1, 0.0);
        for (int i = 0; i <= M; ++i) t[i] = static_cast<double>(i) / M;
        return RadialProfile(alpha, C, K0, std::move(t), std::move(e), std::move(ep));
    }

    const double S = 2.0 * K0 * C / (q * q);
    const int N = 4096;
    auto g = [&](double eta0) { return shoot(S, eta0, N, false); };

    // Scan [0, 20] for the first sign change of eta(1). eta(1;0) < 0 always,
    // so the first crossing is the minimal solution branch.
    const double scan_hi = 20.0;
    const double step = 0.25;
    double lo = 0.0, hi = -1.0;
    ShotResult prev = g(0.0);
    double prev_eta0 = 0.0;
    for (double x = step; x <= scan_hi + 1e-9; x += step) {
        ShotResult cur = g(x);
        if (prev.eta1 <= 0.0 && cur.eta1 >= 0.0) {
            lo = prev_eta0;
            hi = x;
            break;
        }
        prev = cur;
        prev_eta0 = x;
    }

    double root;
    if (hi > 0.0) {
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            (g(mid).eta1 < 0.0 ? lo : hi) = mid;
        }
        root = 0.5 * (lo + hi);
    } else {
        // No crossing found at scan resolution: either a near-tangent pair of
        // roots or no solution. Locate the peak of eta(1) via the variational
        // derivative, which changes sign + -> - at the maximum.
        double a = 0.0, b = scan_hi;
        if (g(a).xi1 <= 0.0)
            throw numerical_rejection(
                "solve_radial_liouville: shooting failed over the bracket [0,20]; eta(1) is "
                "decreasing from eta(0) = 0 (supercritical weight, no solution branch)");
        if (g(b).xi1 >= 0.0)
            throw numerical_rejection(
                "solve_radial_liouville: shooting failed; no maximum of eta(1) inside the bracket [0,20]");
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (a + b);
            (g(mid).xi1 > 0.0 ? a : b) = mid;
        }
        double peak = 0.5 * (a + b);
        double gpeak = g(peak).eta1;
        if (gpeak < -1e-9) {
            std::ostringstream msg;
            msg << "solve_radial_liouville: no solution; max eta(1) = " << gpeak << " at eta(0) = " << peak
                << " over bracket [0," << scan_hi << "]";
            throw numerical_rejection(msg.str());
        }
        if (gpeak <= 1e-9) {
            root = peak;  // tangent (critical-mass) root
        } else {
            // Positive peak missed by the scan: minimal root lies in [0, peak].
            double l2 = 0.0, h2 = peak;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (l2 + h2);
                (g(mid).eta1 < 0.0 ? l2 : h2) = mid;
            }
            root = 0.5 * (l2 + h2);
        }
    }
    return profile_from_shot(K0, alpha, C, S, root);
}

// ---------------------------------------------------------------------------
// Distribution function and rearrangement
// ---------------------------------------------------------------------------

double distribution_at(const RadialProfile& p, double t) {
    double q = 1.0 - p.alpha();
    double T = p.t_of_level(t);
    return pi * p.weight_constant() / q * T * T;
}

std::vector<double> distribution(const RadialProfile& p, const std::vector<double>& t_grid) {
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(distribution_at(p, t));
    return out;
}

RearrangementData rearrangement(const RadialProfile& p, const std::vector<double>& s_grid) {
    double q = 1.0 - p.alpha();
    double C = p.weight_constant();
    double K0 = p.K0();
    double mu0 = pi * C / q;

    RearrangementData d;
    d.s_grid = s_grid;
    d.mu0 = mu0;
    d.alpha = p.alpha();
    d.C = C;
    d.K0 = K0;
    d.gamma = 2.0 * pi * (1.0 - p.alpha());  // 2 pi - K_+(B1;K0), cone-weight value 2 pi alpha
    d.M = (2.0 * pi * C / q) * p.Q_of_t(1.0);

    d.eta_star.reserve(s_grid.size());
    d.F.reserve(s_grid.size());
    d.P_plus.reserve(s_grid.size());
    for (double s : s_grid) {
        if (!(s >= -1e-12 && s <= mu0 * (1.0 + 1e-12)))
            throw config_error("rearrangement: s outside [0, mu(0)]");
        double T = std::sqrt(std::clamp(q * s / (pi * C), 0.0, 1.0));
        double es = p.eta_of_t(T);
        double F = (4.0 * pi * K0 * C / q) * p.Q_of_t(T);
        double Fp = 2.0 * K0 * std::exp(es);
        d.eta_star.push_back(es);
        d.F.push_back(F);
        d.P_plus.push_back(2.0 * d.gamma * s * Fp - 2.0 * d.gamma * F + 0.5 * F * F);
    }
    return d;
}

std::vector<double> default_s_grid(const RadialProfile& p, int n) {
    double mu0 = pi * p.weight_constant() / (1.0 - p.alpha());
    std::vector<double> s(n);
    const double k = 8.0;  // endpoint refinement strength
    double denom = 2.0 * std::sinh(0.5 * k);
    for (int i = 0; i < n; ++i) {
        double u = static_cast<double>(i) / (n - 1);
        s[i] = mu0 * (0.5 + std::sinh(k * (u - 0.5)) / denom);
    }
    s.front() = 0.0;
    s.back() = mu0;
    return s;
}

ChainVerdict verify_chain(const RearrangementData& d, double tol) {
    ChainVerdict v;
    const auto& s = d.s_grid;
    std::size_t n = s.size();
    double q = 1.0 - d.alpha;
    double L2 = 4.0 * pi * pi * d.C;  // (sigma-length of Gamma(0))^2 for the cone weight

    // (i) Huber level bound: (sigma-length at level eta*(s))^2 >= 2 gamma s.
    // The level boundary at eta*(s) is the circle with t = sqrt(q s / pi C),
    // whose sigma-length squared is 4 pi^2 C t^2 = 4 pi q s.
    double worst_huber = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double len2 = 4.0 * pi * q * s[i];
        worst_huber = std::min(worst_huber, len2 - 2.0 * d.gamma * s[i]);
    }
    v.huber_margin = worst_huber;
    double scale_h = std::max(1.0, 2.0 * d.gamma * d.mu0);
    v.huber_ok = worst_huber >= -tol * scale_h;

    // (ii) discrete P_plus monotone.
    double worst_inc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) worst_inc = std::min(worst_inc, d.P_plus[i + 1] - d.P_plus[i]);
    v.monotone_margin = worst_inc;
    double Fend = d.F.empty() ? 0.0 : d.F.back();
    double scale_p = std::max(1.0, Fend * Fend);
    v.monotone_ok = worst_inc >= -tol * scale_p;
    v.p_plus_drift = d.P_plus.empty() ? 0.0 : d.P_plus.back() - d.P_plus.front();

    // (iii) final chain.
    v.final_margin1 = L2 - 2.0 * d.gamma * d.mu0;
    v.final_margin2 = 2.0 * d.gamma * d.mu0 - (2.0 * d.gamma - d.K0 * d.M) * d.M;
    double scale_f = std::max(1.0, L2);
    v.final_ok = v.final_margin1 >= -tol * scale_f && v.final_margin2 >= -tol * scale_f;
    v.equality_margin = std::abs(L2 - (4.0 * pi - 4.0 * pi * d.alpha - d.K0 * d.M) * d.M);

    // (iv) interior Lipschitz bound of eta*.
    double a = d.mu0 / 10.0, b = 9.0 * d.mu0 / 10.0;
    double worst_quot = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (s[i] < a || s[i + 1] > b) continue;
        double ds = s[i + 1] - s[i];
        if (ds <= 0.0) continue;
        worst_quot = std::max(worst_quot, std::abs(d.eta_star[i + 1] - d.eta_star[i]) / ds);
    }
    v.lipschitz_bound = worst_quot;

    v.all_ok = v.huber_ok && v.monotone_ok && v.final_ok && std::isfinite(v.lipschitz_bound);
    return v;
}

}  // namespace scm
