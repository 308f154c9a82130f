#include <doctest.h>

#include <cmath>

#include "scm/errors.hpp"
#include "scm/rearrange.hpp"

using namespace scm;

namespace {

// Closed-form Dirichlet profile in the regularized coordinate t = r^{1-alpha}:
// eta = log(tau0^2 / (1 + m tau0^2 t^2)^2), m = K0 C / (4 (1-alpha)^2), with
// tau0 the minimal root of tau = 1 + m tau^2.
double closed_eta(double K0, double alpha, double C, double t) {
    if (K0 == 0.0) return 0.0;
    double q = 1.0 - alpha;
    double m = K0 * C / (4.0 * q * q);
    double tau0 = (1.0 - std::sqrt(1.0 - 4.0 * m)) / (2.0 * m);
    double tau2 = tau0 * tau0;
    return std::log(tau2) - 2.0 * std::log1p(m * tau2 * t * t);
}

}  // namespace

TEST_CASE("shooting solver against the closed form") {
    SUBCASE("subcritical grid, 1e-8 sup norm") {
        for (double K0 : {0.0, 0.5, 1.0}) {
            for (double alpha : {-0.5, 0.0, 0.5, 0.75}) {
                double q = 1.0 - alpha;
                double C = 0.5 * q * q;  // K0 C / (4 q^2) = K0/8 strictly subcritical
                RadialProfile p = solve_radial_liouville(K0, alpha, C);
                double sup = 0.0;
                for (int i = 0; i <= 500; ++i) {
                    double t = i / 500.0;
                    sup = std::max(sup, std::abs(p.eta_of_t(t) - closed_eta(K0, alpha, C, t)));
                }
                CHECK(sup <= 1e-8);
            }
        }
    }
    SUBCASE("classic critical case: tangent root tau0 = 2") {
        RadialProfile p = solve_radial_liouville(1.0, 0.0, 1.0);
        CHECK(p.t_plus() == doctest::Approx(std::log(4.0)).epsilon(1e-10));
        double sup = 0.0;
        for (int i = 0; i <= 500; ++i) {
            double t = i / 500.0;
            sup = std::max(sup, std::abs(p.eta_of_t(t) - closed_eta(1.0, 0.0, 1.0, t)));
        }
        CHECK(sup <= 1e-8);
    }
    SUBCASE("zero reference curvature gives the zero profile") {
        RadialProfile p = solve_radial_liouville(0.0, 0.3, 2.0);
        CHECK(p.t_plus() == 0.0);
        CHECK(p.eta_of_r(0.5) == 0.0);
    }
    SUBCASE("supercritical weight is rejected with bracket diagnostics") {
        CHECK_THROWS_WITH_AS(solve_radial_liouville(1.0, 0.5, 1.0), doctest::Contains("bracket"),
                             numerical_rejection);
    }
    SUBCASE("half-order cone against the closed form (spec example)") {
        RadialProfile p = solve_radial_liouville(1.0, 0.5, 0.1);  // m = 0.1 subcritical
        double sup = 0.0;
        for (int i = 0; i <= 500; ++i) {
            double t = i / 500.0;
            sup = std::max(sup, std::abs(p.eta_of_t(t) - closed_eta(1.0, 0.5, 0.1, t)));
        }
        CHECK(sup <= 1e-8);
    }
}

TEST_CASE("distribution function of the superlevel sets") {
    RadialProfile p = solve_radial_liouville(1.0, 0.0, 1.0);
    double mu0 = pi;  // pi C / (1 - alpha)
    CHECK(distribution_at(p, 0.0) == doctest::Approx(mu0).epsilon(1e-12));
    CHECK(distribution_at(p, p.t_plus()) == doctest::Approx(0.0).scale(1.0));
    SUBCASE("flat weight: mu(t) = pi r(t)^2") {
        for (double level : {0.2, 0.7, 1.2}) {
            double T = p.t_of_level(level);  // t == r for alpha = 0
            CHECK(distribution_at(p, level) == doctest::Approx(pi * T * T).epsilon(1e-12));
        }
    }
    SUBCASE("weighted case mu(0) = pi C / (1 - alpha)") {
        RadialProfile q = solve_radial_liouville(0.5, -0.5, 1.0);
        CHECK(distribution_at(q, 0.0) == doctest::Approx(pi / 1.5).epsilon(1e-12));
    }
    SUBCASE("levels outside the range are rejected") {
        CHECK_THROWS_AS(distribution_at(p, p.t_plus() + 0.5), config_error);
        CHECK_THROWS_AS(distribution_at(p, -0.5), config_error);
    }
}

TEST_CASE("rearrangement data on the default grid") {
    RadialProfile p = solve_radial_liouville(1.0, 0.25, 0.25);
    RearrangementData d = rearrangement(p, default_s_grid(p, 2001));
    double mu0 = d.mu0;

    SUBCASE("endpoints") {
        CHECK(d.eta_star.front() == doctest::Approx(p.t_plus()).epsilon(1e-10));
        CHECK(d.eta_star.back() == doctest::Approx(0.0).scale(1.0));
        CHECK(d.F.front() == 0.0);
        CHECK(d.F.back() == doctest::Approx(2.0 * d.K0 * d.M).epsilon(1e-10));
    }
    SUBCASE("eta* is the inverse of mu") {
        for (std::size_t i = 100; i + 100 < d.s_grid.size(); i += 200) {
            double s = d.s_grid[i];
            CHECK(distribution_at(p, d.eta_star[i]) == doctest::Approx(s).epsilon(1e-8));
        }
    }
    SUBCASE("F' identity against central differences") {
        for (std::size_t i = 200; i + 200 < d.s_grid.size(); i += 150) {
            double h = d.s_grid[i + 1] - d.s_grid[i - 1];
            double fd = (d.F[i + 1] - d.F[i - 1]) / h;
            double exact = 2.0 * d.K0 * std::exp(d.eta_star[i]);
            CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
        }
    }
    SUBCASE("monotone eta* and F") {
        for (std::size_t i = 0; i + 1 < d.s_grid.size(); ++i) {
            CHECK(d.eta_star[i + 1] <= d.eta_star[i] + 1e-14);
            CHECK(d.F[i + 1] >= d.F[i] - 1e-14);
        }
    }
    SUBCASE("out-of-range s rejected") {
        CHECK_THROWS_AS(rearrangement(p, {mu0 * 1.5}), config_error);
    }
}

TEST_CASE("inequality chain verdicts") {
    SUBCASE("cone equality cases: margins at zero") {
        for (double alpha : {0.0, 0.25}) {
            double q = 1.0 - alpha;
            RadialProfile p = solve_radial_liouville(1.0, alpha, 0.5 * q * q);
            RearrangementData d = rearrangement(p, default_s_grid(p, 2001));
            ChainVerdict v = verify_chain(d, 1e-6);
            CHECK(v.all_ok);
            double Fend = d.F.back();
            CHECK(std::abs(v.p_plus_drift) <= 1e-6 * std::max(1.0, Fend * Fend));
            CHECK(v.equality_margin <= 1e-6 * std::max(1.0, 4 * pi * pi * d.C));
        }
    }
    SUBCASE("strict subsolution profile: monotone with positive final drift") {
        // c eta is a subsolution of the cone equation iff eta <= -log(c)/(1-c);
        // scale 0.4 keeps the sphere profile (t+ = log 4) below that threshold.
        RadialProfile p = solve_radial_liouville(1.0, 0.0, 1.0);
        RadialProfile ps = p.scaled_eta(0.4);
        RearrangementData d = rearrangement(ps, default_s_grid(ps, 2001));
        ChainVerdict v = verify_chain(d, 1e-6);
        CHECK(v.all_ok);
        CHECK(v.monotone_margin >= -1e-9);
        CHECK(v.p_plus_drift > 1.0);
    }
    SUBCASE("above the subsolution threshold the defect flips (negative control)") {
        RadialProfile p = solve_radial_liouville(1.0, 0.0, 1.0);
        RadialProfile ps = p.scaled_eta(0.95);  // not a subsolution where eta > 1.026
        RearrangementData d = rearrangement(ps, default_s_grid(ps, 2001));
        ChainVerdict v = verify_chain(d, 1e-6);
        CHECK_FALSE(v.monotone_ok);
    }
    SUBCASE("zero reference curvature degenerates the chain") {
        RadialProfile p = solve_radial_liouville(0.0, 0.0, 1.0);
        RearrangementData d = rearrangement(p, default_s_grid(p, 501));
        ChainVerdict v = verify_chain(d, 1e-6);
        CHECK(v.all_ok);
        for (double F : d.F) CHECK(F == 0.0);
        for (double P : d.P_plus) CHECK(P == 0.0);
    }
    SUBCASE("interior lipschitz bound is stable under grid refinement") {
        RadialProfile p = solve_radial_liouville(1.0, 0.25, 0.25);
        RearrangementData d1 = rearrangement(p, default_s_grid(p, 1001));
        RearrangementData d2 = rearrangement(p, default_s_grid(p, 2001));
        ChainVerdict v1 = verify_chain(d1, 1e-6);
        ChainVerdict v2 = verify_chain(d2, 1e-6);
        CHECK(v1.lipschitz_bound > 0.0);
        double ratio = v2.lipschitz_bound / v1.lipschitz_bound;
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}

TEST_CASE("profile construction invariants") {
    RadialProfile p = solve_radial_liouville(1.0, 0.0, 1.0);
    SUBCASE("scaled profiles keep the Dirichlet condition") {
        RadialProfile ps = p.scaled_eta(0.4);
        CHECK(ps.eta_of_t(1.0) == 0.0);
        CHECK(ps.t_plus() == doctest::Approx(0.4 * p.t_plus()));
    }
    SUBCASE("increasing eta is rejected") {
        std::vector<double> t = {0.0, 0.25, 0.5, 0.75, 1.0};
        std::vector<double> bad = {1.0, 1.2, 0.8, 0.4, 0.0};
        std::vector<double> slope(5, 0.0);
        CHECK_THROWS_AS(RadialProfile(0.0, 1.0, 1.0, t, bad, slope), config_error);
    }
    SUBCASE("nonzero boundary value is rejected") {
        std::vector<double> t = {0.0, 0.25, 0.5, 0.75, 1.0};
        std::vector<double> bad = {1.0, 0.8, 0.6, 0.4, 0.2};
        std::vector<double> slope(5, -0.8);
        CHECK_THROWS_AS(RadialProfile(0.0, 1.0, 1.0, t, bad, slope), config_error);
    }
}
