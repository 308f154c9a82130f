#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "scm/errors.hpp"
#include "scm/runner.hpp"

using namespace scm;
using nlohmann::json;

namespace {

RunnerOptions sandbox_opts() {
    RunnerOptions opts;
    opts.out_dir = (std::filesystem::temp_directory_path() / "scm_runner_test").string();
    return opts;
}

}  // namespace

TEST_CASE("config parsing and validation") {
    SUBCASE("round trip of a full config") {
        json j = {
            {"metric", {{"kind", "preset"}, {"name", "example2"}, {"alpha1", -0.5}, {"alpha2", -0.5}}},
            {"domain", {{"kind", "disk"}, {"center", {0.0, 0.0}}, {"radius", 0.5}}},
            {"checks", {{{"kind", "alexandrov"}, {"K0", 1.0}, {"tol", 1e-6}}}},
        };
        RunConfig cfg = parse_config(j);
        CHECK(cfg.checks.size() == 1);
        CHECK(cfg.checks[0].K0 == 1.0);
    }
    SUBCASE("unknown check kind fails with location") {
        json j = {{"metric", {{"kind", "flat"}}},
                  {"domain", {{"kind", "disk"}, {"radius", 1.0}}},
                  {"checks", {{{"kind", "nonsense"}}}}};
        CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("checks[0]"), config_error);
    }
    SUBCASE("missing metric") {
        json j = {{"checks", {{{"kind", "huber"}}}}};
        CHECK_THROWS_AS(parse_config(j), config_error);
    }
    SUBCASE("alexandrov requires K0") {
        json j = {{"metric", {{"kind", "flat"}}},
                  {"domain", {{"kind", "disk"}, {"radius", 1.0}}},
                  {"checks", {{{"kind", "alexandrov"}}}}};
        CHECK_THROWS_AS(parse_config(j), config_error);
    }
    SUBCASE("negative K0 rejected") {
        json j = {{"metric", {{"kind", "flat"}}},
                  {"domain", {{"kind", "disk"}, {"radius", 1.0}}},
                  {"checks", {{{"kind", "alexandrov"}, {"K0", -1.0}}}}};
        CHECK_THROWS_AS(parse_config(j), config_error);
    }
    SUBCASE("domains with holes parse") {
        json j = {{"kind", "disk"},
                  {"radius", 1.0},
                  {"holes", {{{"kind", "disk"}, {"center", {0.0, 0.0}}, {"radius", 0.25}}}}};
        PlanarDomain d = parse_domain(j);
        CHECK_FALSE(d.is_simple());
    }
}

TEST_CASE("run executes checks and maps exit codes") {
    SUBCASE("equality certified on the inner zone") {
        json j = {
            {"metric", {{"kind", "preset"}, {"name", "example2"}, {"alpha1", -0.5}, {"alpha2", -0.5}}},
            {"domain", {{"kind", "disk"}, {"radius", 0.5}}},
            {"checks",
             {{{"kind", "alexandrov"}, {"K0", 1.0}}, {{"kind", "bol"}}, {{"kind", "decompose"}}}},
        };
        RunOutcome out = run(parse_config(j), sandbox_opts());
        CHECK(out.exit_code == 0);
        CHECK(out.report["checks"][0]["equality"].get<bool>());
        CHECK(out.report["checks"][1]["equality"].get<bool>());
        CHECK(out.report["checks"][2]["recombination_residual"].get<double>() <= 1e-8);
    }
    SUBCASE("cusp chart rejections exit with 3") {
        json j = {{"metric", {{"kind", "preset"}, {"name", "example3_chart1"}}},
                  {"domain", {{"kind", "disk"}, {"radius", 0.5}}},
                  {"checks", {{{"kind", "gauss_bonnet"}, {"r0", 4.0}}}}};
        RunOutcome out = run(parse_config(j), sandbox_opts());
        CHECK(out.exit_code == 3);
        CHECK(out.report["checks"][0]["status"] == "rejected");
    }
    SUBCASE("expected divergence evidence for the borderline curvature") {
        json j = {{"metric", {{"kind", "preset"}, {"name", "example1"}, {"a", 0.5}}},
                  {"domain", {{"kind", "disk"}, {"radius", 0.9}}},
                  {"checks",
                   {{{"kind", "decompose"}},
                    {{"kind", "lp_probe"},
                     {"p", 1.1},
                     {"probe_r0", 1.0},
                     {"probe_base", 10.0},
                     {"levels", 20},
                     {"expect", "divergent"}}}}};
        RunOutcome out = run(parse_config(j), sandbox_opts());
        CHECK(out.exit_code == 0);
        CHECK(out.report["checks"][1]["verdict"] == "divergent");
        CHECK(out.report["checks"][1]["last_term_ratio"].get<double>() >= 1.2);
    }
    SUBCASE("rearrange check writes curve files") {
        RunnerOptions opts = sandbox_opts();
        json j = {{"metric", {{"kind", "flat"}}},
                  {"checks",
                   {{{"kind", "rearrange"}, {"K0", 1.0}, {"alpha", 0.0}, {"C", 0.5}, {"grid", 501}}}}};
        RunOutcome out = run(parse_config(j), opts);
        CHECK(out.exit_code == 0);
        auto curves = out.report["checks"][0]["curves"];
        REQUIRE(curves.size() == 2);
        for (const auto& path : curves) {
            std::ifstream f(path.get<std::string>());
            CHECK(f.good());
            std::string header;
            std::getline(f, header);
            CHECK((header == "s,eta_star,F,P_plus" || header == "t,mu"));
        }
    }
    SUBCASE("reports are deterministic for a fixed config") {
        json j = {
            {"metric", {{"kind", "preset"}, {"name", "example2"}, {"alpha1", -0.5}, {"alpha2", -0.25}}},
            {"domain", {{"kind", "disk"}, {"radius", 2.0}}},
            {"checks", {{{"kind", "alexandrov"}, {"K0", 1.0}}}},
        };
        RunOutcome a = run(parse_config(j), sandbox_opts());
        RunOutcome b = run(parse_config(j), sandbox_opts());
        CHECK(a.report.dump() == b.report.dump());
    }
    SUBCASE("parallel execution preserves report order and values") {
        json j = {
            {"metric", {{"kind", "preset"}, {"name", "example2"}, {"alpha1", -0.5}, {"alpha2", -0.5}}},
            {"domain", {{"kind", "disk"}, {"radius", 0.5}}},
            {"checks",
             {{{"kind", "huber"}}, {{"kind", "alexandrov"}, {"K0", 1.0}}, {{"kind", "decompose"}}}},
        };
        RunnerOptions seq = sandbox_opts();
        RunnerOptions par = sandbox_opts();
        par.parallel = 3;
        RunOutcome a = run(parse_config(j), seq);
        RunOutcome b = run(parse_config(j), par);
        CHECK(a.report.dump() == b.report.dump());
    }
}

TEST_CASE("corpus suites") {
    SUBCASE("unknown suite name") {
        CHECK_THROWS_AS(corpus("bogus", sandbox_opts()), config_error);
    }
    SUBCASE("example3 suite passes (rejections expected there)") {
        RunOutcome out = corpus("example3", sandbox_opts());
        CHECK(out.exit_code == 0);
    }
}

TEST_CASE("tolerance override flows into the checks") {
    json j = {
        {"metric", {{"kind", "preset"}, {"name", "example2"}, {"alpha1", -0.5}, {"alpha2", -0.5}}},
        {"domain", {{"kind", "disk"}, {"radius", 0.5}}},
        {"checks", {{{"kind", "alexandrov"}, {"K0", 1.0}, {"tol", 1e-6}}}},
    };
    RunnerOptions opts = sandbox_opts();
    opts.tol_override = 1e-3;
    RunOutcome out = run(parse_config(j), opts);
    CHECK(out.report["checks"][0]["tol"].get<double>() == 1e-3);
}
