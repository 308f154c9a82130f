#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scm/domain.hpp"
#include "scm/metric.hpp"

namespace scm {

// One entry of the batch configuration's check list.
struct CheckSpec {
    std::string kind;  // huber | huber_regular | alexandrov | alexandrov_regular | bol |
                       // sharp_fit | rearrange | gauss_bonnet | decompose | lp_probe
    double K0 = 0.0;
    double tol = 1e-6;
    int samples = 200;
    // rearrange parameters
    double alpha = 0.0;
    double C = 1.0;
    int grid = 2001;
    // gauss_bonnet
    double r0 = 4.0;
    // lp_probe
    double p = 1.0;
    double probe_r0 = 0.5;
    double probe_base = 2.0;
    int probe_levels = 20;
    std::string density = "K";     // K | conformal_factor
    std::string expect;            // "", divergent, integrable, sharp, not_sharp
    std::optional<PlanarDomain> enclosing;  // huber_regular only
};

struct RunConfig {
    MetricSpec metric = Flat{};
    std::optional<PlanarDomain> domain;
    std::vector<CheckSpec> checks;
    std::string report_path = "report.json";
    std::string curves_dir = "curves";
};

struct RunnerOptions {
    std::string out_dir;  // prefix for report/curves paths; empty = config paths as-is
    std::optional<double> tol_override;
    std::uint64_t seed = 42;
    int cases = 200;
    int parallel = 1;
};

struct RunOutcome {
    nlohmann::json report;
    int exit_code = 0;   // 0 pass, 1 check failure, 2 config error, 3 numerical rejection
    std::string table;   // human-readable summary
};

RunConfig parse_config(const nlohmann::json& j);
MetricSpec parse_metric(const nlohmann::json& j);
PlanarDomain parse_domain(const nlohmann::json& j);

// Executes the configured checks in order (parallel execution preserves
// report order) and writes report + curve files.
RunOutcome run(const RunConfig& config, const RunnerOptions& opts);

// Curated oracle suites for the bundled example metrics:
// name in {example1, example2, example3, cones, all}.
RunOutcome corpus(const std::string& name, const RunnerOptions& opts);

}  // namespace scm
