#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scm/errors.hpp"
#include "scm/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Singular conformal metrics: geometric quantities and isoperimetric checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir, corpus_name = "all";
    double tol = -1.0;
    std::uint64_t seed = 42;
    int cases = 200, parallel = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "Execute the checks described by a config file");
    run_cmd->add_option("--config", config_path, "Path to the JSON run configuration")->required();
    run_cmd->add_option("--out", out_dir, "Output directory for report and curve files");
    run_cmd->add_option("--tol", tol, "Override the tolerance of every check");
    run_cmd->add_option("--seed", seed, "Seed recorded in the report and used by randomized suites");
    run_cmd->add_option("--cases", cases, "Number of randomized cases where applicable");
    run_cmd->add_option("--parallel", parallel, "Run checks concurrently (report order is preserved)");

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "Run the curated oracle suites");
    corpus_cmd->add_option("name", corpus_name, "example1|example2|example3|cones|all");
    corpus_cmd->add_option("--out", out_dir, "Output directory for the suite report");
    corpus_cmd->add_option("--seed", seed, "Seed for randomized draws");
    corpus_cmd->add_option("--cases", cases, "Number of randomized draws");

    CLI11_PARSE(app, argc, argv);

    scm::RunnerOptions opts;
    opts.out_dir = out_dir;
    if (tol > 0.0) opts.tol_override = tol;
    opts.seed = seed;
    opts.cases = cases;
    opts.parallel = parallel;

    try {
        if (run_cmd->parsed()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "config error: cannot open '" << config_path << "'\n";
                return 2;
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::parse_error& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return 2;
            }
            scm::RunOutcome outcome = scm::run(scm::parse_config(j), opts);
            std::cout << outcome.table;
            return outcome.exit_code;
        }
        scm::RunOutcome outcome = scm::corpus(corpus_name, opts);
        std::cout << outcome.table;
        return outcome.exit_code;
    } catch (const scm::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const scm::numerical_rejection& e) {
        std::cerr << "numerical rejection: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
