#include "scm/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "scm/curvature.hpp"
#include "scm/errors.hpp"
#include "scm/iso.hpp"
#include "scm/quad.hpp"
#include "scm/random.hpp"
#include "scm/rearrange.hpp"

namespace scm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void fail_at(const std::string& where, const std::string& what) {
    throw config_error(where + ": " + what);
}

double need_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) fail_at(where, std::string("missing number '") + key + "'");
    return j[key].get<double>();
}

double opt_number(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

Point2 parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail_at(where, "expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

BoundaryCurve parse_curve(const json& j, const std::string& where) {
    std::string kind = j.value("kind", "");
    if (kind == "disk" || kind == "circle") {
        Point2 c = j.contains("center") ? parse_point(j["center"], where + ".center") : Point2{0, 0};
        return Circle{c, need_number(j, "radius", where)};
    }
    if (kind == "polygon") {
        if (!j.contains("vertices") || !j["vertices"].is_array()) fail_at(where, "polygon needs 'vertices'");
        std::vector<Point2> verts;
        for (const auto& v : j["vertices"]) verts.push_back(parse_point(v, where + ".vertices"));
        return Polygon{std::move(verts)};
    }
    fail_at(where, "unknown curve kind '" + kind + "'");
}

}  // namespace

PlanarDomain parse_domain(const json& j) {
    const std::string where = "domain";
    BoundaryCurve outer = parse_curve(j, where);
    std::vector<BoundaryCurve> holes;
    if (j.contains("holes")) {
        int i = 0;
        for (const auto& h : j["holes"]) holes.push_back(parse_curve(h, where + ".holes[" + std::to_string(i++) + "]"));
    }
    return PlanarDomain(std::move(outer), std::move(holes));
}

MetricSpec parse_metric(const json& j) {
    const std::string where = "metric";
    std::string kind = j.value("kind", "");
    if (kind == "flat") return Flat{};
    if (kind == "cone") {
        Point2 c = j.contains("center") ? parse_point(j["center"], where + ".center") : Point2{0, 0};
        return spherical_cone(need_number(j, "K0", where), need_number(j, "alpha", where),
                              need_number(j, "tau0", where), c);
    }
    if (kind == "preset") {
        std::string name = j.value("name", "");
        MetricSpec g;
        if (name == "example1") {
            g = example1(opt_number(j, "a", 0.5));
        } else if (name == "example2") {
            g = example2(opt_number(j, "alpha1", -0.5), opt_number(j, "alpha2", -0.5));
        } else {
            g = preset_metric(name);
        }
        if (auto* pw = std::get_if<PiecewiseRadial>(&g)) {
            if (j.contains("center")) *pw = pw->translated(parse_point(j["center"], where + ".center"));
            if (j.contains("log_scale")) *pw = pw->rescaled(j["log_scale"].get<double>());
        }
        return g;
    }
    if (kind == "potential") {
        PotentialMetric pm;
        if (j.contains("atoms")) {
            std::vector<WeightedPoint> atoms;
            for (const auto& a : j["atoms"])
                atoms.push_back({{need_number(a, "x", where + ".atoms"), need_number(a, "y", where + ".atoms")},
                                 need_number(a, "weight", where + ".atoms")});
            pm.atoms = SignedAtomicMeasure(std::move(atoms));
        }
        if (j.contains("harmonic")) {
            std::vector<std::vector<double>> coeffs;
            for (const auto& row : j["harmonic"]) coeffs.push_back(row.get<std::vector<double>>());
            pm.harmonic = HarmonicPoly(std::move(coeffs));
        }
        return pm;
    }
    fail_at(where, "unknown metric kind '" + kind + "'");
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    if (!j.contains("metric")) fail_at("config", "missing 'metric' block");
    cfg.metric = parse_metric(j["metric"]);
    if (j.contains("domain")) cfg.domain = parse_domain(j["domain"]);
    if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty())
        fail_at("config", "missing or empty 'checks' list");

    static const std::vector<std::string> kinds = {"huber",     "huber_regular", "alexandrov",
                                                   "alexandrov_regular", "bol", "sharp_fit",
                                                   "rearrange", "gauss_bonnet", "decompose", "lp_probe"};
    int i = 0;
    for (const auto& cj : j["checks"]) {
        std::string where = "checks[" + std::to_string(i++) + "]";
        CheckSpec ck;
        ck.kind = cj.value("kind", "");
        if (std::find(kinds.begin(), kinds.end(), ck.kind) == kinds.end())
            fail_at(where, "unknown check kind '" + ck.kind + "'");
        ck.tol = opt_number(cj, "tol", 1e-6);
        ck.K0 = opt_number(cj, "K0", ck.kind == "bol" ? 1.0 : 0.0);
        if (ck.K0 < 0.0) fail_at(where, "K0 must be nonnegative");
        ck.samples = static_cast<int>(opt_number(cj, "samples", 200));
        ck.alpha = opt_number(cj, "alpha", 0.0);
        ck.C = opt_number(cj, "C", 1.0);
        ck.grid = static_cast<int>(opt_number(cj, "grid", 2001));
        ck.r0 = opt_number(cj, "r0", 4.0);
        ck.p = opt_number(cj, "p", 1.0);
        ck.probe_r0 = opt_number(cj, "probe_r0", 0.5);
        ck.probe_base = opt_number(cj, "probe_base", 2.0);
        ck.probe_levels = static_cast<int>(opt_number(cj, "levels", 20));
        ck.density = cj.value("density", "K");
        ck.expect = cj.value("expect", "");
        if (cj.contains("enclosing")) ck.enclosing = parse_domain(cj["enclosing"]);
        if (ck.kind == "alexandrov" || ck.kind == "alexandrov_regular" || ck.kind == "sharp_fit") {
            if (!cj.contains("K0")) fail_at(where, ck.kind + " requires 'K0'");
        }
        if (ck.kind == "huber_regular" && !ck.enclosing)
            fail_at(where, "huber_regular requires 'enclosing' domain");
        cfg.checks.push_back(std::move(ck));
    }
    if (j.contains("output")) {
        cfg.report_path = j["output"].value("report", cfg.report_path);
        cfg.curves_dir = j["output"].value("curves_dir", cfg.curves_dir);
    }
    for (const auto& ck : cfg.checks) {
        bool needs_domain = ck.kind != "rearrange" && ck.kind != "gauss_bonnet";
        if (needs_domain && !cfg.domain) fail_at("config", "check '" + ck.kind + "' requires a domain");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Check execution
// ---------------------------------------------------------------------------

namespace {

json iso_to_json(const IsoReport& r) {
    json j;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["deficit"] = r.deficit;
    j["equality"] = r.equality;
    j["vacuous"] = r.vacuous;
    j["must_be_strict"] = r.must_be_strict;
    j["strict_certified"] = r.strict_certified;
    j["violated"] = r.violated;
    j["tol"] = r.tol;
    j["lhs_error"] = r.lhs_error;
    j["rhs_error"] = r.rhs_error;
    j["inputs"] = {{"L2", r.inputs.L2}, {"M", r.inputs.M}, {"Kplus", r.inputs.Kplus}, {"K0", r.inputs.K0}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

bool iso_passes(const IsoReport& r) {
    if (r.violated) return false;
    if (r.must_be_strict && !r.vacuous && !r.strict_certified) return false;
    return true;
}

struct CheckOutput {
    json detail;
    bool passed = true;
    std::string status = "pass";
};

CheckOutput execute_check(const RunConfig& cfg, const CheckSpec& ck, const std::string& curves_dir,
                          int index) {
    CheckOutput out;
    QuadOptions opts;
    opts.rel_tol = std::min(1e-7, ck.tol * 1e-2);

    if (ck.kind == "huber") {
        IsoReport r = huber_check(cfg.metric, *cfg.domain, ck.tol, opts);
        out.detail = iso_to_json(r);
        out.passed = iso_passes(r);
    } else if (ck.kind == "huber_regular") {
        IsoReport r = huber_regular_check(cfg.metric, *cfg.domain, *ck.enclosing, ck.tol, opts);
        out.detail = iso_to_json(r);
        out.passed = iso_passes(r);
    } else if (ck.kind == "alexandrov") {
        CurvatureDecomposition c = curvature_of(cfg.metric);
        IsoReport r = alexandrov_check(cfg.metric, c, *cfg.domain, ck.K0, ck.tol, opts);
        out.detail = iso_to_json(r);
        out.passed = iso_passes(r);
    } else if (ck.kind == "alexandrov_regular") {
        CurvatureDecomposition c = curvature_of(cfg.metric);
        IsoReport r = alexandrov_regular_check(cfg.metric, c, *cfg.domain, ck.K0, ck.tol, opts);
        out.detail = iso_to_json(r);
        out.passed = iso_passes(r);
    } else if (ck.kind == "bol") {
        CurvatureDecomposition c = curvature_of(cfg.metric);
        IsoReport r = bol_check(cfg.metric, c, *cfg.domain, ck.tol, opts);
        out.detail = iso_to_json(r);
        out.passed = iso_passes(r);
    } else if (ck.kind == "sharp_fit") {
        CurvatureDecomposition c = curvature_of(cfg.metric);
        SharpFit fit = fit_sharp_metric(cfg.metric, c, *cfg.domain, ck.K0, ck.samples, ck.tol);
        out.detail = {{"alpha", fit.alpha},       {"tau", fit.tau},
                      {"residual", fit.residual}, {"sharp", fit.sharp},
                      {"rotation", fit.rotation}, {"mobius_a", {fit.mobius_a.real(), fit.mobius_a.imag()}}};
        if (!fit.diagnostic.empty()) out.detail["diagnostic"] = fit.diagnostic;
        if (ck.expect == "sharp") out.passed = fit.sharp;
        if (ck.expect == "not_sharp") out.passed = !fit.sharp;
    } else if (ck.kind == "rearrange") {
        RadialProfile prof = solve_radial_liouville(ck.K0, ck.alpha, ck.C);
        RearrangementData data = rearrangement(prof, default_s_grid(prof, ck.grid));
        ChainVerdict v = verify_chain(data, ck.tol);
        out.detail = {{"mu0", data.mu0},
                      {"gamma", data.gamma},
                      {"M", data.M},
                      {"t_plus", prof.t_plus()},
                      {"huber_ok", v.huber_ok},
                      {"monotone_ok", v.monotone_ok},
                      {"final_ok", v.final_ok},
                      {"huber_margin", v.huber_margin},
                      {"monotone_margin", v.monotone_margin},
                      {"final_margin1", v.final_margin1},
                      {"final_margin2", v.final_margin2},
                      {"p_plus_drift", v.p_plus_drift},
                      {"equality_margin", v.equality_margin},
                      {"lipschitz_bound", v.lipschitz_bound}};
        out.passed = v.all_ok;

        std::filesystem::create_directories(curves_dir);
        std::string base = curves_dir + "/rearrange_" + std::to_string(index);
        {
            std::ofstream f(base + "_profile.csv");
            f << "s,eta_star,F,P_plus\n" << std::setprecision(16);
            for (std::size_t k = 0; k < data.s_grid.size(); ++k)
                f << data.s_grid[k] << ',' << data.eta_star[k] << ',' << data.F[k] << ',' << data.P_plus[k]
                  << '\n';
        }
        {
            std::ofstream f(base + "_levels.csv");
            f << "t,mu\n" << std::setprecision(16);
            int n = 201;
            for (int k = 0; k < n; ++k) {
                double t = prof.t_plus() * k / (n - 1);
                f << t << ',' << distribution_at(prof, t) << '\n';
            }
        }
        out.detail["curves"] = {base + "_profile.csv", base + "_levels.csv"};
    } else if (ck.kind == "gauss_bonnet") {
        GaussBonnetResult r = gauss_bonnet_two_chart(cfg.metric, ck.r0, opts);
        out.detail = {{"total", r.total},
                      {"smooth_part", r.smooth_part},
                      {"chart2", r.chart2},
                      {"chart1", r.chart1},
                      {"error_estimate", r.error_estimate}};
    } else if (ck.kind == "decompose") {
        Decomposition dec = decompose(cfg.metric);
        // Recombination residual e^{f+u} vs e^rho on interior samples.
        Box bb = cfg.domain->bounding_box();
        double worst = 0.0;
        int used = 0;
        for (int k = 0; k < 400 && used < 100; ++k) {
            double fx = 0.5 + 0.49 * std::cos(2.39996 * k);
            double fy = 0.5 + 0.49 * std::sin(2.39996 * k + 1.0);
            Point2 z{bb.x0 + fx * bb.width(), bb.y0 + fy * bb.height()};
            if (cfg.domain->locate(z) != Location::Inside) continue;
            bool near_atom = false;
            for (const auto& a : dec.f_atoms.atoms())
                if (dist(z, a.position) < 1e-3) near_atom = true;
            if (near_atom) continue;
            double rho = eval_rho(cfg.metric, z);
            double fu = dec.eval_f(z) + dec.eval_u(z);
            worst = std::max(worst, std::abs(std::expm1(fu - rho)));
            ++used;
        }
        json atoms = json::array();
        for (const auto& a : dec.f_atoms.atoms())
            atoms.push_back({{"x", a.position.x}, {"y", a.position.y}, {"weight", a.weight}});
        out.detail = {{"recombination_residual", worst}, {"samples", used}, {"f_atoms", atoms}};
        out.passed = worst <= 1e-8;
    } else if (ck.kind == "lp_probe") {
        ScalarField density;
        if (ck.density == "conformal_factor") {
            MetricSpec g = cfg.metric;
            density.eval = [g](Point2 z) { return eval_conformal_factor(g, z); };
        } else {
            density = curvature_of(cfg.metric).K;
        }
        std::vector<double> radii;
        for (int k = 0; k <= ck.probe_levels; ++k) radii.push_back(ck.probe_r0 * std::pow(ck.probe_base, -k));
        Point2 center{0.0, 0.0};
        std::vector<double> inc = lp_probe_increments(density, center, ck.p, radii);
        std::vector<double> cum = inc;
        for (std::size_t k = 1; k < cum.size(); ++k) cum[k] += cum[k - 1];
        double tail_ratio = inc.size() >= 2 ? inc.back() / inc[inc.size() - 2] : 0.0;
        std::string verdict = tail_ratio >= 1.02 ? "divergent"
                              : tail_ratio <= 0.98 ? "integrable"
                                                   : "inconclusive";
        out.detail = {{"p", ck.p},
                      {"cumulative", cum},
                      {"last_term_ratio", tail_ratio},
                      {"verdict", verdict}};
        if (!ck.expect.empty()) out.passed = verdict == ck.expect;
    }
    out.status = out.passed ? "pass" : "fail";
    return out;
}

std::string out_path(const std::string& dir, const std::string& rel) {
    if (dir.empty()) return rel;
    return (std::filesystem::path(dir) / std::filesystem::path(rel).filename()).string();
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunnerOptions& opts) {
    RunConfig cfg = config;
    if (opts.tol_override)
        for (auto& ck : cfg.checks) ck.tol = *opts.tol_override;

    std::string curves_dir = opts.out_dir.empty() ? cfg.curves_dir
                                                  : (std::filesystem::path(opts.out_dir) / "curves").string();

    RunOutcome outcome;
    outcome.report["seed"] = opts.seed;
    outcome.report["checks"] = json::array();

    std::vector<CheckOutput> results(cfg.checks.size());
    std::vector<std::string> rejections(cfg.checks.size());

    auto run_one = [&](std::size_t i) {
        try {
            results[i] = execute_check(cfg, cfg.checks[i], curves_dir, static_cast<int>(i));
        } catch (const numerical_rejection& e) {
            results[i].status = "rejected";
            results[i].passed = false;
            rejections[i] = e.what();
        }
    };

    if (opts.parallel > 1) {
        std::vector<std::future<void>> futs;
        for (std::size_t i = 0; i < cfg.checks.size(); ++i)
            futs.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : futs) f.get();
    } else {
        for (std::size_t i = 0; i < cfg.checks.size(); ++i) run_one(i);
    }

    bool any_fail = false, any_reject = false;
    std::ostringstream table;
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        json cj = results[i].detail;
        cj["kind"] = cfg.checks[i].kind;
        cj["status"] = results[i].status;
        if (!rejections[i].empty()) cj["diagnostic"] = rejections[i];
        outcome.report["checks"].push_back(cj);
        if (results[i].status == "rejected") {
            any_reject = true;
            table << "[REJECTED] " << cfg.checks[i].kind << ": " << rejections[i] << '\n';
        } else {
            if (!results[i].passed) any_fail = true;
            table << (results[i].passed ? "[PASS] " : "[FAIL] ") << cfg.checks[i].kind << '\n';
        }
    }
    outcome.exit_code = any_reject ? 3 : (any_fail ? 1 : 0);
    outcome.report["exit_code"] = outcome.exit_code;
    outcome.table = table.str();

    std::string report_path = opts.out_dir.empty() ? cfg.report_path : out_path(opts.out_dir, cfg.report_path);
    if (!report_path.empty()) {
        if (auto dir = std::filesystem::path(report_path).parent_path(); !dir.empty())
            std::filesystem::create_directories(dir);
        std::ofstream f(report_path);
        f << outcome.report.dump(2) << '\n';
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Corpus suites
// ---------------------------------------------------------------------------

namespace {

struct CorpusItem {
    std::string name;
    double expected;
    double computed;
    double tol;  // comparison scale: |computed - expected| <= tol * max(1, |expected|)
    bool pass;
};

CorpusItem item(std::string name, double expected, double computed, double tol) {
    bool ok = std::abs(computed - expected) <= tol * std::max(1.0, std::abs(expected));
    return {std::move(name), expected, computed, tol, ok};
}

CorpusItem flag(std::string name, bool ok) { return {std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, ok}; }

void suite_example2(std::vector<CorpusItem>& items) {
    QuadOptions opts;
    opts.rel_tol = 1e-8;
    const std::pair<double, double> pairs[] = {{0.0, 0.0}, {-0.5, -0.25}, {-0.75, -0.5}};
    for (auto [a1, a2] : pairs) {
        MetricSpec g = example2(a1, a2);
        for (double r0 : {4.0, 8.0}) {
            GaussBonnetResult gb = gauss_bonnet_two_chart(g, r0, opts);
            std::ostringstream tag;
            tag << "example2(" << a1 << "," << a2 << ") r0=" << r0;
            items.push_back(item(tag.str() + " total", 4.0 * pi, gb.total, 1e-6));
            items.push_back(item(tag.str() + " smooth", 2.0 * pi * (2.0 + a1 + a2), gb.smooth_part, 1e-6));
        }
    }
    // Bol equality family on concentric disks.
    for (double a2 : {0.0, -0.5}) {
        MetricSpec g = example2(a2, a2);
        CurvatureDecomposition c = curvature_of(g);
        for (double R : {0.25, 0.5, 1.0}) {
            IsoReport r = bol_check(g, c, PlanarDomain::disk({0, 0}, R), 1e-6, opts);
            double q2 = 1.0 + a2;
            double X = std::pow(R, 2.0 * q2);
            double lhs_oracle = 16.0 * pi * pi * q2 * q2 * X / ((1.0 + X) * (1.0 + X));
            std::ostringstream tag;
            tag << "bol a2=" << a2 << " R=" << R;
            items.push_back(item(tag.str() + " lhs", lhs_oracle, r.lhs, 1e-6));
            items.push_back(flag(tag.str() + " equality", r.equality));
        }
    }
    // Strictness on a straddling disk with distinct zone curvatures.
    {
        MetricSpec g = example2(-0.5, -0.25);
        CurvatureDecomposition c = curvature_of(g);
        IsoReport r = alexandrov_check(g, c, PlanarDomain::disk({0, 0}, 2.0), 1.0, 1e-6, opts);
        items.push_back(flag("example2 straddling strict", r.strict_certified && !r.equality));
    }
}

void suite_example1(std::vector<CorpusItem>& items) {
    for (double a : {0.5, -0.5}) {
        std::ostringstream pre;
        pre << "example1(a=" << a << ") ";
        MetricSpec g = example1(a);
        Decomposition dec = decompose(g);
        CurvatureDecomposition c = curvature_of(dec);
        // Curvature recovery against the closed form.
        double worst = 0.0;
        for (double r : {0.2, 0.35, 0.5, 0.65, 0.8}) {
            double L = 1.0 - std::log(r);
            double Kexact = -(a / 2.0) / (r * r) * std::pow(L, -(2.0 - a));
            worst = std::max(worst, std::abs(recover_density(g, {r, 0.0}) - Kexact));
        }
        items.push_back(item(pre.str() + "recover_density max err", 0.0, worst, 1e-3));
        // Exact solution: subsolution defect vanishes.
        double phi = subsolution_residual(g, c, 1.0, {0.4, 0.2});
        items.push_back(item(pre.str() + "subsolution residual", 0.0, phi, 1e-5));
        // L^1 boundedness of K over dyadic annuli; the analytic limit is
        // ||K||_L1(B_1) = pi |a| / (1 - a).
        std::vector<double> radii;
        for (int k = 0; k <= 20; ++k) radii.push_back(std::pow(2.0, -k));
        std::vector<double> cum = lp_probe(c.K, {0, 0}, 1.0, radii);
        double limit = pi * std::abs(a) / (1.0 - a);
        items.push_back(flag(pre.str() + "K in L1 (bounded sequence)", cum.back() <= limit * (1.0 + 1e-6)));
        // Divergence at p = 1.1 (decade radii expose the growing tail).
        std::vector<double> radii10;
        for (int k = 0; k <= 20; ++k) radii10.push_back(std::pow(10.0, -k));
        std::vector<double> inc = lp_probe_increments(c.K, {0, 0}, 1.1, radii10);
        double ratio = inc.back() / inc[inc.size() - 2];
        items.push_back(flag(pre.str() + "K^1.1 divergent (last-term ratio >= 1.2)", ratio >= 1.2));
    }
}

void suite_example3(std::vector<CorpusItem>& items) {
    MetricSpec g2 = example3_chart2();
    Decomposition dec = decompose(g2);
    items.push_back(flag("example3 chart2 no atoms", dec.f_atoms.empty()));
    // Displayed curvature on both zones.
    items.push_back(item("example3 chart2 K(0.5)", -0.25 * std::pow(0.5, -1.5),
                         recover_density(g2, {0.5, 0.0}), 1e-3));
    items.push_back(item("example3 chart2 K(2)", std::pow(2.0, -3.0) / 32.0,
                         recover_density(g2, {2.0, 0.0}), 1e-3));
    MetricSpec g1 = example3_chart1();
    SignedAtomicMeasure atoms = atoms_of(g1);
    items.push_back(item("example3 chart1 atom mass", 9.0 * pi, atoms.weight_at({0, 0}), 1e-12));
    items.push_back(flag("example3 chart1 cusp detected", !assert_no_cusps(atoms)));
    items.push_back(
        item("example3 chart1 critical exponent", 4.0 / 9.0, critical_exponent(atoms, {0, 0}), 1e-12));
    bool rejected = false;
    try {
        gauss_bonnet_two_chart(g2, 4.0);
    } catch (const numerical_rejection&) {
        rejected = true;
    }
    items.push_back(flag("example3 gauss_bonnet rejected (cusp at infinity)", rejected));
    rejected = false;
    try {
        area(g1, PlanarDomain::disk({0, 0}, 0.5));
    } catch (const numerical_rejection&) {
        rejected = true;
    }
    items.push_back(flag("example3 chart1 area rejected", rejected));
}

void suite_cones(std::vector<CorpusItem>& items, std::uint64_t seed, int cases) {
    Rng rng(seed);
    QuadOptions opts;
    opts.rel_tol = 1e-8;
    int draws = std::max(4, std::min(cases, 50));
    double worst_alpha = 0.0, worst_tau = 0.0;
    for (int i = 0; i < draws; ++i) {
        double alpha = rng.uniform(0.0, 0.9);
        double tau0 = rng.uniform(0.5, 3.0);
        double K0 = rng.uniform(0.25, 2.0);
        MetricSpec g = spherical_cone(K0, alpha, tau0);
        CurvatureDecomposition c = curvature_of(g);
        SharpFit fit = fit_sharp_metric(g, c, PlanarDomain::disk({0, 0}, 1.0), K0, 200, 1e-6);
        if (!fit.sharp) {
            worst_alpha = 1.0;
            break;
        }
        worst_alpha = std::max(worst_alpha, std::abs(fit.alpha - alpha) / std::max(1.0, alpha));
        worst_tau = std::max(worst_tau, std::abs(fit.tau - tau0) / std::max(1.0, tau0));
    }
    items.push_back(item("cone fit round-trip alpha err", 0.0, worst_alpha, 1e-9));
    items.push_back(item("cone fit round-trip tau err", 0.0, worst_tau, 1e-9));

    // Alexandrov equality family: spherical caps.
    MetricSpec sphere = spherical_cone(1.0, 0.0, 2.0);
    CurvatureDecomposition cs = curvature_of(sphere);
    for (double r : {0.3, 0.6, 0.9}) {
        IsoReport rep = alexandrov_check(sphere, cs, PlanarDomain::disk({0, 0}, r), 1.0, 1e-6, opts);
        std::ostringstream tag;
        tag << "sphere cap r=" << r;
        items.push_back(flag(tag.str() + " equality", rep.equality));
    }
    // Boundary length against the closed radial form.
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        double alpha = rng.uniform(-0.5, 0.9);
        double tau0 = rng.uniform(0.5, 2.5);
        double K0 = rng.uniform(0.0, 2.0);
        double R = rng.uniform(0.2, 1.5);
        MetricSpec g = spherical_cone(K0, alpha, tau0);
        double q = 1.0 - alpha;
        double m = K0 * tau0 * tau0 / (4.0 * q * q);
        double exact = 2.0 * pi * R * std::pow(R, -alpha) * tau0 / (1.0 + m * std::pow(R, 2.0 * q));
        QuadResult L = boundary_length(g, PlanarDomain::disk({0, 0}, R));
        worst = std::max(worst, std::abs(L.value - exact) / exact);
    }
    items.push_back(item("cone boundary length vs closed form", 0.0, worst, 1e-9));
}

}  // namespace

RunOutcome corpus(const std::string& name, const RunnerOptions& opts) {
    std::vector<CorpusItem> items;
    bool known = false;
    if (name == "example1" || name == "all") suite_example1(items), known = true;
    if (name == "example2" || name == "all") suite_example2(items), known = true;
    if (name == "example3" || name == "all") suite_example3(items), known = true;
    if (name == "cones" || name == "all") suite_cones(items, opts.seed, opts.cases), known = true;
    if (!known) throw config_error("corpus: unknown suite '" + name + "'");

    RunOutcome outcome;
    outcome.report["seed"] = opts.seed;
    outcome.report["suite"] = name;
    outcome.report["items"] = json::array();
    std::ostringstream table;
    table << std::left << std::setw(52) << "item" << std::right << std::setw(16) << "expected"
          << std::setw(16) << "computed" << std::setw(10) << "tol" << "  status\n";
    bool all = true;
    for (const auto& it : items) {
        outcome.report["items"].push_back({{"name", it.name},
                                           {"expected", it.expected},
                                           {"computed", it.computed},
                                           {"tol", it.tol},
                                           {"pass", it.pass}});
        table << std::left << std::setw(52) << it.name << std::right << std::setw(16)
              << std::setprecision(8) << it.expected << std::setw(16) << it.computed << std::setw(10)
              << it.tol << (it.pass ? "  PASS" : "  FAIL") << '\n';
        all = all && it.pass;
    }
    outcome.exit_code = all ? 0 : 1;
    outcome.report["exit_code"] = outcome.exit_code;
    outcome.table = table.str();

    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        std::ofstream f(std::filesystem::path(opts.out_dir) / ("corpus_" + name + ".json"));
        f << outcome.report.dump(2) << '\n';
    }
    return outcome;
}

}  // namespace scm
