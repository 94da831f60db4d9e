#include "hdn/cli.hpp"

#include "hdn/errors.hpp"
#include "hdn/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace hdn {

using nlohmann::json;

namespace {

constexpr std::string_view kBuiltinCounterexample = "paper-counterexample";

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct CommonOptions
{
    std::string config{kBuiltinCounterexample};
    double mass = 1.0;
    double shell_tol = kDefaultShellTol;
    Tolerances tols;
    unsigned threads = 0;
};

void add_tolerance_flags(CLI::App* cmd, CommonOptions& opt)
{
    cmd->add_option("--class-tol", opt.tols.classification, "Relative tolerance for causal classification")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--ortho-tol", opt.tols.orthogonality, "Relative tolerance for orthogonal degeneracy")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--node-tol", opt.tols.node, "Node threshold relative to sum |c_i|")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_config_flags(CLI::App* cmd, CommonOptions& opt)
{
    cmd->add_option("--config", opt.config, "Superposition JSON file, or the builtin 'paper-counterexample'")
        ->capture_default_str();
    cmd->add_option("--mass", opt.mass, "Mass for the builtin counterexample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--shell-tol", opt.shell_tol, "Relative mass-shell tolerance for loaded modes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_tolerance_flags(cmd, opt);
}

void add_threads_flag(CLI::App* cmd, CommonOptions& opt)
{
    cmd->add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency); never affects results")
        ->capture_default_str();
}

Superposition load(const CommonOptions& opt)
{
    if (opt.config == kBuiltinCounterexample)
        return paper_counterexample(opt.mass);
    return load_superposition(opt.config, opt.shell_tol);
}

FourVectord to_four(const std::vector<double>& v)
{
    return FourVectord(v[0], v[1], v[2], v[3]);
}

/// argv with --threads removed, so manifests do not depend on parallelism.
json replayable_argv(int argc, const char* const* argv)
{
    json args = json::array();
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0)
            continue;
        args.push_back(a);
    }
    return args;
}

json manifest(const std::string& command,
              const CommonOptions& opt,
              const json& argv,
              const json& params,
              const std::vector<std::string>& outputs)
{
    return {
        {"tool", "hdn"},
        {"version", std::string(kVersion)},
        {"command", command},
        {"config", opt.config},
        {"mass", opt.mass},
        {"shell_tol", opt.shell_tol},
        {"tolerances", to_json(opt.tols)},
        {"params", params},
        {"outputs", outputs},
        {"argv", argv},
    };
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw std::runtime_error("failed writing '" + path + "'");
}

json region_json(const Region& r)
{
    return {{"lo", to_json(r.lo())}, {"hi", to_json(r.hi())}};
}

// ---------------------------------------------------------------------------

struct Check
{
    std::string name;
    bool ok;
    std::string detail;
};

int cmd_verify(double mass, std::ostream& out)
{
    const double sqrt3 = std::numbers::sqrt3;
    const double gamma = 3.0 - 1.0 / sqrt3;
    const double alpha = std::sqrt(26.0) * mass / gamma;
    const double beta = alpha / sqrt3;
    const FourVectord P_expected(0.0, alpha, -alpha, 0.0);
    const FourVectord S_expected(0.0, -beta, 0.0, 0.0);
    const double theta_expected = std::asinh(-5.0 * sqrt3 / 6.0);
    constexpr double rel = 1e-12;

    const Superposition w = paper_counterexample(mass);
    const FourVectord origin = FourVectord::Zero();
    const HdnPoint p = analyze_point(w, origin);

    auto close_vec = [&](const FourVectord& got, const FourVectord& want) {
        const double scale = want.cwiseAbs().maxCoeff();
        for (int mu = 0; mu < 4; ++mu)
            if (std::abs(got(mu) - want(mu)) > rel * std::max(std::abs(want(mu)), scale))
                return false;
        return true;
    };
    auto vec_str = [](const FourVectord& v) {
        return "(" + format_number(v(0)) + ", " + format_number(v(1)) + ", " + format_number(v(2)) + ", " +
               format_number(v(3)) + ")";
    };

    const auto [wp_expected, wm_expected] = w_fields(P_expected, S_expected, theta_expected);
    const double orth = std::abs(inner(p.w_plus, p.w_minus)) / (p.w_plus.norm() * p.w_minus.norm());

    std::vector<Check> checks{
        {"P_mu", close_vec(p.P, P_expected), vec_str(p.P) + " vs " + vec_str(P_expected)},
        {"S_mu", close_vec(p.S, S_expected), vec_str(p.S) + " vs " + vec_str(S_expected)},
        {"theta",
         std::abs(p.theta - theta_expected) <= rel * std::abs(theta_expected),
         format_number(p.theta) + " vs asinh(-5 sqrt3 / 6) = " + format_number(theta_expected)},
        {"W+", close_vec(p.w_plus, wp_expected), vec_str(p.w_plus)},
        {"W-", close_vec(p.w_minus, wm_expected), vec_str(p.w_minus)},
        {"W+ . W- = 0", orth <= 1e-9, "relative " + format_number(orth)},
        {"class W+", p.class_plus == CausalClass::Spacelike, std::string(to_string(p.class_plus))},
        {"class W-", p.class_minus == CausalClass::Spacelike, std::string(to_string(p.class_minus))},
        {"selection", p.selection == Selection::BothSpacelike, std::string(to_string(p.selection))},
        {"plane", p.plane == PlaneClass::SpacelikePlane, std::string(to_string(p.plane))},
    };

    out << "counterexample at the origin, m = " << format_number(mass) << '\n';
    out << "  gamma = " << format_number(gamma) << ", alpha = " << format_number(alpha)
        << ", beta = " << format_number(beta) << '\n';
    bool all = true;
    for (const auto& c : checks) {
        out << (c.ok ? "  PASS " : "  FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.ok;
    }
    out << (all ? "PASS" : "FAIL") << '\n';
    return all ? kOk : kFailure;
}

int cmd_classify(const CommonOptions& opt, const std::vector<double>& xv, std::ostream& out, std::ostream& err)
{
    const Superposition w = load(opt);
    const FourVectord x = to_four(xv);
    const PointAssessment a = assess_point(w, x, opt.tols);
    if (a.verdict == Verdict::Node) {
        err << "error: x lies on (or within node-tol of) the nodal set; the polar decomposition is undefined\n";
        return kFailure;
    }
    json report;
    if (a.point) {
        report = to_json(*a.point);
    } else {
        report = {{"x", to_json(x)},
                  {"psi", {a.gradients->psi.real(), a.gradients->psi.imag()}},
                  {"P", to_json(a.gradients->P)},
                  {"S", to_json(a.gradients->S)},
                  {"selection", to_string(a.verdict)}};
    }
    report["verdict"] = to_string(a.verdict);
    report["tolerances"] = to_json(opt.tols);
    out << report.dump(2) << '\n';
    return kOk;
}

int cmd_scan(const CommonOptions& opt,
             const std::vector<double>& lo,
             const std::vector<double>& hi,
             const std::vector<int>& res,
             const std::string& path,
             const json& argv,
             std::ostream& out)
{
    const Superposition w = load(opt);
    const Region region(to_four(lo), to_four(hi));
    const Resolution resolution{res[0], res[1], res[2], res[3]};
    const auto cells = grid_scan(w, region, resolution, opt.tols, {opt.threads, 4096});

    std::ostringstream csv;
    write_scan_csv(csv, cells);
    write_text(path, csv.str());
    const std::string manifest_path = path + ".manifest.json";
    const json params{{"region", region_json(region)}, {"resolution", res}};
    write_text(manifest_path, manifest("scan", opt, argv, params, {path}).dump(2) + "\n");

    const FractionEstimate est = tally(cells);
    out << "scanned " << cells.size() << " lattice points -> " << path << '\n';
    for (int i = 0; i < kVerdictCount; ++i) {
        const auto v = static_cast<Verdict>(i);
        out << "  " << to_string(v) << ": " << est.count(v) << '\n';
    }
    return kOk;
}

int cmd_trajectory(const CommonOptions& opt,
                   const std::vector<double>& x0v,
                   double step,
                   int max_steps,
                   const std::string& path,
                   const json& argv,
                   std::ostream& out,
                   std::ostream& err)
{
    const Superposition w = load(opt);
    const TrajectoryConfig cfg{step, max_steps, opt.tols};
    TrajectoryResult result;
    try {
        result = integrate(w, to_four(x0v), cfg);
    } catch (const IllDefinedVelocity& e) {
        err << "error: velocity ill-defined at x0: " << to_string(e.verdict) << '\n';
        return kFailure;
    }
    for (const auto& warning : result.warnings)
        err << "warning: " << warning << '\n';

    std::ostringstream csv;
    write_trajectory_csv(csv, result);
    write_text(path, csv.str());
    json params{{"x0", x0v}, {"step", step}, {"max_steps", max_steps}};
    write_text(path + ".manifest.json", manifest("trajectory", opt, argv, params, {path}).dump(2) + "\n");

    out << result.points.size() << " points, termination: " << to_string(result.termination) << " -> " << path
        << '\n';
    return kOk;
}

int emit_estimate(json doc, const std::string& path, std::ostream& out)
{
    const std::string text = doc.dump(2) + "\n";
    if (path.empty())
        out << text;
    else
        write_text(path, text);
    return kOk;
}

int cmd_measure(const CommonOptions& opt,
                const std::vector<double>& lo,
                const std::vector<double>& hi,
                std::uint64_t n,
                std::uint64_t seed,
                const std::string& path,
                const json& argv,
                std::ostream& out)
{
    const Superposition w = load(opt);
    const Region region(to_four(lo), to_four(hi));
    const FractionEstimate est = estimate_spacetime_fraction(w, region, n, seed, opt.tols, {opt.threads, 4096});
    json doc = to_json(est);
    doc["region"] = region_json(region);
    doc["reference_measure"] = "uniform (Lebesgue) on region";
    std::vector<std::string> outputs;
    if (!path.empty())
        outputs.push_back(path);
    doc["manifest"] = manifest("measure", opt, argv, {{"region", region_json(region)}, {"n", n}, {"seed", seed}}, outputs);
    return emit_estimate(std::move(doc), path, out);
}

int cmd_sample_pairs(const CommonOptions& opt,
                     std::uint64_t n,
                     std::uint64_t seed,
                     double sigma,
                     const std::string& path,
                     const json& argv,
                     std::ostream& out)
{
    const FractionEstimate est = sample_pair_space(n, seed, sigma, opt.tols, {opt.threads, 4096});
    json doc = to_json(est);
    doc["sigma"] = sigma;
    doc["reference_measure"] = "isotropic normal N(0, sigma^2) on the 8 components of (P, S)";
    std::vector<std::string> outputs;
    if (!path.empty())
        outputs.push_back(path);
    CommonOptions pair_opt = opt;
    pair_opt.config = "pair-space";
    doc["manifest"] = manifest("sample-pairs", pair_opt, argv, {{"n", n}, {"seed", seed}, {"sigma", sigma}}, outputs);
    return emit_estimate(std::move(doc), path, out);
}

int cmd_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err)
{
    std::ifstream in(manifest_path);
    if (!in) {
        err << "error: cannot open manifest '" << manifest_path << "'\n";
        return kUsage;
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        err << "error: manifest is not valid JSON: " << e.what() << '\n';
        return kUsage;
    }
    // measure outputs embed their manifest.
    if (doc.contains("manifest"))
        doc = doc["manifest"];
    if (!doc.contains("argv") || !doc["argv"].is_array()) {
        err << "error: manifest has no argv array\n";
        return kUsage;
    }
    std::vector<std::string> args{"hdn"};
    for (const auto& a : doc["argv"])
        args.push_back(a.get<std::string>());
    if (args.size() > 1 && args[1] == "replay") {
        err << "error: refusing to replay a replay\n";
        return kUsage;
    }
    std::vector<const char*> cargs;
    for (const auto& a : args)
        cargs.push_back(a.c_str());
    return run_cli(static_cast<int>(cargs.size()), cargs.data(), out, err);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bohm-type velocity fields W+- for Klein-Gordon plane-wave superpositions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    CommonOptions opt;
    std::vector<double> x{0.0, 0.0, 0.0, 0.0};
    std::vector<double> lo{-0.5, -0.5, -0.5, -0.5};
    std::vector<double> hi{0.5, 0.5, 0.5, 0.5};
    std::vector<int> res{20, 20, 20, 20};
    std::string out_path;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    double step = 0.01;
    int max_steps = 1000;
    bool pair_space = false;
    std::string manifest_path;

    auto four_option = [](CLI::App* cmd, const std::string& name, auto& target, const std::string& help) {
        return cmd->add_option(name, target, help)->expected(4)->delimiter(',')->capture_default_str();
    };

    auto* verify = app.add_subcommand("verify", "Reproduce the three-plane-wave counterexample at the origin");
    verify->add_option("--mass", opt.mass, "Mass m")->check(CLI::PositiveNumber)->capture_default_str();

    auto* classify = app.add_subcommand("classify", "Run the W+- construction at one event and print JSON");
    add_config_flags(classify, opt);
    four_option(classify, "--x", x, "Event x^mu as x0,x1,x2,x3");

    auto* scan = app.add_subcommand("scan", "Classify every point of a regular lattice; write CSV");
    add_config_flags(scan, opt);
    add_threads_flag(scan, opt);
    four_option(scan, "--lo", lo, "Lower region corner");
    four_option(scan, "--hi", hi, "Upper region corner");
    four_option(scan, "--resolution", res, "Lattice points per axis")->check(CLI::PositiveNumber);
    scan->add_option("--out", out_path, "Output CSV path")->required();

    auto* traj = app.add_subcommand("trajectory", "Integrate the selected timelike W field with RK4; write CSV");
    add_config_flags(traj, opt);
    four_option(traj, "--x0", x, "Start event");
    traj->add_option("--step", step, "Proper-time step")->check(CLI::PositiveNumber)->capture_default_str();
    traj->add_option("--max-steps", max_steps, "Maximum number of steps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    traj->add_option("--out", out_path, "Output CSV path")->required();

    auto* measure = app.add_subcommand("measure", "Monte Carlo verdict fractions over a space-time box; write JSON");
    add_config_flags(measure, opt);
    add_threads_flag(measure, opt);
    four_option(measure, "--lo", lo, "Lower region corner");
    four_option(measure, "--hi", hi, "Upper region corner");
    measure->add_option("--n", n, "Number of samples")->required()->check(CLI::PositiveNumber);
    measure->add_option("--seed", seed, "RNG seed")->capture_default_str();
    measure->add_flag("--pair-space", pair_space, "Sample (P, S) pairs instead of events (same as sample-pairs)");
    measure->add_option("--sigma", sigma, "Normal scale for --pair-space")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    measure->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    auto* pairs = app.add_subcommand("sample-pairs", "Verdict fractions over random (P, S) pairs; write JSON");
    add_tolerance_flags(pairs, opt);
    add_threads_flag(pairs, opt);
    pairs->add_option("--n", n, "Number of samples")->required()->check(CLI::PositiveNumber);
    pairs->add_option("--seed", seed, "RNG seed")->capture_default_str();
    pairs->add_option("--sigma", sigma, "Normal scale of each component")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    pairs->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest_path, "Manifest JSON (or a measure output embedding one)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const json replay_argv = replayable_argv(argc, argv);
    try {
        if (*verify)
            return cmd_verify(opt.mass, out);
        if (*classify)
            return cmd_classify(opt, x, out, err);
        if (*scan)
            return cmd_scan(opt, lo, hi, res, out_path, replay_argv, out);
        if (*traj)
            return cmd_trajectory(opt, x, step, max_steps, out_path, replay_argv, out, err);
        if (*measure) {
            if (pair_space)
                return cmd_sample_pairs(opt, n, seed, sigma, out_path, replay_argv, out);
            return cmd_measure(opt, lo, hi, n, seed, out_path, replay_argv, out);
        }
        if (*pairs)
            return cmd_sample_pairs(opt, n, seed, sigma, out_path, replay_argv, out);
        if (*replay)
            return cmd_replay(manifest_path, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

} // namespace hdn
