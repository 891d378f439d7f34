#include "cdde/runner.hpp"

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include "cdde/export.hpp"
#include "cdde/oscillation.hpp"
#include "cdde/reproduce.hpp"
#include "cdde/scenario.hpp"
#include "cdde/sweep.hpp"

namespace fs = std::filesystem;

namespace cdde {

namespace {

/// Usage problems detected after parsing (missing config, bad region, ...).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

struct Flags {
    std::string config;
    std::string region;
    int kmax{0};
    double horizon{0};
    int step_div{0};
    double window{0};
    int seeds{0};
    std::string out;
    std::string case_id;
};

class Session {
public:
    Session(std::string command, const Flags& flags, std::ostream& out) : command_(std::move(command)), flags_(flags), out_(out) {
        started_ = utc_now();
        if (!flags_.config.empty()) cfg_ = load_scenario(flags_.config);
    }

    const ScenarioConfig& config() const {
        if (!cfg_) throw UsageError(command_ + ": --config is required");
        return *cfg_;
    }

    fs::path out_dir() const {
        if (!flags_.out.empty()) return flags_.out;
        if (cfg_ && cfg_->output_dir) return *cfg_->output_dir;
        if (const char* env = std::getenv("CDDE_OUT"); env && *env) return env;
        return "cdde_out";
    }

    void csv(const std::string& name, const CsvTable& t) {
        write_csv(out_dir() / name, t);
        outputs_.push_back(name);
    }
    void json(const std::string& name, const Json& j) {
        write_text(out_dir() / name, j.dump(2) + "\n");
        outputs_.push_back(name);
    }
    void verdict(const std::string& name, bool pass) { verdicts_[name] = pass ? "PASS" : "FAIL"; }

    int finish(const std::vector<std::string>& argv) {
        outputs_.push_back("manifest.json");
        Json m{{"tool", "cdde"},
               {"version", kToolVersion},
               {"command", command_},
               {"argv", argv},
               {"scenario", cfg_ ? Json(cfg_->name) : Json(nullptr)},
               {"scenario_hash", cfg_ ? Json(fmt::format("{:016x}", scenario_hash(cfg_->text))) : Json(nullptr)},
               {"started", started_},
               {"finished", utc_now()},
               {"outputs", outputs_},
               {"verdicts", verdicts_}};
        write_text(out_dir() / "manifest.json", m.dump(2) + "\n");
        bool failed = false;
        for (const auto& [k, v] : verdicts_) failed = failed || v == "FAIL";
        return failed ? 1 : 0;
    }

    std::ostream& out() { return out_; }
    const Flags& flags() const { return flags_; }

private:
    std::string command_;
    Flags flags_;
    std::ostream& out_;
    std::optional<ScenarioConfig> cfg_;
    std::string started_;
    std::vector<std::string> outputs_;
    std::map<std::string, std::string> verdicts_;
};

PhasePoint initial_point(const ScenarioConfig& cfg, const CyclicSystem& sys, Json& info) {
    const double tau = sys.total_delay();
    const auto n = sys.n();
    const auto& s = cfg.initial;
    switch (s.kind) {
        case InitialKind::zero:
            info["initial"] = "zero";
            return PhasePoint::zero(n, tau, 256);
        case InitialKind::constant: {
            info["initial"] = {{"kind", "constant"}, {"value", s.value}};
            const double v = s.value;
            return PhasePoint::from_function(
                tau, 256, [v](double) { return v; }, [](double) { return 0.0; }, VectorXd::Constant(std::max<Eigen::Index>(n - 1, 0), v));
        }
        case InitialKind::random:
            info["initial"] = {{"kind", "random"}, {"seed", s.seed}, {"amplitude", s.amplitude}};
            return random_initial(n, tau, s.seed, s.amplitude);
        case InitialKind::eigen: {
            const auto roots = real_roots(linearize(sys));
            if (roots.empty()) throw UsageError("initial kind 'eigen' needs a real characteristic root; none exists");
            const double lm = roots.back().re;
            EigenSeed seed = eigenfunction_initial(sys, lm, s.eigen_amplitude);
            info["initial"] = {{"kind", "eigen"}, {"lambda_minus", lm}, {"amplitude", seed.amplitude}};
            return seed.point;
        }
    }
    throw UsageError("unknown initial kind");
}

Json normalization_json(const Normalization& nz) {
    return Json{{"signs", nz.signs}, {"shifts", nz.shifts}, {"identity", nz.is_identity()}};
}

int cmd_spectrum(Session& s, const std::vector<std::string>& argv) {
    const auto& cfg = s.config();
    Rectangle region{};
    if (!s.flags().region.empty()) region = parse_region(s.flags().region);
    else if (cfg.analysis.region) region = *cfg.analysis.region;
    else throw UsageError("spectrum: give --region or analysis.region");
    const SpectralParams p = cfg.spectral();
    const auto roots = find_roots_in_rectangle(p, region, cfg.analysis.spectrum);
    const auto count = count_roots_certified(p, region, cfg.analysis.spectrum);
    const auto validation = validate_spectrum(roots, p);
    int listed = 0;
    for (const auto& r : roots) listed += r.multiplicity;
    s.csv("roots.csv", roots_table(roots));
    s.json("result.json", Json{{"command", "spectrum"},
                               {"params", to_json(p)},
                               {"region", {region.re_min, region.re_max, region.im_min, region.im_max}},
                               {"certified_count", count.count},
                               {"roots", to_json(roots)},
                               {"validation", {{"simplicity", validation.simplicity.passed},
                                               {"vertical", validation.vertical.passed},
                                               {"horizontal", validation.horizontal.passed}}}});
    s.out() << fmt::format("{} root(s) in [{}, {}] x [{}, {}]\n", count.count, region.re_min, region.re_max, region.im_min, region.im_max);
    for (const auto& r : roots) s.out() << fmt::format("  {:+.10f} {:+.10f}i  mult {}  residual {:.2e}\n", r.re, r.im, r.multiplicity, r.residual);
    s.verdict("count_matches", listed == count.count);
    s.verdict("validation", validation.passed());
    return s.finish(argv);
}

int cmd_a0(Session& s, const std::vector<std::string>& argv) {
    const SpectralParams p = s.config().spectral();
    const auto info = compute_a0_info(p);
    Json j{{"command", "a0"}, {"params", to_json(p)}};
    if (info) {
        j["a0"] = info->a0;
        j["minimizers"] = info->minimizers;
        j["real_roots_at_a"] = p.a <= info->a0;
        s.out() << fmt::format("a0 = {:.10g}\n", info->a0);
    } else {
        j["a0"] = nullptr;
        s.out() << "a0 does not exist (no real roots for any a > 0)\n";
    }
    s.json("result.json", j);
    return s.finish(argv);
}

int cmd_bifurcations(Session& s, const std::vector<std::string>& argv) {
    const auto& cfg = s.config();
    const int kmax = s.flags().kmax > 0 ? s.flags().kmax : cfg.analysis.kmax;
    const SpectralParams p = cfg.spectral();
    const auto seq = bifurcation_sequence(p, kmax);
    s.csv("bifurcations.csv", bifurcation_table(seq));
    Json arr = Json::array();
    for (const auto& b : seq) {
        arr.push_back(to_json(b));
        s.out() << fmt::format("k={:<3} omega={:.10g}  a={:.10g}\n", b.k, b.omega, b.a);
    }
    const auto a0 = compute_a0(p);
    s.json("result.json", Json{{"command", "bifurcations"}, {"params", to_json(p)}, {"points", arr}, {"a0", a0 ? Json(*a0) : Json(nullptr)}});
    return s.finish(argv);
}

struct Simulation {
    CyclicSystem sys;
    Trajectory traj;
    Json info;
};

Simulation simulate(Session& s) {
    const auto& cfg = s.config();
    Simulation sim;
    const Normalization nz = cfg.normalized();
    sim.sys = nz.standard;
    const double tau = sim.sys.total_delay();
    const double horizon = s.flags().horizon > 0 ? s.flags().horizon : cfg.analysis.horizon.value_or(40.0 * tau);
    const int N = s.flags().step_div > 0 ? s.flags().step_div : cfg.analysis.step_div;
    if (N < 64) throw UsageError("--step-div must be >= 64");
    sim.info["normalization"] = normalization_json(nz);
    const PhasePoint init = initial_point(cfg, sim.sys, sim.info);
    sim.traj = integrate(sim.sys, init, horizon, N);
    sim.info["horizon"] = horizon;
    sim.info["steps_per_delay"] = N;
    sim.info["truncated"] = sim.traj.truncated();
    if (sim.traj.truncated()) sim.info["event"] = sim.traj.events.front().message;
    return sim;
}

int cmd_simulate(Session& s, const std::vector<std::string>& argv) {
    Simulation sim = simulate(s);
    s.csv("trajectory.csv", trajectory_table(sim.traj));
    Json j{{"command", "simulate"}, {"params", to_json(linearize(sim.sys))}};
    j.update(sim.info);
    if (sim.traj.end_time() >= 2.0 * sim.traj.tau) j["residual"] = residual_norm(sim.sys, sim.traj);
    s.json("result.json", j);
    s.out() << fmt::format("integrated to t = {} ({} nodes)\n", sim.traj.end_time(), sim.traj.size());
    return s.finish(argv);
}

int cmd_classify(Session& s, const std::vector<std::string>& argv) {
    Simulation sim = simulate(s);
    const auto& cfg = s.config();
    ClassifyOptions co;
    co.window = s.flags().window > 0 ? std::optional<double>(s.flags().window) : cfg.analysis.window;
    co.transient = cfg.analysis.transient;
    OscillationReport rep = classify(sim.traj, co);
    Json extra;
    if (rep.cls == OscillationClass::non_oscillatory_decaying) {
        const DecayFit fit = decay_rate_estimate(sim.traj, rep);
        rep.decay_rate = fit.rate;
        extra["decay_fit"] = {{"rate", fit.rate}, {"residual", fit.residual}, {"t_from", fit.t_from}, {"t_to", fit.t_to}};
    } else if (rep.cls == OscillationClass::oscillatory) {
        const auto slow = slow_oscillation_check(rep);
        rep.slow = slow.slow;
        extra["slow_violations"] = slow.violations;
    }
    s.csv("trajectory.csv", trajectory_table(sim.traj));
    s.csv("crossings.csv", crossings_table(rep.crossings));
    Json j{{"command", "classify"}, {"params", to_json(linearize(sim.sys))}, {"report", to_json(rep)}};
    j.update(sim.info);
    if (!extra.is_null()) j.update(extra);
    s.json("result.json", j);
    s.out() << fmt::format("class: {} ({})\n", to_string(rep.cls), rep.reason);
    if (rep.decay_rate) s.out() << fmt::format("decay rate: {:.8g}\n", *rep.decay_rate);
    if (rep.slow) s.out() << fmt::format("slow oscillation: {}\n", *rep.slow ? "yes" : "no");
    return s.finish(argv);
}

int cmd_sweep(Session& s, const std::vector<std::string>& argv) {
    const auto& cfg = s.config();
    if (!cfg.sweep) throw UsageError("sweep: scenario has no 'sweep' section");
    AnalysisSpec analysis = cfg.analysis;
    if (s.flags().seeds > 0) analysis.seeds = s.flags().seeds;
    if (s.flags().horizon > 0) analysis.horizon = s.flags().horizon;
    if (s.flags().window > 0) analysis.window = s.flags().window;
    if (s.flags().step_div > 0) analysis.step_div = s.flags().step_div;
    const auto points = run_sweep(cfg.system, *cfg.sweep, analysis);
    s.csv("sweep.csv", sweep_table(points, cfg.sweep->parameter));
    int failures = 0;
    for (const auto& p : points) failures += p.error.empty() ? 0 : 1;
    s.json("result.json", Json{{"command", "sweep"},
                               {"parameter", cfg.sweep->parameter},
                               {"from", cfg.sweep->from},
                               {"to", cfg.sweep->to},
                               {"steps", cfg.sweep->steps},
                               {"analyses", cfg.sweep->analyses},
                               {"failed_points", failures}});
    s.out() << fmt::format("{} grid points, {} with errors\n", points.size(), failures);
    return s.finish(argv);
}

int cmd_reproduce(Session& s, const std::vector<std::string>& argv) {
    std::vector<std::string> cases;
    if (s.flags().case_id == "all") cases = reproduce_cases();
    else cases.push_back(s.flags().case_id);
    const auto known = reproduce_cases();
    for (const auto& c : cases)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw UsageError(fmt::format("reproduce: unknown case '{}' (known: {})", c, fmt::join(known, ", ")));
    Json all = Json::array();
    for (const auto& c : cases) {
        const ReproduceResult r = reproduce_paper(c);
        s.csv("reproduce_" + c + ".csv", reproduce_table(r));
        all.push_back(to_json(r));
        s.out() << fmt::format("{}:\n  {:<12} {:>24} {:>24} {:>10}\n", c, "label", "reference", "computed", "|diff|");
        for (const auto& row : r.rows)
            s.out() << fmt::format("  {:<12} {:>24} {:>24} {:>10.2e}\n", row.label,
                                   fmt::format("{:.4f}{:+.4f}i", row.reference.real(), row.reference.imag()),
                                   fmt::format("{:.6f}{:+.6f}i", row.computed.real(), row.computed.imag()), row.diff);
        s.out() << "  verdict: " << (r.pass() ? "PASS" : "FAIL") << "\n";
        s.verdict(c, r.pass());
    }
    s.json("result.json", Json{{"command", "reproduce"}, {"cases", all}});
    return s.finish(argv);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cyclic delay system analysis"};
    app.name("cdde");
    app.require_subcommand(1);
    Flags flags;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "scenario file (YAML)");
        sub->add_option("--out", flags.out, "output directory (default: scenario output, $CDDE_OUT, ./cdde_out)");
    };
    auto* spectrum = app.add_subcommand("spectrum", "roots of the characteristic equation in a rectangle");
    add_common(spectrum);
    spectrum->add_option("--region", flags.region, "re_min,re_max,im_min,im_max");
    auto* a0 = app.add_subcommand("a0", "largest gain with real characteristic roots");
    add_common(a0);
    auto* bif = app.add_subcommand("bifurcations", "gains a_k with purely imaginary roots");
    add_common(bif);
    bif->add_option("--kmax", flags.kmax, "number of bifurcation points");
    auto* sim = app.add_subcommand("simulate", "integrate the standard-form system");
    add_common(sim);
    auto* cls = app.add_subcommand("classify", "integrate and classify the trajectory");
    add_common(cls);
    for (auto* sub : {sim, cls}) {
        sub->add_option("--horizon", flags.horizon, "integration horizon (time units)");
        sub->add_option("--step-div", flags.step_div, "steps per delay (>= 64)");
    }
    cls->add_option("--window", flags.window, "decision window (time units)");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep from the scenario's sweep section");
    add_common(sweep);
    sweep->add_option("--seeds", flags.seeds, "ensemble members per grid point");
    sweep->add_option("--horizon", flags.horizon, "integration horizon (time units)");
    sweep->add_option("--window", flags.window, "decision window (time units)");
    sweep->add_option("--step-div", flags.step_div, "steps per delay (>= 64)");
    auto* rep = app.add_subcommand("reproduce", "rerun a built-in reference case");
    add_common(rep);
    rep->add_option("case", flags.case_id, "case id or 'all'")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    CLI::App* chosen = app.get_subcommands().front();
    const std::string cmd = chosen->get_name();
    try {
        Session s(cmd, flags, out);
        std::vector<std::string> argv{"cdde"};
        argv.insert(argv.end(), args.begin(), args.end());
        if (cmd == "spectrum") return cmd_spectrum(s, argv);
        if (cmd == "a0") return cmd_a0(s, argv);
        if (cmd == "bifurcations") return cmd_bifurcations(s, argv);
        if (cmd == "simulate") return cmd_simulate(s, argv);
        if (cmd == "classify") return cmd_classify(s, argv);
        if (cmd == "sweep") return cmd_sweep(s, argv);
        if (cmd == "reproduce") return cmd_reproduce(s, argv);
        err << "unknown command " << cmd << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

}  // namespace cdde
