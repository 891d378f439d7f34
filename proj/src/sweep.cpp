#include "cdde/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace cdde {

CyclicSystem with_parameter(const CyclicSystem& standard, const std::string& parameter, double value) {
    if (!standard.is_standard_form()) throw PreconditionError("with_parameter: system must be in standard form");
    if (!(value > 0.0)) throw PreconditionError("with_parameter: value must be positive");
    CyclicSystem out = standard;
    if (parameter == "tau") {
        out.delays.back() = value;
    } else if (parameter == "a") {
        const double current = linearize(standard).a;
        out.nonlinearities.back().slope *= value / current;
        if (auto& b = out.nonlinearities.back().one_sided_bound) *b *= value / current;
    } else {
        throw PreconditionError("with_parameter: unknown parameter '" + parameter + "'");
    }
    return out;
}

namespace {

bool wants(const SweepSpec& s, const char* name) { return std::find(s.analyses.begin(), s.analyses.end(), name) != s.analyses.end(); }

SweepPoint evaluate(const CyclicSystem& base, const SweepSpec& spec, const AnalysisSpec& analysis, double value) {
    SweepPoint pt;
    pt.value = value;
    try {
        const CyclicSystem sys = with_parameter(base, spec.parameter, value);
        const SpectralParams p = linearize(sys);
        pt.a = p.a;
        pt.tau = p.tau;
        if (wants(spec, "a0")) {
            pt.a0 = compute_a0(p);
            pt.real_roots = pt.a0 && p.a <= *pt.a0;
        }
        if (wants(spec, "stability")) pt.stability = stability_assessment(p).verdict;
        if (wants(spec, "ensemble")) {
            EnsembleOptions eo;
            eo.members = analysis.seeds;
            eo.seed = analysis.ensemble_seed;
            eo.steps_per_delay = analysis.step_div;
            eo.threads = 1;
            if (analysis.horizon) eo.horizon_delays = *analysis.horizon / p.tau;
            eo.classify.window = analysis.window;
            eo.classify.transient = analysis.transient;
            std::array<int, 4> counts{0, 0, 0, 0};
            for (const auto& r : run_ensemble(sys, eo)) ++counts[static_cast<std::size_t>(r.cls)];
            pt.ensemble = counts;
        }
        if (wants(spec, "strip")) pt.strip_count = count_strip_roots(p);
    } catch (const std::exception& e) {
        pt.error = e.what();
    }
    return pt;
}

}  // namespace

std::vector<SweepPoint> run_sweep(const CyclicSystem& sys, const SweepSpec& spec, const AnalysisSpec& analysis, unsigned threads) {
    if (spec.steps < 2) throw PreconditionError("sweep: need at least 2 steps");
    if (!(spec.from < spec.to)) throw PreconditionError("sweep: empty range");
    const CyclicSystem base = normalize_system(sys).standard;
    std::vector<SweepPoint> out(static_cast<std::size_t>(spec.steps));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < spec.steps; i = next++) {
            const double v = spec.from + (spec.to - spec.from) * i / (spec.steps - 1);
            out[static_cast<std::size_t>(i)] = evaluate(base, spec, analysis, v);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.steps));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

CsvTable sweep_table(const std::vector<SweepPoint>& points, const std::string& parameter) {
    CsvTable t{{"param_" + parameter, "a", "tau", "a0", "real_roots", "strip_count", "stability", "ens_oscillatory", "ens_non_oscillatory",
                "ens_trivial", "ens_undecided", "error"},
               {}};
    auto opt = [](const auto& o, auto fmt) { return o ? fmt(*o) : std::string(); };
    for (const auto& p : points) {
        std::vector<std::string> row{format_double(p.value), format_double(p.a), format_double(p.tau),
                                     opt(p.a0, format_double), opt(p.real_roots, [](bool b) { return std::string(b ? "1" : "0"); }),
                                     opt(p.strip_count, [](int c) { return std::to_string(c); }),
                                     opt(p.stability, [](Stability s) { return to_string(s); })};
        for (std::size_t k = 0; k < 4; ++k) row.push_back(p.ensemble ? std::to_string((*p.ensemble)[k]) : std::string());
        std::string err = p.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        row.push_back(err);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace cdde
