#include "cdde/oscillation.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <thread>

namespace cdde {

std::size_t CrossingList::min_count() const {
    if (times.empty()) return 0;
    std::size_t m = times.front().size();
    for (const auto& t : times) m = std::min(m, t.size());
    return m;
}

std::size_t CrossingList::total() const {
    std::size_t s = 0;
    for (const auto& t : times) s += t.size();
    return s;
}

std::vector<double> detect_zero_crossings(std::span<const double> t, std::span<const double> x, double noise) {
    if (t.size() != x.size()) throw PreconditionError("detect_zero_crossings: time and value arrays differ in length");
    std::vector<double> out;
    int last_sign = 0;
    std::size_t last_idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int s = std::abs(x[i]) < noise ? 0 : (x[i] > 0.0 ? 1 : -1);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            if (i == last_idx + 1) {
                const double x0 = x[last_idx];
                const double x1 = x[i];
                out.push_back(t[last_idx] + (t[i] - t[last_idx]) * x0 / (x0 - x1));
            } else {
                // zero run between opposite signs, counted once
                out.push_back(0.5 * (t[last_idx + 1] + t[i - 1]));
            }
        }
        last_sign = s;
        last_idx = i;
    }
    return out;
}

std::vector<double> detect_zero_crossings(const Trajectory& traj, Eigen::Index component, double t_from, double t_to, double noise) {
    if (traj.size() == 0) throw PreconditionError("detect_zero_crossings: empty trajectory");
    if (component < 0 || component >= traj.n()) throw PreconditionError("detect_zero_crossings: component out of range");
    const auto first = static_cast<Eigen::Index>(std::max(0.0, std::ceil((t_from - traj.t0) / traj.step - 1e-9)));
    const auto last = std::min<Eigen::Index>(traj.size() - 1, static_cast<Eigen::Index>(std::floor((t_to - traj.t0) / traj.step + 1e-9)));
    if (last < first) return {};
    std::vector<double> t(static_cast<std::size_t>(last - first + 1));
    std::vector<double> x(t.size());
    for (Eigen::Index i = first; i <= last; ++i) {
        t[static_cast<std::size_t>(i - first)] = traj.time(i);
        x[static_cast<std::size_t>(i - first)] = traj.values(component, i);
    }
    return detect_zero_crossings(t, x, noise);
}

std::vector<double> detect_zero_crossings(const Trajectory& traj, Eigen::Index component) {
    return detect_zero_crossings(traj, component, traj.t0, traj.end_time());
}

std::string to_string(OscillationClass c) {
    switch (c) {
        case OscillationClass::oscillatory: return "oscillatory";
        case OscillationClass::non_oscillatory_decaying: return "non_oscillatory_decaying";
        case OscillationClass::eventually_trivial: return "eventually_trivial";
        case OscillationClass::undecided: return "undecided";
    }
    return "undecided";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

OscillationReport classify(const Trajectory& traj, const ClassifyOptions& opt) {
    const double tau = traj.tau;
    const double window = opt.window.value_or(10.0 * tau);
    const double transient = opt.transient.value_or(5.0 * tau);
    if (!(window > 0.0) || transient < 0.0) throw PreconditionError("classify: window must be positive and transient non-negative");
    if (traj.size() < 2) throw PreconditionError("classify: trajectory is empty");
    const double span = traj.end_time() - traj.t0;
    if (span + 1e-9 * std::max(tau, 1.0) < window + transient)
        throw PreconditionError(fmt::format("classify: window {} plus transient {} exceeds the trajectory length {}", window, transient, span));

    OscillationReport rep;
    rep.tau = tau;
    rep.window_end = traj.end_time();
    rep.window_start = rep.window_end - window;
    rep.crossings.times.resize(static_cast<std::size_t>(traj.n()));
    if (traj.truncated()) {
        rep.reason = "trajectory truncated: " + traj.events.front().message;
        return rep;
    }
    const Eigen::Index last = traj.size() - 1;
    const auto first = std::min(last, static_cast<Eigen::Index>(std::ceil((rep.window_start - traj.t0) / traj.step - 1e-9)));
    rep.window_start = traj.time(first);
    rep.start_norm = traj.norm_at(first);
    rep.end_norm = traj.norm_at(last);

    Eigen::Index active = -1;
    for (Eigen::Index i = last; i >= first; --i) {
        if (traj.norm_at(i) >= opt.trivial_floor) {
            active = i;
            break;
        }
    }
    if (active < 0) {
        rep.cls = OscillationClass::eventually_trivial;
        rep.active_end = rep.window_start;
        rep.reason = "norm below the trivial floor over the whole window";
        return rep;
    }
    rep.active_end = traj.time(active);

    std::size_t crossing_components = 0;
    for (Eigen::Index k = 0; k < traj.n(); ++k) {
        rep.crossings.times[static_cast<std::size_t>(k)] =
            detect_zero_crossings(traj, k, rep.window_start, rep.active_end, opt.noise_floor);
        if (!rep.crossings.times[static_cast<std::size_t>(k)].empty()) ++crossing_components;
    }
    const bool oscillation_evidence = rep.crossings.min_count() >= 2;
    const bool quiet = crossing_components == 0;
    assert(!(oscillation_evidence && quiet));

    if (oscillation_evidence) {
        rep.cls = OscillationClass::oscillatory;
        rep.reason = fmt::format("every component changes sign at least {} times", rep.crossings.min_count());
        return rep;
    }
    if (!quiet) {
        rep.reason = fmt::format("{} of {} components change sign, some fewer than twice", crossing_components, traj.n());
        return rep;
    }
    const double active_span = rep.active_end - rep.window_start;
    if (active_span < opt.min_active_delays * tau) {
        if (active < last) {
            rep.cls = OscillationClass::eventually_trivial;
            rep.reason = "norm drops below the trivial floor early in the window";
        } else {
            rep.reason = "window too short for a non-oscillation verdict";
        }
        return rep;
    }
    // monotone tail: |x_j| non-increasing up to rounding, and decaying overall
    for (Eigen::Index k = 0; k < traj.n(); ++k) {
        for (Eigen::Index i = first; i < active; ++i) {
            const double a = std::abs(traj.values(k, i));
            const double b = std::abs(traj.values(k, i + 1));
            if (b > a * (1.0 + 1e-9) + opt.noise_floor) {
                rep.reason = fmt::format("|x_{}| increases at t = {}", k + 1, traj.time(i));
                return rep;
            }
        }
    }
    if (!(traj.norm_at(active) < rep.start_norm)) {
        rep.reason = "no sign changes but the norm does not decay";
        return rep;
    }
    rep.cls = OscillationClass::non_oscillatory_decaying;
    rep.reason = "constant signs with monotonically decreasing magnitudes";
    return rep;
}

SlowOscillationResult slow_oscillation_check(const CrossingList& crossings, double tau) {
    SlowOscillationResult out;
    const std::size_t n = crossings.components();
    if (n == 0) {
        out.violations.emplace_back("no components");
        return out;
    }
    if (n == 1) {
        const auto& z = crossings.times[0];
        if (z.size() < 2) out.violations.emplace_back("x_1 has fewer than two zeros");
        for (std::size_t i = 0; i + 1 < z.size(); ++i)
            if (!(z[i + 1] - z[i] > tau)) out.violations.push_back(fmt::format("x_1 zeros {} and {} are within tau", z[i], z[i + 1]));
        out.slow = out.violations.empty();
        return out;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto& zj = crossings.times[j];
        if (zj.size() < 2) out.violations.push_back(fmt::format("x_{} has fewer than two zeros", j + 1));
        for (std::size_t i = 0; i + 1 < zj.size(); ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                if (l == j) continue;
                const auto& zl = crossings.times[l];
                const auto lo = std::upper_bound(zl.begin(), zl.end(), zj[i]);
                const auto hi = std::lower_bound(zl.begin(), zl.end(), zj[i + 1]);
                const auto count = std::max<std::ptrdiff_t>(0, hi - lo);
                if (count != 1)
                    out.violations.push_back(
                        fmt::format("x_{} has {} zeros between consecutive zeros {} and {} of x_{}", l + 1, count, zj[i], zj[i + 1], j + 1));
            }
        }
    }
    out.slow = out.violations.empty();
    return out;
}

SlowOscillationResult slow_oscillation_check(const OscillationReport& report) {
    if (report.cls != OscillationClass::oscillatory) {
        SlowOscillationResult out;
        out.violations.push_back("report is " + to_string(report.cls) + ", not oscillatory");
        return out;
    }
    return slow_oscillation_check(report.crossings, report.tau);
}

DecayFit decay_rate_estimate(const Trajectory& traj, double t_from, double t_to) {
    const auto first = static_cast<Eigen::Index>(std::max(0.0, std::ceil((t_from - traj.t0) / traj.step - 1e-9)));
    const auto last = std::min<Eigen::Index>(traj.size() - 1, static_cast<Eigen::Index>(std::floor((t_to - traj.t0) / traj.step + 1e-9)));
    if (last - first < 2) throw PreconditionError("decay_rate_estimate: fit window holds fewer than three samples");
    const double sign = traj.values(0, first) > 0.0 ? 1.0 : -1.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    const auto m = static_cast<double>(last - first + 1);
    for (Eigen::Index i = first; i <= last; ++i) {
        const double v = sign * traj.values(0, i);
        if (!(v > 0.0)) throw NumericalError(fmt::format("decay_rate_estimate: x_1 is zero or changes sign at t = {}", traj.time(i)));
        const double t = traj.time(i);
        const double y = std::log(v);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    DecayFit fit;
    fit.rate = (m * sty - st * sy) / (m * stt - st * st);
    const double intercept = (sy - fit.rate * st) / m;
    double ss = 0;
    for (Eigen::Index i = first; i <= last; ++i) {
        const double r = std::log(sign * traj.values(0, i)) - (intercept + fit.rate * traj.time(i));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    fit.t_from = traj.time(first);
    fit.t_to = traj.time(last);
    fit.samples = static_cast<std::size_t>(m);
    return fit;
}

DecayFit decay_rate_estimate(const Trajectory& traj, const OscillationReport& report) {
    if (report.cls == OscillationClass::oscillatory || report.cls == OscillationClass::undecided)
        throw PreconditionError("decay_rate_estimate: report is " + to_string(report.cls));
    return decay_rate_estimate(traj, report.window_start, report.active_end);
}

PhasePoint random_initial(Eigen::Index n, double tau, std::uint64_t seed, double amplitude, int grid) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    constexpr int kModes = 3;
    const double c0 = amplitude * u(rng);
    double c[kModes];
    double phase[kModes];
    for (int m = 0; m < kModes; ++m) {
        c[m] = amplitude * u(rng) / (m + 1);
        phase[m] = kPi * u(rng);
    }
    VectorXd scalars(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 0; k < scalars.size(); ++k) scalars[k] = amplitude * u(rng);
    auto phi = [=](double s) {
        double v = c0;
        for (int m = 0; m < kModes; ++m) v += c[m] * std::sin((m + 1) * kPi * s / tau + phase[m]);
        return v;
    };
    auto dphi = [=](double s) {
        double v = 0.0;
        for (int m = 0; m < kModes; ++m) v += c[m] * (m + 1) * kPi / tau * std::cos((m + 1) * kPi * s / tau + phase[m]);
        return v;
    };
    return PhasePoint::from_function(tau, grid, phi, dphi, scalars);
}

std::vector<OscillationReport> run_ensemble(const CyclicSystem& sys, const EnsembleOptions& opt) {
    sys.validate();
    if (opt.members < 1) throw PreconditionError("run_ensemble: need at least one member");
    const double tau = sys.total_delay();
    std::vector<OscillationReport> out(static_cast<std::size_t>(opt.members));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < opt.members; i = next++) {
            auto& rep = out[static_cast<std::size_t>(i)];
            try {
                const PhasePoint init = random_initial(sys.n(), tau, opt.seed + static_cast<std::uint64_t>(i), opt.amplitude);
                const Trajectory traj = integrate(sys, init, opt.horizon_delays * tau, opt.steps_per_delay);
                rep = classify(traj, opt.classify);
            } catch (const std::exception& e) {
                rep = OscillationReport{};
                rep.tau = tau;
                rep.reason = std::string("member failed: ") + e.what();
            }
        }
    };
    unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(opt.members));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

ConsistencyVerdict theorem_consistency(const SpectralParams& p, const std::vector<OscillationReport>& ensemble,
                                       const std::optional<OscillationReport>& seeded) {
    ConsistencyVerdict v;
    v.real_roots = !real_roots(p).empty();
    bool undecided = false;
    if (!v.real_roots) {
        for (std::size_t i = 0; i < ensemble.size(); ++i) {
            const auto c = ensemble[i].cls;
            if (c == OscillationClass::undecided) {
                undecided = true;
                v.notes.push_back(fmt::format("member {} undecided: {}", i, ensemble[i].reason));
            } else if (c == OscillationClass::non_oscillatory_decaying) {
                v.counterexamples.push_back(fmt::format("member {} is non-oscillatory without real roots", i));
            }
        }
        if (ensemble.empty()) {
            undecided = true;
            v.notes.emplace_back("no ensemble members");
        }
    } else {
        if (!seeded) {
            undecided = true;
            v.notes.emplace_back("real roots exist but no seeded run was supplied");
        } else if (seeded->cls == OscillationClass::undecided) {
            undecided = true;
            v.notes.push_back("seeded run undecided: " + seeded->reason);
        } else if (seeded->cls != OscillationClass::non_oscillatory_decaying) {
            v.counterexamples.push_back("seeded run is " + to_string(seeded->cls));
        }
    }
    if (!v.counterexamples.empty())
        v.verdict = Verdict::fail;
    else if (undecided)
        v.verdict = Verdict::inconclusive;
    else
        v.verdict = Verdict::pass;
    return v;
}

}  // namespace cdde
