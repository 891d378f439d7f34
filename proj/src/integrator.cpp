#include "cdde/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace cdde {

PhasePoint PhasePoint::from_function(double tau, int grid, const std::function<double(double)>& phi,
                                     const std::function<double(double)>& dphi, VectorXd scalars) {
    if (!(tau > 0.0) || grid < 4) throw PreconditionError("phase point: need tau > 0 and at least 4 grid intervals");
    PhasePoint p;
    p.tau = tau;
    p.history.resize(grid + 1);
    p.history_slope.resize(grid + 1);
    const double h = tau / grid;
    for (int i = 0; i <= grid; ++i) {
        const double s = (i == grid) ? 0.0 : -tau + i * h;
        p.history[i] = phi(s);
        p.history_slope[i] = dphi(s);
    }
    p.scalars = std::move(scalars);
    return p;
}

PhasePoint PhasePoint::from_function(double tau, int grid, const std::function<double(double)>& phi, VectorXd scalars) {
    const double h = tau / std::max(grid, 4);
    // five-point stencil; one-sided at the ends of [-tau, 0]
    auto dphi = [&, h](double s) {
        const double e = 0.25 * h;
        if (s - 2 * e < -tau) return (-25 * phi(s) + 48 * phi(s + e) - 36 * phi(s + 2 * e) + 16 * phi(s + 3 * e) - 3 * phi(s + 4 * e)) / (12 * e);
        if (s + 2 * e > 0.0) return (25 * phi(s) - 48 * phi(s - e) + 36 * phi(s - 2 * e) - 16 * phi(s - 3 * e) + 3 * phi(s - 4 * e)) / (12 * e);
        return (phi(s - 2 * e) - 8 * phi(s - e) + 8 * phi(s + e) - phi(s + 2 * e)) / (12 * e);
    };
    return from_function(tau, grid, phi, dphi, std::move(scalars));
}

PhasePoint PhasePoint::zero(Eigen::Index n, double tau, int grid) {
    return from_function(tau, grid, [](double) { return 0.0; }, [](double) { return 0.0; }, VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0)));
}

double PhasePoint::value(double s) const {
    const int m = grid();
    const double h = tau / m;
    const double u = std::clamp((s + tau) / h, 0.0, static_cast<double>(m));
    const int i = std::min(static_cast<int>(u), m - 1);
    return hermite(history[i], history_slope[i], history[i + 1], history_slope[i + 1], h, u - i);
}

double PhasePoint::slope(double s) const {
    const int m = grid();
    const double h = tau / m;
    const double u = std::clamp((s + tau) / h, 0.0, static_cast<double>(m));
    const int i = std::min(static_cast<int>(u), m - 1);
    const double th = u - i;
    const double t2 = th * th;
    return ((6 * t2 - 6 * th) * history[i] + (3 * t2 - 4 * th + 1) * h * history_slope[i] + (-6 * t2 + 6 * th) * history[i + 1] +
            (3 * t2 - 2 * th) * h * history_slope[i + 1]) /
           h;
}

void PhasePoint::validate(Eigen::Index n) const {
    if (history.size() < 5 || history_slope.size() != history.size())
        throw PreconditionError("phase point: history grid must have matching values and slopes");
    if (scalars.size() != std::max<Eigen::Index>(n - 1, 0))
        throw PreconditionError("phase point: expected " + std::to_string(n - 1) + " scalar components");
    if (!history.allFinite() || !history_slope.allFinite() || !scalars.allFinite())
        throw PreconditionError("phase point: non-finite initial data");
}

double Trajectory::sample(Eigen::Index k, double t) const {
    if (t < t0) {
        if (k != 0) throw PreconditionError("trajectory: only x_1 has a history before t0");
        return history.value(t - t0);
    }
    const double u = std::min((t - t0) / step, static_cast<double>(size() - 1));
    const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), size() - 2);
    return hermite(values(k, i), slopes(k, i), values(k, i + 1), slopes(k, i + 1), step, u - static_cast<double>(i));
}

namespace {

void rhs(const CyclicSystem& sys, const VectorXd& y, double delayed_x1, VectorXd& dy) {
    const Eigen::Index n = sys.n();
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        dy[k] = -sys.lambdas[k] * y[k] + sys.nonlinearities[static_cast<std::size_t>(k)](y[k + 1]);
    dy[n - 1] = -sys.lambdas[n - 1] * y[n - 1] + sys.nonlinearities.back()(delayed_x1);
}

}  // namespace

Trajectory integrate(const CyclicSystem& sys, const PhasePoint& init, double horizon, int steps_per_delay) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("integrate: system must be in standard form (see normalize_system)");
    if (steps_per_delay < 64) throw PreconditionError("integrate: step must be tau/N with N >= 64");
    if (!(horizon > 0.0)) throw PreconditionError("integrate: horizon must be positive");
    const Eigen::Index n = sys.n();
    init.validate(n);
    const double tau = sys.total_delay();
    if (std::abs(init.tau - tau) > 1e-12 * tau) throw PreconditionError("integrate: initial history must cover [-tau, 0]");

    const int N = steps_per_delay;
    const double h = tau / N;
    const auto steps = static_cast<Eigen::Index>(std::ceil(horizon / h - 1e-9));

    Trajectory traj;
    traj.t0 = 0.0;
    traj.step = h;
    traj.tau = tau;
    traj.history = init;
    traj.values.resize(n, steps + 1);
    traj.slopes.resize(n, steps + 1);

    // x_1(t - tau) at node j - N + frac, frac in {0, 1/2, 1}
    auto delayed = [&](Eigen::Index i, double frac) {
        const Eigen::Index j = i - N;
        const double s = (static_cast<double>(j) + frac) * h;
        if (static_cast<double>(j) + frac <= 0.0) return init.value(s);
        if (frac == 0.0) return traj.values(0, j);
        if (frac == 1.0) return traj.values(0, j + 1);
        return hermite(traj.values(0, j), traj.slopes(0, j), traj.values(0, j + 1), traj.slopes(0, j + 1), h, frac);
    };

    VectorXd y(n);
    y[0] = init.value(0.0);
    if (n > 1) y.tail(n - 1) = init.scalars;
    VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
    traj.values.col(0) = y;
    rhs(sys, y, delayed(0, 0.0), k1);
    traj.slopes.col(0) = k1;

    for (Eigen::Index i = 0; i < steps; ++i) {
        const double d0 = delayed(i, 0.0);
        const double dm = delayed(i, 0.5);
        const double d1 = delayed(i, 1.0);
        rhs(sys, y, d0, k1);
        tmp = y + 0.5 * h * k1;
        rhs(sys, tmp, dm, k2);
        tmp = y + 0.5 * h * k2;
        rhs(sys, tmp, dm, k3);
        tmp = y + h * k3;
        rhs(sys, tmp, d1, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite()) {
            traj.values.conservativeResize(n, i + 1);
            traj.slopes.conservativeResize(n, i + 1);
            traj.events.push_back({traj.time(i + 1), "non-finite state; trajectory truncated"});
            return traj;
        }
        traj.values.col(i + 1) = y;
        rhs(sys, y, d1, k1);
        traj.slopes.col(i + 1) = k1;
    }
    return traj;
}

EigenSeed eigenfunction_initial(const CyclicSystem& sys, double lambda_minus, std::optional<double> amplitude, int grid) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("eigenfunction_initial: system must be in standard form");
    if (!(lambda_minus < 0.0)) throw PreconditionError("eigenfunction_initial: lambda_minus must be negative");
    const Eigen::Index n = sys.n();
    const double tau = sys.total_delay();
    VectorXd p(n);
    p[0] = 1.0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        const double shift = lambda_minus + sys.lambdas[j];
        if (std::abs(shift) <= 1e-14 * (1.0 + std::abs(lambda_minus)))
            throw NumericalError("eigenfunction_initial: lambda_minus + lambda_j = 0; degenerate recursion");
        p[j + 1] = shift * p[j] / sys.nonlinearities[static_cast<std::size_t>(j)].slope_at_zero();
    }
    const double lhs = (lambda_minus + sys.lambdas[n - 1]) * p[n - 1];
    const double rhs_v = sys.nonlinearities.back().slope_at_zero() * p[0] * std::exp(-lambda_minus * tau);
    const double closure = std::abs(lhs - rhs_v) / std::max({std::abs(lhs), std::abs(rhs_v), 1e-300});
    if (closure > 1e-8)
        throw PreconditionError("eigenfunction_initial: lambda_minus is not a root of the linearization (closure residual " +
                                std::to_string(closure) + ")");
    if ((p.array() == 0.0).any()) throw NumericalError("eigenfunction_initial: eigenvector has a zero component");

    EigenSeed seed;
    seed.eigenvector = p;
    seed.closure_residual = closure;
    seed.amplitude = amplitude.value_or(1e-3 / p.cwiseAbs().maxCoeff());
    const double eps = seed.amplitude;
    seed.point = PhasePoint::from_function(
        tau, grid, [=](double s) { return eps * std::exp(lambda_minus * s); },
        [=](double s) { return eps * lambda_minus * std::exp(lambda_minus * s); },
        n > 1 ? VectorXd(eps * p.tail(n - 1)) : VectorXd(0));
    return seed;
}

double residual_norm(const CyclicSystem& sys, const Trajectory& traj) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("residual_norm: system must be in standard form");
    const double tau = sys.total_delay();
    if (traj.end_time() - traj.t0 < 2.0 * tau - 1e-12) throw PreconditionError("residual_norm: trajectory must cover at least 2 tau");
    const Eigen::Index n = sys.n();
    const double h = traj.step;
    const auto lag = static_cast<Eigen::Index>(std::llround(tau / h));
    double worst = 0.0;
    for (Eigen::Index i = std::max<Eigen::Index>(lag, 1); i + 1 < traj.size(); ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double deriv = (traj.values(k, i + 1) - traj.values(k, i - 1)) / (2.0 * h);
            const double arg = (k + 1 < n) ? traj.values(k + 1, i) : traj.values(0, i - lag);
            const double r = deriv + sys.lambdas[k] * traj.values(k, i) - sys.nonlinearities[static_cast<std::size_t>(k)](arg);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace cdde
