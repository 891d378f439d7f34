#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdde/common.hpp"
#include "cdde/cyclic_system.hpp"

namespace cdde {

/// Cubic Hermite value on [0, h] from end values and slopes; theta in [0, 1].
inline double hermite(double v0, double d0, double v1, double d1, double h, double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + theta) * h * d0 + (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * d1;
}

/**
 * @brief Initial point of the standard-form system: a history of x_1 on
 * [-tau, 0] (grid values and slopes, Hermite interpolated) and x_2..x_n at 0.
 */
struct PhasePoint {
    double tau{1.0};
    VectorXd history;        ///< x_1 at s_i = -tau + i tau / N, i = 0..N
    VectorXd history_slope;  ///< x_1' at the same nodes
    VectorXd scalars;        ///< x_2(0) .. x_n(0)

    /// Samples phi (and dphi, or 4th-order finite differences of phi) on an N-interval grid.
    static PhasePoint from_function(double tau, int grid, const std::function<double(double)>& phi,
                                    const std::function<double(double)>& dphi, VectorXd scalars);
    static PhasePoint from_function(double tau, int grid, const std::function<double(double)>& phi, VectorXd scalars);
    static PhasePoint zero(Eigen::Index n, double tau, int grid = 64);

    [[nodiscard]] int grid() const { return static_cast<int>(history.size()) - 1; }
    [[nodiscard]] double value(double s) const;
    [[nodiscard]] double slope(double s) const;
    void validate(Eigen::Index n) const;
};

struct TrajectoryEvent {
    double time{0};
    std::string message;
};

/// Dense numerical solution on t_i = t0 + i * step, i = 0..size()-1.
struct Trajectory {
    double t0{0};
    double step{0};
    double tau{0};
    MatrixXd values;  ///< n x N
    MatrixXd slopes;  ///< n x N, right-hand side at the nodes
    PhasePoint history;
    std::vector<TrajectoryEvent> events;

    [[nodiscard]] Eigen::Index n() const { return values.rows(); }
    [[nodiscard]] Eigen::Index size() const { return values.cols(); }
    [[nodiscard]] double time(Eigen::Index i) const { return t0 + static_cast<double>(i) * step; }
    [[nodiscard]] double end_time() const { return time(size() - 1); }
    [[nodiscard]] bool truncated() const { return !events.empty(); }
    /// Hermite interpolant of component k at t (component 0 falls back to the history for t < t0).
    [[nodiscard]] double sample(Eigen::Index k, double t) const;
    /// Sup norm over components at node i.
    [[nodiscard]] double norm_at(Eigen::Index i) const { return values.col(i).cwiseAbs().maxCoeff(); }
};

/// Method of steps with classical RK4 on a grid commensurate with tau (step = tau / steps_per_delay).
Trajectory integrate(const CyclicSystem& sys, const PhasePoint& init, double horizon, int steps_per_delay);

struct EigenSeed {
    PhasePoint point;
    VectorXd eigenvector;  ///< p with p_1 = 1
    double amplitude{0};
    double closure_residual{0};
};

/// Initial data eps * exp(lambda_minus s) * p on the real eigen-direction of the linearization.
EigenSeed eigenfunction_initial(const CyclicSystem& sys, double lambda_minus, std::optional<double> amplitude = std::nullopt,
                                int grid = 256);

/// Max over interior nodes in [t0 + tau, end) of |x_k' + lambda_k x_k - f_k(.)| with centered differences.
double residual_norm(const CyclicSystem& sys, const Trajectory& traj);

}  // namespace cdde
