#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cdde {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = VecX<double>;
using MatrixXd = MatX<double>;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Input violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to deliver a certified answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root lies too close to a contour boundary to be counted unambiguously.
class BoundaryProximityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace cdde
