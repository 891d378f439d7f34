#include "cdde/cyclic_system.hpp"

#include <cmath>
#include <string>

namespace cdde {

CyclicSystem CyclicSystem::standard(VectorXd lambdas, double tau, std::vector<NonlinearitySpec> f) {
    CyclicSystem sys;
    sys.delays.assign(static_cast<std::size_t>(lambdas.size()), 0.0);
    if (!sys.delays.empty()) sys.delays.back() = tau;
    sys.lambdas = std::move(lambdas);
    sys.nonlinearities = std::move(f);
    return sys;
}

double CyclicSystem::total_delay() const {
    double t = 0.0;
    for (double d : delays) t += d;
    return t;
}

int CyclicSystem::overall_sign() const {
    int s = 1;
    for (const auto& f : nonlinearities) s *= f.feedback_sign() == FeedbackSign::positive ? 1 : -1;
    return s;
}

bool CyclicSystem::is_standard_form() const {
    const auto m = static_cast<std::size_t>(n());
    if (m == 0 || delays.size() != m || nonlinearities.size() != m) return false;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (delays[k] != 0.0) return false;
        if (nonlinearities[k].feedback_sign() != FeedbackSign::positive) return false;
    }
    return delays.back() > 0.0 && nonlinearities.back().feedback_sign() == FeedbackSign::negative;
}

bool CyclicSystem::last_one_sided_bounded() const {
    return !nonlinearities.empty() && std::isfinite(nonlinearities.back().sup());
}

void CyclicSystem::validate() const {
    const auto m = static_cast<std::size_t>(n());
    if (m == 0) throw PreconditionError("cyclic system: n must be >= 1");
    if (delays.size() != m) throw PreconditionError("cyclic system: expected " + std::to_string(m) + " delays");
    if (nonlinearities.size() != m) throw PreconditionError("cyclic system: expected " + std::to_string(m) + " nonlinearities");
    for (Eigen::Index k = 0; k < lambdas.size(); ++k)
        if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k]))
            throw PreconditionError("cyclic system: lambda_" + std::to_string(k + 1) + " must be positive");
    for (double d : delays)
        if (!(d >= 0.0) || !std::isfinite(d)) throw PreconditionError("cyclic system: delays must be non-negative");
    if (!(total_delay() > 0.0)) throw PreconditionError("cyclic system: total delay must be positive");
    for (const auto& f : nonlinearities) f.validate();
    if (overall_sign() != -1)
        throw PreconditionError("cyclic system: overall feedback is positive (product of feedback signs must be negative)");
}

bool Normalization::is_identity() const {
    for (int s : signs)
        if (s != 1) return false;
    for (double t : shifts)
        if (t != 0.0) return false;
    return true;
}

Normalization normalize_system(const CyclicSystem& sys) {
    sys.validate();
    const auto m = static_cast<std::size_t>(sys.n());
    Normalization out;
    out.signs.assign(m, 1);
    out.shifts.assign(m, 0.0);
    // z_k(t) = x_k(t - shift_k) absorbs the delays of equations 1..k-1 into the last one.
    for (std::size_t k = 1; k < m; ++k) out.shifts[k] = out.shifts[k - 1] + sys.delays[k - 1];
    // s_{k+1} = s_k sign(f_k) makes every f_k with k < n positive feedback.
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const int sk = sys.nonlinearities[k].feedback_sign() == FeedbackSign::positive ? 1 : -1;
        out.signs[k + 1] = out.signs[k] * sk;
    }
    std::vector<NonlinearitySpec> f(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double s_out = out.signs[k];
        const double s_in = out.signs[(k + 1) % m];
        f[k] = sys.nonlinearities[k].flipped(s_in, s_out);
    }
    out.standard = CyclicSystem::standard(sys.lambdas, sys.total_delay(), std::move(f));
    return out;
}

SpectralParams linearize(const CyclicSystem& sys) {
    sys.validate();
    if (!sys.is_standard_form()) throw PreconditionError("linearize: system must be in standard form");
    double prod = 1.0;
    for (const auto& f : sys.nonlinearities) {
        const double A = f.slope_at_zero();
        if (A == 0.0) throw PreconditionError("linearize: f_k'(0) must be nonzero");
        prod *= A;
    }
    SpectralParams p(sys.lambdas, sys.total_delay(), -prod);
    p.validate();
    return p;
}

}  // namespace cdde
