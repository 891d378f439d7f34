#pragma once

#include <string>
#include <vector>

#include "cdde/char_spectrum.hpp"
#include "cdde/export.hpp"

namespace cdde {

/// Fixed regression gates for the published tables; not user-configurable.
inline constexpr double kReproduceRootTol = 2e-3;
inline constexpr double kReproduceTau0Tol = 1e-4;

struct ReproduceRow {
    std::string label;
    Complex reference;
    Complex computed;
    double diff{0};
    double tolerance{0};
    [[nodiscard]] bool ok() const { return diff <= tolerance; }
};

struct ReproduceResult {
    std::string case_id;
    SpectralParams params;
    std::vector<ReproduceRow> rows;
    std::vector<CharRoot> roots;  ///< computed roots behind the table
    std::vector<std::string> failures;
    [[nodiscard]] bool pass() const { return failures.empty(); }
};

std::vector<std::string> reproduce_cases();

/// Throws PreconditionError for an unknown case id.
ReproduceResult reproduce_paper(const std::string& case_id);

/// Largest tau (within tol) at which the characteristic equation still has a real root, on [lo, hi].
double locate_tau0(const VectorXd& lambdas, double a, double lo, double hi, double tol = 1e-10);

/// lambda_k = 2^{-(k-1)}, k = 1..n: the rates behind the published strip-root examples.
VectorXd halving_rates(int n);

CsvTable reproduce_table(const ReproduceResult& r);  ///< label, reference_re, reference_im, computed_re, computed_im, abs_diff, ok
Json to_json(const ReproduceResult& r);

}  // namespace cdde
