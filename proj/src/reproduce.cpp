#include "cdde/reproduce.hpp"

#include <fmt/format.h>

#include <limits>

namespace cdde {

namespace {

struct Published {
    std::string label;
    Complex z;
};

/// Nearest computed root to the published value; conjugates count for the lower half-plane.
ReproduceRow match(const Published& pub, const std::vector<CharRoot>& roots) {
    ReproduceRow row{pub.label, pub.z, {std::numeric_limits<double>::quiet_NaN(), 0.0}, std::numeric_limits<double>::infinity(),
                     kReproduceRootTol};
    for (const auto& r : roots) {
        for (const Complex z : {r.z(), std::conj(r.z())}) {
            const double d = std::abs(z - pub.z);
            if (d < row.diff) {
                row.diff = d;
                row.computed = z;
            }
        }
    }
    return row;
}

void check_rows(ReproduceResult& res) {
    for (const auto& row : res.rows)
        if (!row.ok()) res.failures.push_back(fmt::format("{}: |difference| {:.3g} exceeds {:.0e}", row.label, row.diff, row.tolerance));
}

ReproduceResult sec51(const std::string& id, double tau, const std::vector<Published>& pub) {
    ReproduceResult res;
    res.case_id = id;
    res.params = SpectralParams({1.0, 0.5, 0.25}, tau, 2.125);
    res.roots = real_roots(res.params);
    const CharRoot lead = leading_root(res.params);
    res.roots.push_back(lead);
    for (const auto& p : pub) res.rows.push_back(match(p, res.roots));
    check_rows(res);
    if (real_roots(res.params).size() != 2) res.failures.push_back("expected exactly two real roots");
    return res;
}

ReproduceResult sec52(const std::string& id, int n, double a, const std::vector<Published>& pub, int expected_strip) {
    ReproduceResult res;
    res.case_id = id;
    res.params = SpectralParams(halving_rates(n), 1.0, a);
    res.roots = strip_roots(res.params);
    for (const auto& p : pub) res.rows.push_back(match(p, res.roots));
    check_rows(res);
    const int count = count_strip_roots(res.params);
    ReproduceRow strip{"strip_count", Complex(expected_strip, 0.0), Complex(count, 0.0), std::abs(double(count - expected_strip)), 0.0};
    res.rows.push_back(strip);
    if (count != expected_strip) res.failures.push_back(fmt::format("strip count {} differs from {}", count, expected_strip));
    return res;
}

}  // namespace

VectorXd halving_rates(int n) {
    VectorXd l(n);
    for (int k = 0; k < n; ++k) l[k] = std::ldexp(1.0, -k);
    return l;
}

std::vector<std::string> reproduce_cases() {
    return {"sec51_tau05", "sec51_tau025", "sec51_tau01", "sec51_tau0", "sec52_n5", "sec52_n9"};
}

double locate_tau0(const VectorXd& lambdas, double a, double lo, double hi, double tol) {
    auto has_real = [&](double tau) {
        const auto a0 = compute_a0(SpectralParams(lambdas, tau, a));
        return a0 && a <= *a0;
    };
    if (!has_real(lo) || has_real(hi)) throw PreconditionError("locate_tau0: bracket must have real roots at lo and none at hi");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (has_real(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ReproduceResult reproduce_paper(const std::string& case_id) {
    if (case_id == "sec51_tau05")
        return sec51(case_id, 0.5, {{"z1", {-14.1259, 0}}, {"z2", {-2.5878, 0}}, {"z3,4", {0.2206, 0.9359}}});
    if (case_id == "sec51_tau025")
        return sec51(case_id, 0.25, {{"z1", {-41.5326, 0}}, {"z2", {-2.1551, 0}}, {"z3,4", {0.1637, 1.0118}}});
    if (case_id == "sec51_tau01")
        return sec51(case_id, 0.1, {{"z1", {-140.7464, 0}}, {"z2", {-1.9947, 0}}, {"z3,4", {0.1167, 1.0558}}});
    if (case_id == "sec51_tau0") {
        ReproduceResult res;
        res.case_id = case_id;
        const VectorXd l = (VectorXd(3) << 1.0, 0.5, 0.25).finished();
        const double tau0 = locate_tau0(l, 2.125, 0.5, 1.0);
        res.params = SpectralParams(l, tau0, 2.125);
        res.rows.push_back({"tau0", {0.741005, 0}, {tau0, 0}, std::abs(tau0 - 0.741005), kReproduceTau0Tol});
        check_rows(res);
        return res;
    }
    if (case_id == "sec52_n5") return sec52(case_id, 5, 200.0, {{"z1,2", {1.5456, 0.9058}}, {"z3,4", {0.2221, 2.6734}}}, 2);
    if (case_id == "sec52_n9")
        return sec52(case_id, 9, 1e4, {{"z1,2", {1.9499, 0.6159}}, {"z3,4", {1.3703, 1.7812}}, {"z5,6", {0.1272, 2.7047}}}, 3);
    throw PreconditionError("unknown reproduce case '" + case_id + "'");
}

CsvTable reproduce_table(const ReproduceResult& r) {
    CsvTable t{{"label", "reference_re", "reference_im", "computed_re", "computed_im", "abs_diff", "ok"}, {}};
    for (const auto& row : r.rows)
        t.rows.push_back({row.label, format_double(row.reference.real()), format_double(row.reference.imag()), format_double(row.computed.real()),
                          format_double(row.computed.imag()), format_double(row.diff), row.ok() ? "1" : "0"});
    return t;
}

Json to_json(const ReproduceResult& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"label", row.label},
                        {"reference", {row.reference.real(), row.reference.imag()}},
                        {"computed", {row.computed.real(), row.computed.imag()}},
                        {"abs_diff", row.diff},
                        {"tolerance", row.tolerance},
                        {"ok", row.ok()}});
    return Json{{"case", r.case_id},
                {"params", to_json(r.params)},
                {"rows", rows},
                {"roots", to_json(r.roots)},
                {"failures", r.failures},
                {"verdict", r.pass() ? "PASS" : "FAIL"}};
}

}  // namespace cdde
