#include "cdde/export.hpp"

#include <fmt/format.h>
#include <fstream>

namespace cdde {

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

CsvTable roots_table(const std::vector<CharRoot>& roots) {
    CsvTable t{{"re", "im", "multiplicity", "residual"}, {}};
    for (const auto& r : roots)
        t.rows.push_back({format_double(r.re), format_double(r.im), std::to_string(r.multiplicity), format_double(r.residual)});
    return t;
}

CsvTable trajectory_table(const Trajectory& traj, int stride) {
    if (stride < 1) throw PreconditionError("trajectory_table: stride must be positive");
    CsvTable t;
    t.header.emplace_back("t");
    for (Eigen::Index k = 0; k < traj.n(); ++k) t.header.push_back("x" + std::to_string(k + 1));
    for (Eigen::Index i = 0; i < traj.size(); i += stride) {
        std::vector<std::string> row{format_double(traj.time(i))};
        for (Eigen::Index k = 0; k < traj.n(); ++k) row.push_back(format_double(traj.values(k, i)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable crossings_table(const CrossingList& crossings) {
    CsvTable t{{"component", "index", "t"}, {}};
    for (std::size_t k = 0; k < crossings.times.size(); ++k)
        for (std::size_t i = 0; i < crossings.times[k].size(); ++i)
            t.rows.push_back({std::to_string(k + 1), std::to_string(i + 1), format_double(crossings.times[k][i])});
    return t;
}

CsvTable bifurcation_table(const std::vector<BifurcationPoint>& points) {
    CsvTable t{{"k", "omega", "a"}, {}};
    for (const auto& b : points) t.rows.push_back({std::to_string(b.k), format_double(b.omega), format_double(b.a)});
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_text(path, table.str()); }

Json to_json(const CharRoot& r) {
    return Json{{"re", r.re}, {"im", r.im}, {"multiplicity", r.multiplicity}, {"residual", r.residual}};
}

Json to_json(const std::vector<CharRoot>& roots) {
    Json arr = Json::array();
    for (const auto& r : roots) arr.push_back(to_json(r));
    return arr;
}

Json to_json(const BifurcationPoint& b) { return Json{{"k", b.k}, {"omega", b.omega}, {"a", b.a}}; }

Json to_json(const OscillationReport& r) {
    Json j{{"class", to_string(r.cls)},
           {"reason", r.reason},
           {"window_start", r.window_start},
           {"window_end", r.window_end},
           {"active_end", r.active_end},
           {"start_norm", r.start_norm},
           {"end_norm", r.end_norm}};
    Json counts = Json::array();
    for (const auto& c : r.crossings.times) counts.push_back(c.size());
    j["crossing_counts"] = counts;
    j["decay_rate"] = r.decay_rate ? Json(*r.decay_rate) : Json(nullptr);
    j["slow"] = r.slow ? Json(*r.slow) : Json(nullptr);
    return j;
}

Json to_json(const IntervalEnclosure& iv) {
    return Json{{"lo", iv.lo}, {"hi", iv.hi}, {"certified", iv.certified}, {"tolerance", iv.tolerance}};
}

Json to_json(const SpectralParams& p) {
    Json l = Json::array();
    for (Eigen::Index i = 0; i < p.lambdas.size(); ++i) l.push_back(p.lambdas[i]);
    return Json{{"lambdas", l}, {"tau", p.tau}, {"a", p.a}};
}

}  // namespace cdde
