#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cdde/char_spectrum.hpp"
#include "cdde/integrator.hpp"
#include "cdde/oscillation.hpp"
#include "cdde/scalar_map.hpp"
#include "json.hpp"

namespace cdde {

using Json = nlohmann::ordered_json;

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double x);

/// Header line plus rows, comma separated, LF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string str() const;
};

CsvTable roots_table(const std::vector<CharRoot>& roots);                 ///< re, im, multiplicity, residual
CsvTable trajectory_table(const Trajectory& traj, int stride = 1);        ///< t, x1..xn
CsvTable crossings_table(const CrossingList& crossings);                  ///< component, index, t
CsvTable bifurcation_table(const std::vector<BifurcationPoint>& points);  ///< k, omega, a

void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

Json to_json(const CharRoot& r);
Json to_json(const std::vector<CharRoot>& roots);
Json to_json(const BifurcationPoint& b);
Json to_json(const OscillationReport& r);
Json to_json(const IntervalEnclosure& iv);
Json to_json(const SpectralParams& p);

}  // namespace cdde
