#pragma once

#include "heatmann/spectral.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace heatmann::io {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double x);

/// One-line JSON array of the N coefficients.
std::string to_json_line(const CoefVec& v);
/// CSV with header `mode,coefficient`, modes 1-based.
std::string to_csv(const CoefVec& v);

std::vector<double> parse_json_coefficients(std::string_view text);
std::vector<double> parse_csv_coefficients(std::string_view text);

CoefVec from_json(const GridPtr& grid, std::string_view text);
CoefVec from_csv(const GridPtr& grid, std::string_view text);

/// Reads a coefficient file; format chosen by extension (.json or .csv).
std::vector<double> read_coefficients(const std::filesystem::path& path);
/// Writes `<stem>.json` and `<stem>.csv` next to each other.
void write_coefvec(const std::filesystem::path& stem, const CoefVec& v);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace heatmann::io
