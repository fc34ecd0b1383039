#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inlslab/diagnostics.hpp"

namespace inls {

using json = nlohmann::json;

// Shortest text that reads back to the same double; "nan"/"inf" for non-finite.
std::string format_double(double x);
double parse_double(const std::string& s);

// Parses JSON, rejecting duplicate keys. Errors are ParseError with
// "source:line:column".
json parse_json_strict(const std::string& text, const std::string& source);
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

void write_series_csv(const std::filesystem::path& path, const std::vector<ObservableRecord>& s);
std::vector<ObservableRecord> read_series_csv(const std::filesystem::path& path);

// Columns r, re, im.
void write_field_csv(const std::filesystem::path& path, const RadialField& u);
// Rebuilds the cell-centred grid from the r column.
RadialField read_field_csv(const std::filesystem::path& path, int N);

// Generic x,y table.
void write_xy_csv(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& xname = "x", const std::string& yname = "y");

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace inls
