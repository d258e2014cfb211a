#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fracmt/fraclap.hpp"
#include "fracmt/grid.hpp"
#include "fracmt/nehari.hpp"

namespace fracmt::io {

using nlohmann::json;

// Shortest round-trip-safe fixed formatting: 17 significant digits, '.' separator.
std::string format_number(double x);

json grid_to_json(const Grid& grid);

// Dense operator matrix as row-major little-endian float64 at `path`, plus a JSON
// sidecar at path + ".json" (grid metadata, order, normalization, dimensions).
void write_operator(const DirichletOperator& op, const std::string& path);
// Reads the matrix back (row-major, little-endian float64); returns rows x cols.
Eigen::MatrixXd read_operator_matrix(const std::string& path);

// CSV with header row and LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

json solution_to_json(const NehariSolution& sol);
json grid_function_to_json(const GridFunction& u);

// Output of `git describe --always --dirty` for the source tree, or "" if unavailable.
std::string git_describe();

void write_json(const std::string& path, const json& j);

}  // namespace fracmt::io
