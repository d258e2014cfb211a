#include "fracmt/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracmt::io {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json grid_to_json(const Grid& grid) {
  return json{{"interval", {grid.interval().a, grid.interval().b}},
              {"n_per_unit", grid.n_per_unit()},
              {"h", grid.h()},
              {"truncation_radius", grid.truncation_radius()},
              {"nodes", grid.size()},
              {"interior_nodes", grid.n_interior()}};
}

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_operator(const DirichletOperator& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) put_le(out, op.matrix(i, j));
  json side{{"format", "row-major float64 little-endian"},
            {"rows", op.matrix.rows()},
            {"cols", op.matrix.cols()},
            {"order_s", op.order.s},
            {"normalization", op.normalization},
            {"grid", grid_to_json(*op.grid)},
            {"rows_index", "interior nodes of the interval, increasing x"}};
  write_json(path + ".json", side);
}

Eigen::MatrixXd read_operator_matrix(const std::string& path) {
  std::ifstream side_in(path + ".json");
  if (!side_in) throw std::runtime_error("missing sidecar " + path + ".json");
  const json side = json::parse(side_in);
  const auto rows = side.at("rows").get<Eigen::Index>(), cols = side.at("cols").get<Eigen::Index>();
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (static_cast<Eigen::Index>(buf.size()) != rows * cols * 8) throw std::runtime_error("operator file size mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get_le(buf.data() + 8 * (i * cols + j));
  return m;
}

std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) s += ',';
      s += cells[k];
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv_string(header, rows);
}

json grid_function_to_json(const GridFunction& u) {
  return json{{"grid", grid_to_json(*u.grid)}, {"values", u.values}, {"overflow", u.overflow}};
}

json solution_to_json(const NehariSolution& sol) {
  json hist = json::array();
  for (const auto& [it, t] : sol.t_history) hist.push_back({it, t});
  return json{{"grid", grid_to_json(*sol.u0.grid)},
              {"values", sol.u0.values},
              {"lambda", sol.lambda},
              {"energy", sol.energy},
              {"residual", sol.residual},
              {"equation_residual", sol.equation_residual},
              {"manifold_defect", sol.manifold_defect},
              {"t_final", sol.t_final},
              {"symmetry_error", sol.symmetry_error},
              {"monotonicity_violation", sol.monotonicity_violation},
              {"iterations", sol.iterations},
              {"newton_steps", sol.newton_steps},
              {"converged", sol.converged},
              {"t_history", hist}};
}

std::string git_describe() {
#ifdef FRACMT_SOURCE_DIR
  const std::string cmd = "git -C \"" FRACMT_SOURCE_DIR "\" describe --always --dirty 2>/dev/null";
#else
  const std::string cmd = "git describe --always --dirty 2>/dev/null";
#endif
  std::string out;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    std::array<char, 256> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
    pclose(p);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

}  // namespace fracmt::io
