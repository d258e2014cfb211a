#pragma once

#include <Eigen/Dense>

#include "fracmt/fraclap.hpp"
#include "fracmt/grid.hpp"

namespace fracmt {

// F_s(x) = 1 / (2 cos(s pi) Gamma(2s) |x|^{1-2s}), valid for s in (0, 1/2).
double fundamental_solution(FracOrder order, double x);

// H_s(x, .) for an interior node x: equals F_s(x - .) outside the open interval
// and is discretely s-harmonic on the interior nodes.
GridFunction harmonic_correction(GridPtr grid, FracOrder order, double x);

struct GreenTable {
  GridPtr grid;
  FracOrder order{0.25};
  // Rows: interior nodes x_i of I. Columns: nodes y_j of the closed interval
  // (grid indices index_a() .. index_b()).
  Eigen::MatrixXd G;
  Eigen::MatrixXd H;

  std::size_t rows() const { return static_cast<std::size_t>(G.rows()); }
  // Value accessors over all grid nodes: G = 0 and H = F outside the closed interval.
  double g(std::size_t row, std::size_t grid_j) const;
  double h(std::size_t row, std::size_t grid_j) const;
  // Diagonal entries (x_i = y_j) hold -H(x_i, x_i): the singular F part is omitted.
  bool is_diagonal(std::size_t row, std::size_t grid_j) const;
};

GreenTable green_table(GridPtr grid, FracOrder order);

// x |-> int_I G(x, y) f(y) dy on the interior nodes (0 elsewhere): trapezoid
// rule off the diagonal, zeta-corrected weight for the singular pole cell.
GridFunction reproduce(const GreenTable& table, const GridFunction& f);

// Exact far-field integral int_X^inf |y - p|^{-beta} (y - q)^{-nu} dy for |p|, |q| < X
// via a convergent binomial series.
double power_tail_integral(double beta, double nu, double X, double p, double q);

}  // namespace fracmt
