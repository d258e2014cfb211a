#pragma once

// Internal helpers shared by the fraclap, green and mtineq translation units.

#include <vector>

#include "fracmt/fraclap.hpp"

namespace fracmt::detail {

// Unnormalized PV sum at node i of a uniform grid with N nodes and spacing h.
// `ext` holds N + 4 values: two ghost nodes on each side (ext[j + 2] = u_j).
// Covers the near zone and all cells between the first and last grid node; the
// far-field tail beyond the grid is not included.
double pv_core(const std::vector<double>& ext, std::size_t N, std::size_t i, double h, double s,
               const CellCoefficients& c);

// Far-field model fitted at one end of the grid: phi(y) for |y| >= X.
struct TailModel {
  FarField kind = FarField::zero;
  double c0 = 0.0, c1 = 0.0;  // constant: c0; log_linear: c0 + c1 log|y|; power: c0 |y|^{-c1}
  double operator()(double abs_y) const;
};
TailModel fit_tail(FarField kind, double x_inner, double u_inner, double x_outer, double u_outer);

// int_X^inf phi(y) (y - x)^{-1-2s} dy for x < X (X > 0, phi given in |y|).
double tail_integral(const TailModel& phi, double X, double x, double s);

}  // namespace fracmt::detail
