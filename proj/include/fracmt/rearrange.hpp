#pragma once

#include "fracmt/fraclap.hpp"
#include "fracmt/grid.hpp"

namespace fracmt {

// Grid-level symmetric decreasing rearrangement: values sorted descending (ties
// by node index) and placed at 0, +h, -h, +2h, -2h, ... . Exactly equimeasurable;
// even up to one sorted-neighbour gap. Requires u >= 0 and a grid symmetric
// about 0.
GridFunction symmetric_rearrangement(const GridFunction& u);

struct PolyaSzegoResult {
  double lhs;  // [ |u|^* ]^2_{W^{sigma,2}}
  double rhs;  // [ u ]^2_{W^{sigma,2}}
  bool ok;
};

// Compares Gagliardo seminorms of order `order` (the W^{sigma,2} order, i.e.
// the statement's ||(-Delta)^{sigma/2} .||_{L^2} up to the constant C_sigma/2).
// ok = lhs <= rhs (1 + rel_tol).
PolyaSzegoResult polya_szego_check(const GridFunction& u, FracOrder order, double rel_tol = 1e-8);

// max over nodes x != 0 of u(x)^2 2|x| / ||u||^2_{L^2}; requires u to be in
// rearranged form (non-increasing along 0, +h, -h, +2h, ...).
double radial_bound_check(const GridFunction& u);

}  // namespace fracmt
