#include "fracmt/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracmt {

namespace {

// Center index and placement order 0, +1, -1, +2, -2, ... (as grid indices).
std::vector<std::size_t> placement_order(const Grid& g) {
  const std::size_t n = g.size();
  if (n % 2 == 0) throw std::invalid_argument("rearrangement: grid must have an odd node count");
  const std::size_t c = n / 2;
  if (std::abs(g.x(c)) > 1e-12) throw std::invalid_argument("rearrangement: grid must be centered at 0");
  std::vector<std::size_t> order;
  order.reserve(n);
  order.push_back(c);
  for (std::size_t k = 1; k <= c; ++k) {
    order.push_back(c + k);
    order.push_back(c - k);
  }
  return order;
}

}  // namespace

GridFunction symmetric_rearrangement(const GridFunction& u) {
  const Grid& g = *u.grid;
  for (double v : u.values)
    if (!(v >= 0.0)) throw std::invalid_argument("symmetric_rearrangement: input must be nonnegative");
  std::vector<std::size_t> idx(u.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return u.values[a] > u.values[b]; });
  const auto place = placement_order(g);
  GridFunction out(u.grid);
  for (std::size_t k = 0; k < idx.size(); ++k) out.values[place[k]] = u.values[idx[k]];
  return out;
}

PolyaSzegoResult polya_szego_check(const GridFunction& u, FracOrder order, double rel_tol) {
  GridFunction a(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) a.values[i] = std::abs(u.values[i]);
  const GridFunction star = symmetric_rearrangement(a);
  PolyaSzegoResult r;
  r.lhs = gagliardo_seminorm(star, order);
  r.rhs = gagliardo_seminorm(u, order);
  r.ok = r.lhs <= r.rhs * (1.0 + rel_tol);
  return r;
}

double radial_bound_check(const GridFunction& u) {
  const Grid& g = *u.grid;
  const auto place = placement_order(g);
  double prev = u.values[place[0]];
  for (std::size_t k = 0; k < place.size(); ++k) {
    const double v = u.values[place[k]];
    if (!(v >= 0.0)) throw std::invalid_argument("radial_bound_check: negative value");
    if (v > prev * (1.0 + 1e-12) + 1e-300)
      throw std::invalid_argument("radial_bound_check: input is not even and non-increasing");
    prev = v;
  }
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u.values[i] * u.values[i];
  const double l2 = integrate_values(g, sq, Region::whole());
  if (l2 == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g.x(i);
    if (x == 0.0) continue;
    worst = std::max(worst, sq[i] * 2.0 * std::abs(x) / l2);
  }
  return worst;
}

}  // namespace fracmt
