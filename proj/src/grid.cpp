#include "fracmt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracmt {

namespace {

bool near_integer(double v, long* out) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) return false;
  *out = static_cast<long>(r);
  return true;
}

}  // namespace

Grid::Grid(Interval interval, int n_per_unit, double truncation_radius)
    : interval_(interval), n_per_unit_(n_per_unit), R_(truncation_radius) {
  if (!std::isfinite(interval.a) || !std::isfinite(interval.b) || !std::isfinite(truncation_radius))
    throw std::invalid_argument("make_grid: non-finite input");
  if (!(interval.b > interval.a)) throw std::invalid_argument("make_grid: empty or zero-length interval");
  if (n_per_unit <= 0) throw std::invalid_argument("make_grid: n_per_unit must be positive");
  const double emax = std::max(std::abs(interval.a), std::abs(interval.b));
  if (truncation_radius < 2.0 * emax)
    throw std::invalid_argument("make_grid: truncation radius must be >= 2*max|endpoint|");
  h_ = 1.0 / n_per_unit;
  long ka = 0, kb = 0;
  if (!near_integer(interval.a * n_per_unit, &ka) || !near_integer(interval.b * n_per_unit, &kb))
    throw std::invalid_argument("make_grid: interval endpoints must be multiples of the spacing");
  offset_ = static_cast<long>(std::ceil(truncation_radius * n_per_unit - 1e-9));
  const long n = 2 * offset_ + 1;
  nodes_.resize(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) nodes_[static_cast<std::size_t>(j)] = static_cast<double>(j - offset_) * h_;
  ia_ = static_cast<std::size_t>(ka + offset_);
  ib_ = static_cast<std::size_t>(kb + offset_);
  // Snap the endpoints exactly.
  nodes_[ia_] = interval.a;
  nodes_[ib_] = interval.b;
}

bool Grid::on_grid(double x) const {
  long k = 0;
  if (!std::isfinite(x) || !near_integer(x * n_per_unit_, &k)) return false;
  return k >= -offset_ && k <= offset_;
}

std::size_t Grid::index_of(double x) const {
  long k = 0;
  if (!std::isfinite(x) || !near_integer(x * n_per_unit_, &k) || k < -offset_ || k > offset_) {
    std::ostringstream os;
    os << "point " << x << " is not a grid node";
    throw std::invalid_argument(os.str());
  }
  return static_cast<std::size_t>(k + offset_);
}

GridPtr make_grid(Interval interval, int n_per_unit, double truncation_radius) {
  return std::make_shared<const Grid>(interval, n_per_unit, truncation_radius);
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v, bool overflow_flag)
    : grid(std::move(g)), values(std::move(v)), overflow(overflow_flag) {
  if (!grid) throw std::invalid_argument("GridFunction: null grid");
  if (values.size() != grid->size()) throw std::invalid_argument("GridFunction: size mismatch");
}

GridFunction::GridFunction(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("GridFunction: null grid");
  values.assign(grid->size(), 0.0);
}

void GridFunction::check_finite() const {
  if (overflow) return;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw NonFiniteSampleError(i, grid->x(i));
}

NonFiniteSampleError::NonFiniteSampleError(std::size_t index, double node)
    : std::runtime_error("non-finite value at node " + std::to_string(node)), index_(index), node_(node) {}

GridFunction sample(const std::function<double(double)>& f, GridPtr grid) {
  GridFunction out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double v = f(grid->x(i));
    if (!std::isfinite(v)) throw NonFiniteSampleError(i, grid->x(i));
    out.values[i] = v;
  }
  return out;
}

double integrate_values(const Grid& grid, const std::vector<double>& v, Region region) {
  const double h = grid.h();
  double lo = grid.x_min(), hi = grid.x_max();
  if (!region.all) {
    if (!(region.b >= region.a)) throw std::invalid_argument("integrate: reversed region");
    if (region.a < lo - 1e-12 || region.b > hi + 1e-12)
      throw std::invalid_argument("integrate: region outside grid span");
    lo = std::max(lo, region.a);
    hi = std::min(hi, region.b);
  }
  if (hi <= lo) return 0.0;
  const double x0 = grid.x_min();
  const std::size_t n = grid.size();
  auto cell_of = [&](double x) {
    long c = static_cast<long>(std::floor((x - x0) / h));
    return static_cast<std::size_t>(std::clamp<long>(c, 0, static_cast<long>(n) - 2));
  };
  // Exact integral of the linear interpolant over [p, q] inside cell c.
  auto partial = [&](std::size_t c, double p, double q) {
    const double xl = grid.x(c);
    const double t0 = (p - xl) / h, t1 = (q - xl) / h;
    const double va = v[c], vb = v[c + 1];
    const double vp = va + (vb - va) * t0, vq = va + (vb - va) * t1;
    return 0.5 * (vp + vq) * (q - p);
  };
  const std::size_t c0 = cell_of(lo), c1 = cell_of(hi);
  if (c0 == c1) return partial(c0, lo, hi);
  double sum = partial(c0, lo, grid.x(c0 + 1));
  // Full cells c0+1 .. c1-1 (trapezoid), summed in node form.
  if (c1 > c0 + 1) {
    double inner = 0.5 * (v[c0 + 1] + v[c1]);
    for (std::size_t i = c0 + 2; i < c1; ++i) inner += v[i];
    sum += h * inner;
  }
  sum += partial(c1, grid.x(c1), hi);
  return sum;
}

double integrate(const GridFunction& u, Region region) {
  return integrate_values(*u.grid, u.values, region);
}

double interpolate_linear(const GridFunction& u, double x) {
  const Grid& g = *u.grid;
  if (x < g.x_min() || x > g.x_max()) return 0.0;
  const double t = (x - g.x_min()) / g.h();
  std::size_t c = static_cast<std::size_t>(std::floor(t));
  if (c >= g.size() - 1) c = g.size() - 2;
  const double f = t - static_cast<double>(c);
  return u.values[c] + f * (u.values[c + 1] - u.values[c]);
}

double interpolate_cubic(const GridFunction& u, double x) {
  const Grid& g = *u.grid;
  if (x < g.x_min() || x > g.x_max()) return 0.0;
  const double t = (x - g.x_min()) / g.h();
  long c = static_cast<long>(std::floor(t));
  const long n = static_cast<long>(g.size());
  if (c < 1 || c + 2 > n - 1) return interpolate_linear(u, x);
  const double f = t - static_cast<double>(c);
  const double y0 = u.values[c - 1], y1 = u.values[c], y2 = u.values[c + 1], y3 = u.values[c + 2];
  // Lagrange basis on nodes -1, 0, 1, 2.
  const double l0 = -f * (f - 1) * (f - 2) / 6.0;
  const double l1 = (f + 1) * (f - 1) * (f - 2) / 2.0;
  const double l2 = -(f + 1) * f * (f - 2) / 2.0;
  const double l3 = (f + 1) * f * (f - 1) / 6.0;
  return l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3;
}

}  // namespace fracmt
