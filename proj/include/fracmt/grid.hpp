#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracmt {

struct Interval {
  double a = -1.0;
  double b = 1.0;
  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
};

// Uniform node set x_j = (j - M) h, j = 0..2M, covering [-R, R], with the
// interval endpoints a, b lying on nodes.
class Grid {
 public:
  Grid(Interval interval, int n_per_unit, double truncation_radius);

  double h() const { return h_; }
  int n_per_unit() const { return n_per_unit_; }
  double truncation_radius() const { return R_; }
  const Interval& interval() const { return interval_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double x(std::size_t i) const { return nodes_[i]; }
  double x_min() const { return nodes_.front(); }
  double x_max() const { return nodes_.back(); }

  // Node indices of the interval endpoints.
  std::size_t index_a() const { return ia_; }
  std::size_t index_b() const { return ib_; }
  // Interior nodes of I are index_a()+1 .. index_b()-1.
  std::size_t n_interior() const { return ib_ - ia_ - 1; }
  std::size_t interior_node(std::size_t k) const { return ia_ + 1 + k; }
  bool is_interior(std::size_t i) const { return i > ia_ && i < ib_; }

  // Index of the node at x; throws std::invalid_argument when x is off-grid.
  std::size_t index_of(double x) const;
  bool on_grid(double x) const;

 private:
  Interval interval_;
  int n_per_unit_;
  double R_;
  double h_;
  std::vector<double> nodes_;
  std::size_t ia_ = 0, ib_ = 0;
  long offset_ = 0;  // M
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(Interval interval, int n_per_unit, double truncation_radius);

struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
  bool overflow = false;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v, bool overflow_flag = false);
  explicit GridFunction(GridPtr g);  // zero function

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  // Throws std::runtime_error if a value is non-finite and no overflow flag is set.
  void check_finite() const;
};

class NonFiniteSampleError : public std::runtime_error {
 public:
  NonFiniteSampleError(std::size_t index, double node);
  std::size_t index() const { return index_; }
  double node() const { return node_; }

 private:
  std::size_t index_;
  double node_;
};

GridFunction sample(const std::function<double(double)>& f, GridPtr grid);

struct Region {
  bool all = true;
  double a = 0.0;
  double b = 0.0;
  static Region whole() { return Region{}; }
  static Region of(double a, double b) { return Region{false, a, b}; }
  static Region of(const Interval& i) { return Region{false, i.a, i.b}; }
};

// Integral of the piecewise-linear interpolant over the region (composite
// trapezoid; partial cells integrated exactly).
double integrate(const GridFunction& u, Region region = Region::whole());
double integrate_values(const Grid& grid, const std::vector<double>& values, Region region);

// Piecewise-linear interpolation; zero outside the grid span.
double interpolate_linear(const GridFunction& u, double x);
// Four-point Lagrange (cubic) interpolation; falls back to linear at the grid ends.
double interpolate_cubic(const GridFunction& u, double x);

}  // namespace fracmt
