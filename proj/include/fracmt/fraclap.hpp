#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "fracmt/grid.hpp"

namespace fracmt {

struct FracOrder {
  double s;
  explicit FracOrder(double s_value);
};

// Far-field model for u beyond the truncation radius in pointwise evaluation.
enum class FarField {
  zero,        // u = 0 beyond R (compactly supported functions)
  constant,    // u = u(+-R) beyond R
  log_linear,  // u = c0 + c1 log|y|, fitted to the last two nodes at each end
  power        // u = c |y|^{-beta}, fitted to the last two nodes at each end
};

// Calibrated kernel constant C_s: C_s * PV int (u(x)-u(y))|x-y|^{-1-2s} dy has
// Fourier symbol |xi|^{2s}. Computed once per s (least squares over cos(kx),
// k = 1, 2, 3, on a fine grid) and cached.
double kernel_normalization(FracOrder order);
// Literature closed form s 4^s Gamma(1/2+s) / (sqrt(pi) Gamma(1-s)); cross-check only.
double kernel_normalization_closed_form(FracOrder order);

// Cell integrals on [d, d+1] (d >= 1) for the linear interpolant and its
// quadratic correction: a_d = int (d+1-t) t^{-1-2s}, b_d = int (t-d) t^{-1-2s},
// e_d = int (t-d)(d+1-t) t^{-1-2s}.
struct CellCoefficients {
  std::vector<double> a, b, e;  // index d (entry 0 unused)
};
// Returns coefficients for d = 1..dmax (cached per s, grows as needed).
std::shared_ptr<const CellCoefficients> cell_coefficients(FracOrder order, std::size_t dmax);

// Unnormalized Toeplitz stencil W_0..W_kmax of the discrete PV operator on a
// uniform grid with spacing h, for grid functions on the whole line:
// (L u)_i = sum_j W_|i-j| u_j.
std::vector<double> stencil_weights(FracOrder order, double h, std::size_t kmax);

// C_s * PV integral at grid node x for the piecewise-linear interpolant of u
// (with a second-order correction in every cell), far field per `tail`.
double frac_lap_pointwise(const GridFunction& u, FracOrder order, double x,
                          FarField tail = FarField::constant);

struct DirichletOperator {
  GridPtr grid;
  FracOrder order{0.5};
  Eigen::MatrixXd matrix;         // indexed by interior nodes of I, includes C_s
  double normalization = 0.0;     // C_s
  std::vector<double> stencil;    // unnormalized W_0..W_{N-1} for the whole grid
  std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>> cholesky;

  std::size_t n() const { return static_cast<std::size_t>(matrix.rows()); }
  // Interior values of a grid function.
  Eigen::VectorXd restrict_interior(const GridFunction& u) const;
  // Grid function equal to v on interior nodes and 0 elsewhere.
  GridFunction extend_by_zero(const Eigen::VectorXd& v) const;
  // ||u||_H^2 = h u^T A u for u supported in the closed interval.
  double energy(const Eigen::VectorXd& v) const;
  // Solves A x = b with the cached factorization.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  // Interior values of C_s * L applied to exterior data g (interior values of g
  // ignored) including the analytic far-field tail of g: the right-hand side
  // coupling needed for a harmonic extension, so that A v + exterior_coupling(g) = 0.
  Eigen::VectorXd exterior_coupling(const std::vector<double>& g_values, FarField tail) const;
};

DirichletOperator assemble_dirichlet_operator(GridPtr grid, FracOrder order);

GridFunction solve_dirichlet(const DirichletOperator& op, const GridFunction& f);

struct EigenPair {
  double eigenvalue;
  GridFunction eigenfunction;
};

std::vector<EigenPair> eigen_smallest(const DirichletOperator& op, std::size_t k);

// [u]^2_{W^{s,2}} = int int (u(x)-u(y))^2 / |x-y|^{1+2s} for the piecewise-linear
// interpolant of u, extended by zero beyond the grid.
double gagliardo_seminorm(const GridFunction& u, FracOrder order);
// Same, for a piecewise-linear function on arbitrary sorted nodes (zero outside).
double gagliardo_seminorm_nodes(const std::vector<double>& x, const std::vector<double>& v,
                                FracOrder order);
// Unnormalized Toeplitz form T_0..T_kmax with [u]^2 = sum_ij T_|i-j| u_i u_j on a
// uniform grid of spacing h.
std::vector<double> gagliardo_toeplitz(FracOrder order, double h, std::size_t kmax);

// sup over interior nodes of |u| / (||f||_inf dist(x, dI)^s).
double boundary_decay_ratio(const GridFunction& u, const GridFunction& f, FracOrder order);

}  // namespace fracmt
