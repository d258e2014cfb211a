#include "fracmt/green.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracmt/parallel.hpp"
#include "fracmt/quadrature.hpp"

namespace fracmt {

namespace {

void require_green_order(FracOrder order) {
  if (!(order.s < 0.5)) throw std::invalid_argument("green: s must lie in (0, 1/2)");
}

double fundamental_constant(double s) {
  return 1.0 / (2.0 * std::cos(s * std::numbers::pi) * boost::math::tgamma(2.0 * s));
}

// Exterior coupling rows for all poles at once: out(i, p) = C_s [ sum over
// exterior nodes of W_|i-j| F(x_p - y_j) - tails ] for interior rows i and poles p.
Eigen::MatrixXd exterior_coupling_matrix(const DirichletOperator& op) {
  const Grid& g = *op.grid;
  const double s = op.order.s;
  const std::size_t n = op.n(), N = g.size();
  const double cF = fundamental_constant(s);
  const double beta = 1.0 - 2.0 * s, nu = 1.0 + 2.0 * s;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double XR = g.x_max(), XL = -g.x_min();
  parallel_for(n, [&](std::size_t p) {
    const double xp = g.x(g.interior_node(p));
    std::vector<double> Fvals(N, 0.0);
    for (std::size_t j = 0; j <= g.index_a(); ++j) Fvals[j] = cF * std::pow(std::abs(xp - g.x(j)), -beta);
    for (std::size_t j = g.index_b(); j < N; ++j) Fvals[j] = cF * std::pow(std::abs(xp - g.x(j)), -beta);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = g.interior_node(k);
      double acc = 0.0;
      for (std::size_t j = 0; j <= g.index_a(); ++j) acc += op.stencil[i - j] * Fvals[j];
      for (std::size_t j = g.index_b(); j < N; ++j) acc += op.stencil[j - i] * Fvals[j];
      const double xi = g.x(i);
      acc -= cF * power_tail_integral(beta, nu, XR, xp, xi);
      acc -= cF * power_tail_integral(beta, nu, XL, -xp, -xi);
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p)) = op.normalization * acc;
    }
  });
  return out;
}

// Degree <= 5 Hermite blend of F(t) across |t| < h (even, so it reduces to a
// quartic a + b t^2 + c t^4 matching value, slope and curvature at |t| = h).
double blended_F(double s, double t, double h) {
  const double cF = fundamental_constant(s);
  const double beta = 1.0 - 2.0 * s;
  const double at = std::abs(t);
  if (at >= h) return cF * std::pow(at, -beta);
  const double f0 = cF * std::pow(h, -beta);
  const double f1 = -beta * f0 / h;
  const double f2 = beta * (beta + 1.0) * f0 / (h * h);
  // In u = t^2: F = a + b u + c u^2; dF/dt = 2 t (b + 2 c u); d2F/dt2 = 2b + 12 c u.
  const double u = h * h;
  // Solve: 2h(b + 2cu) = f1, 2b + 12cu = f2.
  const double c = (f2 - f1 / h) / (8.0 * u);
  const double b = f1 / (2.0 * h) - 2.0 * c * u;
  const double a = f0 - b * u - c * u * u;
  const double v = t * t;
  return a + b * v + c * v * v;
}

}  // namespace

double fundamental_solution(FracOrder order, double x) {
  require_green_order(order);
  if (x == 0.0 || !std::isfinite(x)) throw std::invalid_argument("fundamental_solution: pole at x = 0");
  return fundamental_constant(order.s) * std::pow(std::abs(x), 2.0 * order.s - 1.0);
}

double power_tail_integral(double beta, double nu, double X, double p, double q) {
  // (y-p)^{-beta} (y-q)^{-nu} = y^{-beta-nu} sum_a (beta)_a/a! (p/y)^a sum_b (nu)_b/b! (q/y)^b
  const double rp = p / X, rq = q / X;
  if (std::abs(rp) >= 1.0 || std::abs(rq) >= 1.0) throw std::invalid_argument("power_tail_integral: point beyond X");
  const int nmax = 400;
  std::vector<double> A(nmax + 1), B(nmax + 1);
  A[0] = B[0] = 1.0;
  for (int k = 1; k <= nmax; ++k) {
    A[k] = A[k - 1] * (beta + k - 1) / k * rp;
    B[k] = B[k - 1] * (nu + k - 1) / k * rq;
  }
  const double e = beta + nu - 1.0;  // int_X^inf y^{-beta-nu-n} = X^{-e-n}/(e+n)
  double sum = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    double c = 0.0;
    for (int a = 0; a <= n; ++a) c += A[a] * B[n - a];
    const double term = c / (e + n);
    sum += term;
    if (n > 8 && std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::pow(X, -e) * sum;
}

GridFunction harmonic_correction(GridPtr grid, FracOrder order, double x) {
  require_green_order(order);
  const Grid& g = *grid;
  const std::size_t ix = g.index_of(x);
  if (!g.is_interior(ix)) throw std::invalid_argument("harmonic_correction: x must be an interior node");
  const DirichletOperator op = assemble_dirichlet_operator(grid, order);
  const double s = order.s, h = g.h();
  const std::size_t N = g.size();
  // g_x: F(x - y) outside I, smooth blend inside I.
  std::vector<double> gx(N);
  for (std::size_t j = 0; j < N; ++j) gx[j] = blended_F(s, x - g.x(j), h);
  // (-Delta)^s g_x on interior nodes = A g_I + exterior coupling of g_x.
  Eigen::VectorXd gI(static_cast<Eigen::Index>(op.n()));
  for (std::size_t k = 0; k < op.n(); ++k) gI[static_cast<Eigen::Index>(k)] = gx[g.interior_node(k)];
  std::vector<double> ext = gx;
  for (std::size_t k = 0; k < op.n(); ++k) ext[g.interior_node(k)] = 0.0;
  Eigen::VectorXd lap = op.matrix * gI + op.exterior_coupling(ext, FarField::zero);
  // Far tail of F(x - .) beyond the grid, exactly.
  const double cF = fundamental_constant(s), beta = 1.0 - 2.0 * s, nu = 1.0 + 2.0 * s;
  for (std::size_t k = 0; k < op.n(); ++k) {
    const double xi = g.x(g.interior_node(k));
    lap[static_cast<Eigen::Index>(k)] -= op.normalization * cF *
        (power_tail_integral(beta, nu, g.x_max(), x, xi) + power_tail_integral(beta, nu, -g.x_min(), -x, -xi));
  }
  const Eigen::VectorXd corr = op.solve(-lap);
  GridFunction H(grid, gx);
  for (std::size_t k = 0; k < op.n(); ++k) H.values[g.interior_node(k)] += corr[static_cast<Eigen::Index>(k)];
  return H;
}

double GreenTable::g(std::size_t row, std::size_t j) const {
  if (j < grid->index_a() || j > grid->index_b()) return 0.0;
  return G(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j - grid->index_a()));
}

double GreenTable::h(std::size_t row, std::size_t j) const {
  if (j < grid->index_a() || j > grid->index_b())
    return fundamental_solution(order, grid->x(grid->interior_node(row)) - grid->x(j));
  return H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j - grid->index_a()));
}

bool GreenTable::is_diagonal(std::size_t row, std::size_t j) const { return grid->interior_node(row) == j; }

GreenTable green_table(GridPtr grid, FracOrder order) {
  require_green_order(order);
  const Grid& g = *grid;
  const DirichletOperator op = assemble_dirichlet_operator(grid, order);
  const std::size_t n = op.n();
  // Column p of Hint = interior values of H(x_p, .); A symmetric so solve all poles at once.
  const Eigen::MatrixXd coupling = exterior_coupling_matrix(op);
  Eigen::MatrixXd Hint = op.cholesky->solve(-coupling);
  Hint += op.cholesky->solve(-coupling - op.matrix * Hint);
  GreenTable t;
  t.grid = grid;
  t.order = order;
  const Eigen::Index rows = static_cast<Eigen::Index>(n), cols = static_cast<Eigen::Index>(n + 2);
  t.G.resize(rows, cols);
  t.H.resize(rows, cols);
  for (std::size_t p = 0; p < n; ++p) {
    const double xp = g.x(g.interior_node(p));
    const Eigen::Index r = static_cast<Eigen::Index>(p);
    t.H(r, 0) = fundamental_solution(order, xp - g.interval().a);
    t.H(r, cols - 1) = fundamental_solution(order, xp - g.interval().b);
    t.G(r, 0) = 0.0;
    t.G(r, cols - 1) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double hv = Hint(static_cast<Eigen::Index>(k), r);
      t.H(r, static_cast<Eigen::Index>(k + 1)) = hv;
      t.G(r, static_cast<Eigen::Index>(k + 1)) =
          (k == p) ? -hv : fundamental_solution(order, xp - g.x(g.interior_node(k))) - hv;
    }
  }
  return t;
}

GridFunction reproduce(const GreenTable& table, const GridFunction& f) {
  const Grid& g = *table.grid;
  if (f.grid->size() != g.size()) throw std::invalid_argument("reproduce: grid mismatch");
  for (std::size_t j = 0; j < g.size(); ++j)
    if ((j < g.index_a() || j > g.index_b()) && f.values[j] != 0.0)
      throw std::invalid_argument("reproduce: f must be supported in the closed interval");
  const double s = table.order.s, h = g.h();
  // Singular cell: the punctured lattice sum h sum_{k != 0} F(kh) misses the
  // pole's contribution c_F h^{2s} (-2 zeta(1-2s)) (zeta-regularized correction).
  const double pole_weight = -2.0 * fundamental_constant(s) * std::pow(h, 2.0 * s) * boost::math::zeta(1.0 - 2.0 * s);
  const std::size_t n = table.rows();
  GridFunction out(table.grid);
  // G vanishes at the endpoints, so only interior nodes carry weight.
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double fk = f.values[g.interior_node(k)];
      if (k == r)
        acc += fk * (pole_weight - h * table.H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k + 1)));
      else
        acc += h * table.G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k + 1)) * fk;
    }
    out.values[g.interior_node(r)] = acc;
  }
  return out;
}

}  // namespace fracmt
