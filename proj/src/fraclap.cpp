#include "fracmt/fraclap.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fraclap_internal.hpp"
#include "fracmt/parallel.hpp"
#include "fracmt/quadrature.hpp"

namespace fracmt {

FracOrder::FracOrder(double s_value) : s(s_value) {
  if (!std::isfinite(s_value) || !(s_value > 0.0) || !(s_value < 1.0))
    throw std::invalid_argument("FracOrder: s must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Cell coefficients

namespace {

struct CoefficientCache {
  std::mutex mutex;
  std::map<double, std::shared_ptr<const CellCoefficients>> by_s;
};

CoefficientCache& coefficient_cache() {
  static CoefficientCache cache;
  return cache;
}

void fill_coefficients(CellCoefficients& c, double s, std::size_t from, std::size_t to) {
  const auto& g = quad::gauss16();
  const double nu = 1.0 + 2.0 * s;
  for (std::size_t d = from; d <= to; ++d) {
    double a = 0.0, b = 0.0, e = 0.0;
    for (std::size_t k = 0; k < 16; ++k) {
      const double th = g.x[k];
      const double ker = std::pow(static_cast<double>(d) + th, -nu);
      a += g.w[k] * (1.0 - th) * ker;
      b += g.w[k] * th * ker;
      e += g.w[k] * th * (1.0 - th) * ker;
    }
    c.a[d] = a;
    c.b[d] = b;
    c.e[d] = e;
  }
}

}  // namespace

std::shared_ptr<const CellCoefficients> cell_coefficients(FracOrder order, std::size_t dmax) {
  auto& cache = coefficient_cache();
  std::lock_guard<std::mutex> lock(cache.mutex);
  auto it = cache.by_s.find(order.s);
  if (it != cache.by_s.end() && it->second->a.size() > dmax) return it->second;
  // Grow geometrically to amortize repeated requests.
  std::size_t target = std::max<std::size_t>(dmax, 1024);
  auto fresh = std::make_shared<CellCoefficients>();
  std::size_t have = 0;
  if (it != cache.by_s.end()) {
    *fresh = *it->second;
    have = it->second->a.size() - 1;
    target = std::max(target, 2 * have);
  }
  fresh->a.resize(target + 1, 0.0);
  fresh->b.resize(target + 1, 0.0);
  fresh->e.resize(target + 1, 0.0);
  fill_coefficients(*fresh, order.s, have + 1, target);
  cache.by_s[order.s] = fresh;
  return fresh;
}

// ---------------------------------------------------------------------------
// Pointwise PV core

namespace detail {

double pv_core(const std::vector<double>& ext, std::size_t N, std::size_t i, double h, double s,
               const CellCoefficients& c) {
  auto u = [&](long j) { return ext[static_cast<std::size_t>(j + 2)]; };
  const long I = static_cast<long>(i);
  const long n = static_cast<long>(N);
  const double hs = std::pow(h, -2.0 * s);
  const double ui = u(I);
  auto dd = [&](long j) { return u(j + 1) - 2.0 * u(j) + u(j - 1); };
  // Near zone |t| < h: quadratic local model.
  double result = -dd(I) * hs / (2.0 - 2.0 * s);
  // Whole-line integral of u_i against the kernel outside the near zone.
  result += ui * hs / s;
  double cells = 0.0;
  // Right cells [x_{i+d}, x_{i+d+1}], d >= 1, while inside the grid.
  for (long d = 1; I + d + 1 <= n - 1; ++d) {
    const long j = I + d;
    cells += hs * (c.a[d] * u(j) + c.b[d] * u(j + 1)) - 0.25 * hs * c.e[d] * (dd(j) + dd(j + 1));
  }
  for (long d = 1; I - d - 1 >= 0; ++d) {
    const long j = I - d;
    cells += hs * (c.a[d] * u(j) + c.b[d] * u(j - 1)) - 0.25 * hs * c.e[d] * (dd(j) + dd(j - 1));
  }
  return result - cells;
}

double TailModel::operator()(double abs_y) const {
  switch (kind) {
    case FarField::zero: return 0.0;
    case FarField::constant: return c0;
    case FarField::log_linear: return c0 + c1 * std::log(abs_y);
    case FarField::power: return c0 * std::pow(abs_y, -c1);
  }
  return 0.0;
}

TailModel fit_tail(FarField kind, double x_inner, double u_inner, double x_outer, double u_outer) {
  TailModel m;
  m.kind = kind;
  const double ai = std::abs(x_inner), ao = std::abs(x_outer);
  switch (kind) {
    case FarField::zero: break;
    case FarField::constant: m.c0 = u_outer; break;
    case FarField::log_linear:
      m.c1 = (u_outer - u_inner) / (std::log(ao) - std::log(ai));
      m.c0 = u_outer - m.c1 * std::log(ao);
      break;
    case FarField::power:
      if (u_outer == 0.0 || u_inner == 0.0 || (u_outer > 0) != (u_inner > 0)) {
        m.kind = FarField::zero;  // nothing to extrapolate
        break;
      }
      m.c1 = -std::log(u_outer / u_inner) / std::log(ao / ai);
      m.c0 = u_outer * std::pow(ao, m.c1);
      break;
  }
  return m;
}

double tail_integral(const TailModel& phi, double X, double x, double s) {
  const double gap = X - x;
  const double base = std::pow(gap, -2.0 * s) / (2.0 * s);
  switch (phi.kind) {
    case FarField::zero: return 0.0;
    case FarField::constant: return phi.c0 * base;
    case FarField::log_linear: {
      const double li = quad::exp_sinh(
          [&](double t) { return std::log(X + t) * std::pow(gap + t, -1.0 - 2.0 * s); }, 0.0, 1e-13);
      return phi.c0 * base + phi.c1 * li;
    }
    case FarField::power: {
      const double pi = quad::exp_sinh(
          [&](double t) { return std::pow(X + t, -phi.c1) * std::pow(gap + t, -1.0 - 2.0 * s); }, 0.0,
          1e-13);
      return phi.c0 * pi;
    }
  }
  return 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Unnormalized L[cos(k .)](0) on a grid of spacing h = 16 pi / M, nodes
// -M..M, with exact ghost values and the oscillatory tail integrated by an
// asymptotic integration-by-parts series.
double calibration_sample(double s, int k) {
  const long M = 64000;
  const double X = 16.0 * std::numbers::pi;
  const double h = X / static_cast<double>(M);
  const std::size_t N = static_cast<std::size_t>(2 * M + 1);
  auto coeff = cell_coefficients(FracOrder(s), N + 2);
  std::vector<double> ext(N + 4);
  for (long j = -2; j <= static_cast<long>(N) + 1; ++j)
    ext[static_cast<std::size_t>(j + 2)] = std::cos(k * (static_cast<double>(j - M) * h));
  double core = detail::pv_core(ext, N, static_cast<std::size_t>(M), h, s, *coeff);
  // int_X^inf cos(k y) y^{-nu} dy = Re I_nu, I_nu = -e^{ikX} X^{-nu}/(ik) + nu/(ik) I_{nu+1}.
  const std::complex<double> ik(0.0, static_cast<double>(k));
  const std::complex<double> phase = std::exp(ik * X);
  std::complex<double> total = 0.0, factor = 1.0;
  double nu = 1.0 + 2.0 * s;
  for (int term = 0; term < 8; ++term) {
    total += factor * (-phase * std::pow(X, -nu) / ik);
    factor *= nu / ik;
    nu += 1.0;
  }
  return core - 2.0 * total.real();
}

double calibrate(double s) {
  double num = 0.0, den = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double L = calibration_sample(s, k);
    const double target = std::pow(static_cast<double>(k), 2.0 * s);
    num += L * target;
    den += L * L;
  }
  return num / den;
}

}  // namespace

double kernel_normalization(FracOrder order) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order.s);
    if (it != cache.end()) return it->second;
  }
  const double c = calibrate(order.s);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(order.s, c);
  return c;
}

double kernel_normalization_closed_form(FracOrder order) {
  const double s = order.s;
  return s * std::pow(4.0, s) * boost::math::tgamma(0.5 + s) /
         (std::sqrt(std::numbers::pi) * boost::math::tgamma(1.0 - s));
}

// ---------------------------------------------------------------------------
// Stencil

std::vector<double> stencil_weights(FracOrder order, double h, std::size_t kmax) {
  const double s = order.s;
  auto cp = cell_coefficients(order, kmax + 3);
  const auto& c = *cp;
  const double hs = std::pow(h, -2.0 * s);
  auto kappa = [&](std::size_t d) { return d >= 1 ? 0.25 * hs * c.e[d] : 0.0; };
  std::vector<double> W(kmax + 1, 0.0);
  const double near = hs / (2.0 - 2.0 * s);
  W[0] = 2.0 * near + hs / s + 2.0 * kappa(1);
  for (std::size_t k = 1; k <= kmax; ++k) {
    double w = 0.0;
    if (k == 1) w -= near;
    w -= hs * c.a[k];
    if (k >= 2) w -= hs * c.b[k - 1];
    w += kappa(k + 1) - kappa(k);
    if (k >= 2) w -= kappa(k - 1);
    if (k >= 3) w += kappa(k - 2);
    W[k] = w;
  }
  return W;
}

// ---------------------------------------------------------------------------
// Pointwise operator

double frac_lap_pointwise(const GridFunction& u, FracOrder order, double x, FarField tail) {
  const Grid& g = *u.grid;
  const std::size_t i = g.index_of(x);
  for (double v : u.values)
    if (!std::isfinite(v)) throw std::invalid_argument("frac_lap_pointwise: non-finite input");
  const std::size_t N = g.size();
  if (N < 4) throw std::invalid_argument("frac_lap_pointwise: grid too small");
  const double s = order.s;
  const double h = g.h();
  const auto left = detail::fit_tail(tail, g.x(1), u.values[1], g.x(0), u.values[0]);
  const auto right = detail::fit_tail(tail, g.x(N - 2), u.values[N - 2], g.x(N - 1), u.values[N - 1]);
  std::vector<double> ext(N + 4);
  for (std::size_t j = 0; j < N; ++j) ext[j + 2] = u.values[j];
  ext[1] = left(std::abs(g.x(0) - h));
  ext[0] = left(std::abs(g.x(0) - 2 * h));
  ext[N + 2] = right(std::abs(g.x(N - 1) + h));
  ext[N + 3] = right(std::abs(g.x(N - 1) + 2 * h));
  auto coeff = cell_coefficients(order, N + 2);
  double L = detail::pv_core(ext, N, i, h, s, *coeff);
  const double X = g.x(N - 1);
  L -= detail::tail_integral(right, X, x, s);
  L -= detail::tail_integral(left, -g.x(0), -x, s);
  return kernel_normalization(order) * L;
}

// ---------------------------------------------------------------------------
// Dirichlet operator

Eigen::VectorXd DirichletOperator::restrict_interior(const GridFunction& u) const {
  if (u.grid->size() != grid->size()) throw std::invalid_argument("restrict_interior: grid mismatch");
  Eigen::VectorXd v(n());
  for (std::size_t k = 0; k < n(); ++k) v[static_cast<Eigen::Index>(k)] = u.values[grid->interior_node(k)];
  return v;
}

GridFunction DirichletOperator::extend_by_zero(const Eigen::VectorXd& v) const {
  GridFunction u(grid);
  for (std::size_t k = 0; k < n(); ++k) u.values[grid->interior_node(k)] = v[static_cast<Eigen::Index>(k)];
  return u;
}

double DirichletOperator::energy(const Eigen::VectorXd& v) const { return grid->h() * v.dot(matrix * v); }

Eigen::VectorXd DirichletOperator::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = cholesky->solve(b);
  // One step of iterative refinement keeps the residual at roundoff level.
  x += cholesky->solve(b - matrix * x);
  return x;
}

Eigen::VectorXd DirichletOperator::exterior_coupling(const std::vector<double>& g_values, FarField tail) const {
  const Grid& g = *grid;
  const std::size_t N = g.size();
  if (g_values.size() != N) throw std::invalid_argument("exterior_coupling: size mismatch");
  const auto left = detail::fit_tail(tail, g.x(1), g_values[1], g.x(0), g_values[0]);
  const auto right = detail::fit_tail(tail, g.x(N - 2), g_values[N - 2], g.x(N - 1), g_values[N - 1]);
  const double s = order.s;
  Eigen::VectorXd out(n());
  parallel_for(n(), [&](std::size_t k) {
    const std::size_t i = g.interior_node(k);
    double acc = 0.0;
    for (std::size_t j = 0; j <= g.index_a(); ++j) acc += stencil[i - j] * g_values[j];
    for (std::size_t j = g.index_b(); j < N; ++j) acc += stencil[j - i] * g_values[j];
    acc -= detail::tail_integral(right, g.x(N - 1), g.x(i), s);
    acc -= detail::tail_integral(left, -g.x(0), -g.x(i), s);
    out[static_cast<Eigen::Index>(k)] = normalization * acc;
  });
  return out;
}

DirichletOperator assemble_dirichlet_operator(GridPtr grid, FracOrder order) {
  if (!grid) throw std::invalid_argument("assemble_dirichlet_operator: null grid");
  DirichletOperator op;
  op.grid = grid;
  op.order = order;
  op.normalization = kernel_normalization(order);
  op.stencil = stencil_weights(order, grid->h(), grid->size());
  const std::size_t n = grid->n_interior();
  if (n == 0) throw std::invalid_argument("assemble_dirichlet_operator: no interior nodes");
  op.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      op.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          op.normalization * op.stencil[r > c ? r - c : c - r];
  auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(op.matrix);
  if (llt->info() != Eigen::Success)
    throw std::runtime_error("assemble_dirichlet_operator: matrix not positive definite");
  op.cholesky = llt;
  return op;
}

GridFunction solve_dirichlet(const DirichletOperator& op, const GridFunction& f) {
  const Eigen::VectorXd b = op.restrict_interior(f);
  if (!b.allFinite()) throw std::invalid_argument("solve_dirichlet: non-finite right-hand side");
  const Eigen::VectorXd x = op.solve(b);
  const double res = (op.matrix * x - b).norm();
  if (!x.allFinite() || res > 1e-10 * std::max(1.0, b.norm()))
    throw std::runtime_error("solve_dirichlet: linear solve failed");
  return op.extend_by_zero(x);
}

std::vector<EigenPair> eigen_smallest(const DirichletOperator& op, std::size_t k) {
  if (k == 0 || k > op.n()) throw std::invalid_argument("eigen_smallest: k out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen_smallest: eigensolver failed");
  const double h = op.grid->h();
  std::vector<EigenPair> out;
  for (std::size_t j = 0; j < k; ++j) {
    Eigen::VectorXd v = es.eigenvectors().col(static_cast<Eigen::Index>(j));
    v /= std::sqrt(h * v.squaredNorm());
    if (v.sum() < 0) v = -v;
    out.push_back({es.eigenvalues()[static_cast<Eigen::Index>(j)], op.extend_by_zero(v)});
  }
  return out;
}

double boundary_decay_ratio(const GridFunction& u, const GridFunction& f, FracOrder order) {
  const Grid& g = *u.grid;
  double fmax = 0.0;
  for (std::size_t i = g.index_a() + 1; i < g.index_b(); ++i) fmax = std::max(fmax, std::abs(f.values[i]));
  if (fmax == 0.0) throw std::invalid_argument("boundary_decay_ratio: f vanishes identically");
  double worst = 0.0;
  const auto& I = g.interval();
  for (std::size_t i = g.index_a() + 1; i < g.index_b(); ++i) {
    const double d = std::min(g.x(i) - I.a, I.b - g.x(i));
    worst = std::max(worst, std::abs(u.values[i]) / (fmax * std::pow(d, order.s)));
  }
  return worst;
}

}  // namespace fracmt
