#include "fracmt/nehari.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracmt {

namespace {

double exp_clamped(double a, bool* overflow = nullptr) {
  if (a > kExpClamp) {
    if (overflow) *overflow = true;
    a = kExpClamp;
  }
  return std::exp(a);
}

void check_supported(const NehariContext& ctx, const GridFunction& u) {
  if (!u.grid || u.grid.get() != ctx.op.grid.get()) {
    if (!u.grid || u.grid->size() != ctx.op.grid->size() || u.grid->h() != ctx.op.grid->h())
      throw std::invalid_argument("nehari: function lives on a different grid");
  }
  const auto& g = *u.grid;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!g.is_interior(i) && u.values[i] != 0.0)
      throw std::invalid_argument("nehari: function must vanish outside the open interval");
  u.check_finite();
}

// h * sum over interior nodes of phi(u_i) (trapezoid; phi(0) = 0 at the endpoints).
template <class F>
double interior_integral(const Eigen::VectorXd& v, double h, F phi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += phi(v[i]);
  return h * s;
}

struct State {
  Eigen::VectorXd v;   // interior values
  Eigen::VectorXd Av;  // A v
  double energy = 0.0; // ||v||_H^2
};

State make_state(const NehariContext& ctx, Eigen::VectorXd v) {
  State st;
  st.v = std::move(v);
  st.Av = ctx.op.matrix * st.v;
  st.energy = ctx.op.grid->h() * st.v.dot(st.Av);
  return st;
}

double J_of(const State& st, double lambda, double h) {
  return 0.5 * st.energy - lambda * interior_integral(st.v, h, [](double x) { return std::expm1(0.5 * x * x); });
}

double scaling_root(const NehariContext& ctx, const Eigen::VectorXd& v, double energy, double lambda) {
  const double h = ctx.op.grid->h();
  if (!(energy > 0.0)) throw std::invalid_argument("nehari_scaling: u must be nonzero");
  if (!(lambda > 0.0)) throw NoScalingRoot("nehari_scaling: lambda <= 0, the nonlinear term cannot balance");
  auto g = [&](double t) {
    return energy - lambda * interior_integral(v, h, [&](double x) { return x * x * exp_clamped(0.5 * t * t * x * x); });
  };
  double lo = 1e-6, hi = 1.0;
  if (!(g(lo) > 0.0))
    throw NoScalingRoot("nehari_scaling: ||u||_H^2 <= lambda ||u||_2^2 (lambda at or above the Rayleigh quotient)");
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NoScalingRoot("nehari_scaling: no sign change below t = 1e6");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  // Newton polish: g'(t) = -lambda int t u^4 e^{t^2 u^2/2}.
  for (int k = 0; k < 3; ++k) {
    const double dg = -lambda * interior_integral(v, h, [&](double x) { return t * x * x * x * x * exp_clamped(0.5 * t * t * x * x); });
    if (!(dg < 0.0)) break;
    const double tn = t - g(t) / dg;
    if (!(tn > lo * (1 - 1e-9) && tn < hi * (1 + 1e-9))) break;
    t = tn;
  }
  return t;
}

// Equation residual F = A v - lambda v e^{v^2/2}.
Eigen::VectorXd equation_residual(const State& st, double lambda) {
  Eigen::VectorXd F = st.Av;
  for (Eigen::Index i = 0; i < F.size(); ++i) F[i] -= lambda * st.v[i] * exp_clamped(0.5 * st.v[i] * st.v[i]);
  return F;
}

}  // namespace

NehariContext make_nehari_context(GridPtr grid) {
  NehariContext ctx;
  ctx.op = assemble_dirichlet_operator(grid, FracOrder(0.5));
  auto eig = eigen_smallest(ctx.op, 1);
  ctx.lambda1 = eig[0].eigenvalue;
  ctx.phi1 = eig[0].eigenfunction;
  return ctx;
}

FunctionalValue functional_J(const NehariContext& ctx, const GridFunction& u, double lambda) {
  check_supported(ctx, u);
  FunctionalValue out;
  const Eigen::VectorXd v = ctx.op.restrict_interior(u);
  const double h = ctx.op.grid->h();
  const double quad = ctx.op.energy(v);
  const double nl = interior_integral(v, h, [&](double x) { return exp_clamped(0.5 * x * x, &out.overflow) - 1.0; });
  out.value = 0.5 * quad - lambda * nl;
  return out;
}

FunctionalValue functional_J(const GridFunction& u, double lambda) {
  return functional_J(make_nehari_context(u.grid), u, lambda);
}

FunctionalValue functional_Q(const GridFunction& u, double lambda) {
  FunctionalValue out;
  std::vector<double> vals(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x2 = u.values[i] * u.values[i];
    // (x2/2 - 1) e^{x2/2} + 1, series near 0 to avoid cancellation (= x2^2/8 + x2^3/24 + ...).
    vals[i] = x2 < 1e-4 ? x2 * x2 / 8.0 + x2 * x2 * x2 / 24.0
                        : (0.5 * x2 - 1.0) * exp_clamped(0.5 * x2, &out.overflow) + 1.0;
  }
  out.value = lambda * integrate_values(*u.grid, vals, Region::whole());
  return out;
}

double nonlinear_pairing(const GridFunction& u, double lambda, double t) {
  std::vector<double> vals(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.values[i];
    vals[i] = x * x * exp_clamped(0.5 * t * t * x * x);
  }
  return lambda * integrate_values(*u.grid, vals, Region::whole());
}

double nehari_scaling(const NehariContext& ctx, const GridFunction& u, double lambda) {
  check_supported(ctx, u);
  const Eigen::VectorXd v = ctx.op.restrict_interior(u);
  return scaling_root(ctx, v, ctx.op.energy(v), lambda);
}

double nehari_scaling(const GridFunction& u, double lambda) {
  return nehari_scaling(make_nehari_context(u.grid), u, lambda);
}

NehariSolution minimize_nehari(const NehariContext& ctx, double lambda, const GridFunction& init,
                               const NehariOptions& opts) {
  if (!(lambda > 0.0) || !(lambda < ctx.lambda1))
    throw std::invalid_argument("minimize_nehari: lambda must lie in (0, lambda_1)");
  check_supported(ctx, init);
  const double h = ctx.op.grid->h();
  NehariSolution sol;
  sol.lambda = lambda;

  Eigen::VectorXd v0 = ctx.op.restrict_interior(init).cwiseAbs();
  if (v0.isZero(0.0)) throw std::invalid_argument("minimize_nehari: init must be nonzero");
  State st = make_state(ctx, v0);
  double t = scaling_root(ctx, st.v, st.energy, lambda);
  sol.t_history.emplace_back(0, t);
  st = make_state(ctx, t * st.v);
  double J = J_of(st, lambda, h);

  auto residual_of = [&](const State& s, Eigen::VectorXd* grad) {
    const Eigen::VectorXd F = equation_residual(s, lambda);
    *grad = ctx.op.solve(F);  // H-gradient
    return std::sqrt(std::max(0.0, h * F.dot(*grad)));
  };

  Eigen::VectorXd grad;
  double res = residual_of(st, &grad);
  int it = 0;
  // Projected descent: step along the H-gradient, take |.|, rescale onto N(J).
  while (it < opts.max_iter && !(opts.newton_polish ? res <= opts.newton_switch : res <= opts.tol)) {
    ++it;
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-12) {
      State trial = make_state(ctx, (st.v - alpha * grad).cwiseAbs());
      if (trial.energy > 0.0) {
        double tt = 0.0;
        try {
          tt = scaling_root(ctx, trial.v, trial.energy, lambda);
        } catch (const NoScalingRoot&) {
          alpha *= opts.armijo_factor;
          continue;
        }
        trial = make_state(ctx, tt * trial.v);
        const double Jt = J_of(trial, lambda, h);
        if (Jt <= J - opts.armijo_c * alpha * res * res) {
          st = std::move(trial);
          J = Jt;
          t = tt;
          accepted = true;
          break;
        }
      }
      alpha *= opts.armijo_factor;
    }
    sol.t_history.emplace_back(it, t);
    res = residual_of(st, &grad);
    if (!accepted) break;
  }
  sol.iterations = it;

  if (opts.newton_polish && res <= opts.newton_switch) {
    // Newton on F(v) = A v - lambda v e^{v^2/2} = 0.
    double fres = equation_residual(st, lambda).cwiseAbs().maxCoeff();
    for (int k = 0; k < 30 && fres > 1e-14 * (1.0 + st.Av.cwiseAbs().maxCoeff()); ++k) {
      Eigen::MatrixXd Jac = ctx.op.matrix;
      for (Eigen::Index i = 0; i < st.v.size(); ++i) {
        const double x2 = st.v[i] * st.v[i];
        Jac(i, i) -= lambda * std::exp(0.5 * x2) * (1.0 + x2);
      }
      const Eigen::VectorXd F = equation_residual(st, lambda);
      const Eigen::VectorXd dv = Jac.partialPivLu().solve(F);
      State trial = make_state(ctx, st.v - dv);
      const double tres = equation_residual(trial, lambda).cwiseAbs().maxCoeff();
      if (!(tres < fres)) break;
      st = std::move(trial);
      fres = tres;
      ++sol.newton_steps;
    }
    J = J_of(st, lambda, h);
    res = residual_of(st, &grad);
    // Continue with descent if Newton did not reach the tolerance.
    while (res > opts.tol && it < opts.max_iter) {
      ++it;
      State trial = make_state(ctx, (st.v - grad).cwiseAbs());
      trial = make_state(ctx, scaling_root(ctx, trial.v, trial.energy, lambda) * trial.v);
      const double Jt = J_of(trial, lambda, h);
      if (Jt > J + 1e-14 * std::abs(J)) break;
      st = std::move(trial);
      J = Jt;
      res = residual_of(st, &grad);
    }
    sol.iterations = it;
  }

  sol.u0 = ctx.op.extend_by_zero(st.v);
  sol.energy = J;
  sol.residual = res;
  sol.equation_residual = equation_residual(st, lambda).cwiseAbs().maxCoeff();
  const double pair = lambda * interior_integral(st.v, h, [](double x) { return x * x * std::exp(0.5 * x * x); });
  sol.manifold_defect = std::abs(st.energy - pair);
  sol.t_final = scaling_root(ctx, st.v, st.energy, lambda);
  sol.t_history.emplace_back(it, sol.t_final);
  const Eigen::Index n = st.v.size();
  for (Eigen::Index i = 0; i < n; ++i) sol.symmetry_error = std::max(sol.symmetry_error, std::abs(st.v[i] - st.v[n - 1 - i]));
  const Eigen::Index c = (n - 1) / 2;
  for (Eigen::Index i = c; i + 1 < n; ++i) sol.monotonicity_violation = std::max(sol.monotonicity_violation, st.v[i + 1] - st.v[i]);
  for (Eigen::Index i = c; i > 0; --i) sol.monotonicity_violation = std::max(sol.monotonicity_violation, st.v[i - 1] - st.v[i]);
  sol.converged = res <= opts.tol && std::abs(sol.t_final - 1.0) <= opts.t_tol && st.v.minCoeff() >= 0.0;
  if (!sol.converged)
    throw NehariNotConverged("minimize_nehari: no convergence (residual " + std::to_string(res) + ", |t-1| " +
                                 std::to_string(std::abs(sol.t_final - 1.0)) + ")",
                             sol);
  return sol;
}

NehariSolution minimize_nehari(double lambda, const GridFunction& init, const NehariOptions& opts) {
  return minimize_nehari(make_nehari_context(init.grid), lambda, init, opts);
}

Certificate nonexistence_certificate(const NehariContext& ctx, const GridFunction& u, double lambda) {
  check_supported(ctx, u);
  for (double x : u.values)
    if (x < 0.0) throw std::invalid_argument("nonexistence_certificate: candidate must be nonnegative");
  const Eigen::VectorXd v = ctx.op.restrict_interior(u);
  if (v.isZero(0.0)) throw std::invalid_argument("nonexistence_certificate: candidate must be nonzero");
  const Eigen::VectorXd p = ctx.op.restrict_interior(ctx.phi1);
  const double h = ctx.op.grid->h();
  Certificate c;
  double up = 0.0, upe = 0.0, u2e = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double e = exp_clamped(0.5 * v[i] * v[i]);
    up += h * v[i] * p[i];
    upe += h * v[i] * p[i] * e;
    u2e += h * v[i] * v[i] * e;
  }
  c.lambda1_pairing = ctx.lambda1 * up;
  c.lambda_pairing = lambda * upe;
  c.identity_gap = (c.lambda_pairing - c.lambda1_pairing) / std::abs(c.lambda1_pairing);
  c.energy_pairing = ctx.op.energy(v);
  c.energy_rhs = lambda * u2e;
  // A positive solution must satisfy both pairings. Testing with u: ||u||_H^2 > 0 forces
  // lambda int u^2 e^{u^2/2} > 0. Testing with phi_1 > 0: lambda_1 int u phi_1 =
  // lambda int u phi_1 e^{u^2/2} > lambda int u phi_1, impossible once lambda >= lambda_1.
  if (!(c.energy_rhs > 0.0)) {
    c.verdict = "inconsistent";
    c.reason = "testing with u: ||u||_H^2 > 0 but lambda int u^2 e^{u^2/2} <= 0";
  } else if (lambda * up >= c.lambda1_pairing && c.lambda_pairing > c.lambda1_pairing) {
    c.verdict = "inconsistent";
    c.reason = "testing with phi_1: lambda int u phi_1 e^{u^2/2} > lambda int u phi_1 >= lambda_1 int u phi_1";
  } else {
    c.verdict = "consistent";
    c.reason = "pairing identities admit a solution for this lambda";
  }
  return c;
}

Certificate nonexistence_certificate(const GridFunction& u, double lambda) {
  return nonexistence_certificate(make_nehari_context(u.grid), u, lambda);
}

double eta_infinity(double x) { return std::log(2.0 / (1.0 + x * x)); }

std::vector<BlowupRecord> blowup_scan(const std::vector<double>& lambdas, GridPtr grid, const NehariOptions& opts) {
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (!(lambdas[k] < lambdas[k - 1])) throw std::invalid_argument("blowup_scan: lambda list must be descending");
  const NehariContext ctx = make_nehari_context(grid);
  for (double l : lambdas)
    if (!(l > 0.0 && l < ctx.lambda1)) throw std::invalid_argument("blowup_scan: every lambda must lie in (0, lambda_1)");
  const auto eta_grid = make_grid({-5.0, 5.0}, 20, 10.0);
  std::vector<BlowupRecord> out;
  GridFunction init = ctx.phi1;
  for (double lambda : lambdas) {
    NehariSolution sol;
    try {
      sol = minimize_nehari(ctx, lambda, init, opts);
    } catch (const NehariNotConverged&) {
      break;
    }
    BlowupRecord rec;
    rec.lambda = lambda;
    rec.energy = sol.energy;
    rec.residual = sol.residual;
    rec.converged = sol.converged;
    rec.m = *std::max_element(sol.u0.values.begin(), sol.u0.values.end());
    const double m = rec.m;
    rec.r_scale = 2.0 / (lambda * m * m * std::exp(0.5 * m * m));
    auto eta_at = [&](double r, double x) {
      const double y = r * x;
      const double uy = std::abs(y) >= 1.0 ? 0.0 : interpolate_cubic(sol.u0, y);
      return m * (uy - m) + std::log(2.0);
    };
    std::vector<double> eta(eta_grid->size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double x = eta_grid->x(i);
      eta[i] = eta_at(rec.r_scale, x);
      if (std::abs(x) <= 5.0) {
        rec.eta_error = std::max(rec.eta_error, std::abs(eta[i] - eta_infinity(x)));
        rec.eta_error_unit_scaling =
            std::max(rec.eta_error_unit_scaling, std::abs(eta_at(0.5 * rec.r_scale, x) - eta_infinity(x)));
      }
    }
    rec.eta = GridFunction(eta_grid, eta);
    out.push_back(std::move(rec));
    init = sol.u0;
  }
  return out;
}

}  // namespace fracmt
