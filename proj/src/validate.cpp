#include "fracmt/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracmt/fraclap.hpp"
#include "fracmt/io.hpp"
#include "fracmt/mtineq.hpp"
#include "fracmt/nehari.hpp"
#include "fracmt/rearrange.hpp"

namespace fracmt {

GridFunction random_smooth_bumps(std::mt19937_64& rng, GridPtr grid, double lo, double hi, bool allow_negative) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int count = 1 + static_cast<int>(rng() % 3);
  struct Bump { double c, w, a; };
  std::vector<Bump> bumps;
  for (int k = 0; k < count; ++k) {
    const double w = (0.1 + 0.4 * U(rng)) * (hi - lo) / 2.0;
    const double c = lo + w + (hi - lo - 2.0 * w) * U(rng);
    double a = 0.05 + 0.95 * U(rng);
    if (allow_negative && U(rng) < 0.5) a = -a;
    bumps.push_back({c, w, a});
  }
  return sample(
      [&](double x) {
        double s = 0.0;
        for (const auto& b : bumps) {
          const double t = (x - b.c) / b.w;
          if (std::abs(t) < 1.0) s += b.a * std::pow(1.0 - t * t, 3);
        }
        return s;
      },
      grid);
}

GridFunction random_nonnegative(std::mt19937_64& rng, GridPtr grid) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GridFunction f(grid);
  // Mixture of a few random plateaus and pointwise noise, with random zero patches.
  const int pieces = 1 + static_cast<int>(rng() % 4);
  std::vector<double> cuts{grid->interval().a, grid->interval().b};
  for (int k = 1; k < pieces; ++k) cuts.push_back(grid->interval().a + grid->interval().length() * U(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> level(cuts.size());
  for (double& l : level) l = U(rng) < 0.3 ? 0.0 : U(rng);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!grid->is_interior(i)) continue;
    const double x = grid->x(i);
    std::size_t k = std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin();
    k = std::min(k == 0 ? 0 : k - 1, level.size() - 1);
    f.values[i] = level[k] + 0.2 * U(rng) * U(rng);
  }
  return f;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::text() const {
  std::ostringstream out;
  out << "fracmt validate seed=" << seed << '\n';
  for (const auto& c : checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << io::format_number(c.value) << ' ' << c.relation
        << ' ' << io::format_number(c.bound) << '\n';
  out << (all_passed() ? "ALL PASS" : "FAILURES PRESENT") << " (" << checks.size() << " checks)\n";
  return out.str();
}

namespace {

void add(ValidationReport& r, std::string name, double value, const std::string& rel, double bound) {
  bool ok = false;
  if (rel == "<=") ok = value <= bound;
  else if (rel == ">=") ok = value >= bound;
  r.checks.push_back({std::move(name), value, bound, ok, rel});
}

double l2_inner(const GridFunction& u, const GridFunction& v) {
  std::vector<double> p(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) p[i] = u.values[i] * v.values[i];
  return integrate_values(*u.grid, p, Region::whole());
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed) {
  ValidationReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  add(rep, "alpha_2_minus_pi", std::abs(sharp_constant(Exponent(2.0)) - std::numbers::pi), "<=", 1e-12);

  // Operator invariants for s in {1/4, 1/2, 3/4}.
  const auto grid = make_grid({-1.0, 1.0}, 50, 2.0);
  for (double s : {0.25, 0.5, 0.75}) {
    const FracOrder order(s);
    const auto op = assemble_dirichlet_operator(grid, order);
    const std::string tag = "s=" + io::format_number(s).substr(0, 4);
    add(rep, "operator_symmetry_" + tag, (op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff(), "<=", 1e-12);
    const auto eig = eigen_smallest(op, 1);
    add(rep, "operator_min_eigenvalue_" + tag, eig[0].eigenvalue, ">=", 1e-12);
    double worst_sa = 0.0, worst_mp = 0.0, worst_poinc = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto u = random_smooth_bumps(rng, grid, -1.0, 1.0, true);
      const auto v = random_smooth_bumps(rng, grid, -1.0, 1.0, true);
      const Eigen::VectorXd a = op.restrict_interior(u), b = op.restrict_interior(v);
      const double diff = std::abs((op.matrix * a).dot(b) - a.dot(op.matrix * b));
      worst_sa = std::max(worst_sa, diff / (a.norm() * b.norm() * op.matrix.norm()));
      const auto sol = solve_dirichlet(op, random_nonnegative(rng, grid));
      worst_mp = std::max(worst_mp, -*std::min_element(sol.values.begin(), sol.values.end()) / std::pow(grid->h(), s));
      // Poincare: ||u||_2^2 <= ||u||_H^2 / lambda_1.
      const double l2 = grid->h() * a.squaredNorm();
      worst_poinc = std::max(worst_poinc, l2 - op.energy(a) / eig[0].eigenvalue);
    }
    add(rep, "self_adjoint_relative_" + tag, worst_sa, "<=", 1e-13);
    add(rep, "max_principle_slack_over_h^s_" + tag, worst_mp, "<=", 10.0);
    add(rep, "poincare_excess_" + tag, worst_poinc, "<=", 1e-12);
  }

  // Symbol calibration: cos(k x) at x = 0 (zero far field on a long grid).
  {
    const auto g = make_grid({-1.0, 1.0}, 64, 200.0);
    for (double s : {0.25, 0.5}) {
      double worst = 0.0;
      for (int k : {1, 2}) {
        const auto u = sample([&](double x) { return std::cos(k * x) * std::exp(-std::pow(x / 150.0, 8)); }, g);
        worst = std::max(worst, std::abs(frac_lap_pointwise(u, FracOrder(s), 0.0, FarField::zero) / std::pow(k, 2 * s) - 1.0));
      }
      add(rep, "cos_symbol_relative_error_s=" + io::format_number(s).substr(0, 4), worst, "<=", 5e-3);
    }
  }

  // Rearrangement: equimeasurability, idempotence, Polya-Szego.
  {
    const auto g = make_grid({-1.0, 1.0}, 50, 2.0);
    double worst_ps = -1.0, worst_idem = 0.0, worst_l2 = 0.0;
    for (int k = 0; k < 20; ++k) {
      auto u = random_smooth_bumps(rng, g, -1.0, 1.0, true);
      GridFunction a = u;
      for (double& x : a.values) x = std::abs(x);
      const auto star = symmetric_rearrangement(a);
      const auto star2 = symmetric_rearrangement(star);
      for (std::size_t i = 0; i < star.size(); ++i) worst_idem = std::max(worst_idem, std::abs(star.values[i] - star2.values[i]));
      worst_l2 = std::max(worst_l2, std::abs(l2_inner(star, star) - l2_inner(a, a)));
      const auto ps = polya_szego_check(u, FracOrder(0.5));
      worst_ps = std::max(worst_ps, (ps.lhs - ps.rhs) / ps.rhs);
    }
    add(rep, "rearrangement_idempotence", worst_idem, "<=", 0.0);
    add(rep, "rearrangement_l2_defect", worst_l2, "<=", 1e-12);
    add(rep, "polya_szego_relative_excess", worst_ps, "<=", 1e-8);
  }

  // Moser-Trudinger functional monotonicity.
  {
    const auto g = make_grid({-1.0, 1.0}, 50, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto u = random_smooth_bumps(rng, g, -1.0, 1.0);
      const double a = mt_functional(u, 1.0, Exponent(2.0), Region::of(-1.0, 1.0)).value;
      const double b = mt_functional(u, 2.0, Exponent(2.0), Region::of(-1.0, 1.0)).value;
      worst = std::max(worst, a - b);
    }
    add(rep, "mt_functional_alpha_monotonicity_violation", worst, "<=", 0.0);
  }

  // Nehari: Q > 0, scaling lands on the manifold, minimizer in the energy window.
  {
    const auto g = make_grid({-1.0, 1.0}, 50, 2.0);
    const auto ctx = make_nehari_context(g);
    const double lambda = 0.5 * ctx.lambda1;
    double min_q = 1e300, worst_manifold = 0.0;
    for (int k = 0; k < 10; ++k) {
      auto u = random_smooth_bumps(rng, g, -0.95, 0.95);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!g->is_interior(i)) u.values[i] = 0.0;
      min_q = std::min(min_q, functional_Q(u, lambda).value);
      const double t = nehari_scaling(ctx, u, lambda);
      GridFunction tu = u;
      for (double& x : tu.values) x *= t;
      const double e = ctx.op.energy(ctx.op.restrict_interior(tu));
      worst_manifold = std::max(worst_manifold, std::abs(e - nonlinear_pairing(tu, lambda)) / (1.0 + e));
    }
    add(rep, "Q_min_positive", min_q, ">=", 1e-300);
    add(rep, "nehari_manifold_defect", worst_manifold, "<=", 1e-9);
    const auto sol = minimize_nehari(ctx, lambda, ctx.phi1);
    add(rep, "nehari_energy_lower", sol.energy, ">=", 1e-300);
    add(rep, "nehari_energy_upper_minus_pi", sol.energy - std::numbers::pi, "<=", 0.0);
    add(rep, "nehari_residual", sol.residual, "<=", 1e-6);
    add(rep, "nehari_certificate_above_lambda1_inconsistent",
        nonexistence_certificate(ctx, sol.u0, 1.2 * ctx.lambda1).verdict == "inconsistent" ? 1.0 : 0.0, ">=", 1.0);
  }
  return rep;
}

}  // namespace fracmt
