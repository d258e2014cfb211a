#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracmt/fraclap.hpp"
#include "fracmt/green.hpp"
#include "fracmt/validate.hpp"

using namespace fracmt;

namespace {
// Pre-logged oracles (independent computations, see the decisions ledger).
constexpr double kGammaHalf = 1.0;                  // (-Delta)^{1/2} (1-x^2)_+^{1/2}
constexpr double kLambda1Half = 1.15777388370;      // lambda_1((-1,1)), s = 1/2

double barrier(double x) { return std::abs(x) < 1.0 ? std::sqrt(1.0 - x * x) : 0.0; }
}  // namespace

TEST_CASE("FracOrder validation") {
  CHECK_NOTHROW(FracOrder(0.3));
  CHECK_THROWS(FracOrder(0.0));
  CHECK_THROWS(FracOrder(1.0));
  CHECK_THROWS(FracOrder(NAN));
}

TEST_CASE("calibrated C_s agrees with the literature closed form") {
  for (double s : {0.1, 0.25, 0.5, 0.75}) {
    const FracOrder o(s);
    CHECK(kernel_normalization(o) == doctest::Approx(kernel_normalization_closed_form(o)).epsilon(1e-7));
  }
  CHECK(kernel_normalization(FracOrder(0.5)) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("symbol calibration on cos(kx)") {
  const auto g = make_grid({-1, 1}, 64, 200);
  for (double s : {0.25, 0.5, 0.75})
    for (int k : {1, 2}) {
      const auto u = sample([&](double x) { return std::cos(k * x) * std::exp(-std::pow(x / 150.0, 8)); }, g);
      CHECK(frac_lap_pointwise(u, FracOrder(s), 0.0, FarField::zero) == doctest::Approx(std::pow(k, 2 * s)).epsilon(5e-3));
    }
}

TEST_CASE("eta_infinity solves (-Delta)^{1/2} eta = e^eta") {
  const auto g = make_grid({-1, 1}, 100, 50);
  const auto eta = sample([](double x) { return std::log(2.0 / (1.0 + x * x)); }, g);
  for (double x : {0.0, 1.0, -1.0, 3.0, -3.0})
    CHECK(std::abs(frac_lap_pointwise(eta, FracOrder(0.5), x, FarField::log_linear) - 2.0 / (1.0 + x * x)) <= 1e-3);
}

TEST_CASE("barrier (1-x^2)^{1/2} has constant fractional Laplacian gamma_{1/2}") {
  const auto g = make_grid({-1, 1}, 100, 2);
  const auto w = sample(barrier, g);
  std::vector<double> vals;
  for (double x : {0.0, 0.25, -0.25, 0.5, -0.5}) vals.push_back(frac_lap_pointwise(w, FracOrder(0.5), x, FarField::zero));
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  CHECK((*hi - *lo) / *lo <= 0.01);
  for (double v : vals) CHECK(v == doctest::Approx(kGammaHalf).epsilon(5e-3));
}

TEST_CASE("F_s is s-harmonic away from the origin") {
  const FracOrder o(0.25);
  const double Cs = kernel_normalization(o);
  for (int npu : {100, 400}) {
    const auto g = make_grid({-1, 1}, npu, 50);
    const double h = g->h();
    // Regularized at the origin node only (value F(h)); the removed mass
    // dm = int_{-h}^{h} F - 2h F(h) acts like -dm delta_0, so far away
    // (-Delta)^s u(x) = C_s dm |x|^{-1-2s} + O(h^2 dm |x|^{-3-2s}).
    const auto F = sample([&](double x) { return fundamental_solution(o, std::max(std::abs(x), h)); }, g);
    const double dm = 2.0 * fundamental_solution(o, 1.0) * std::pow(h, 2 * o.s) / (2 * o.s) - 2.0 * h * fundamental_solution(o, h);
    for (double x : {4.0, 6.0}) {
      const double val = frac_lap_pointwise(F, o, x, FarField::power);
      const double predicted = Cs * dm * std::pow(x, -1.0 - 2.0 * o.s);
      CHECK(std::abs(val - predicted) <= 0.1 * predicted);
      CHECK(std::abs(val) <= 2e-3);
    }
  }
}

TEST_CASE("Dirichlet operator: symmetry, positivity, self-adjointness, consistency") {
  std::mt19937_64 rng(11);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto g = make_grid({-1, 1}, 40, 2);
    const FracOrder o(s);
    const auto op = assemble_dirichlet_operator(g, o);
    CHECK((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(eigen_smallest(op, 1)[0].eigenvalue > 0.0);
    for (int k = 0; k < 5; ++k) {
      const auto u = random_smooth_bumps(rng, g, -1, 1, true);
      const auto v = random_smooth_bumps(rng, g, -1, 1, true);
      const Eigen::VectorXd a = op.restrict_interior(u), b = op.restrict_interior(v);
      CHECK(std::abs((op.matrix * a).dot(b) - a.dot(op.matrix * b)) <= 1e-10 * a.norm() * b.norm());
      // Pointwise evaluation and matrix rows agree on functions supported in the closed interval.
      const Eigen::VectorXd Au = op.matrix * a;
      for (std::size_t i = 0; i < op.n(); i += 7) {
        const double pw = frac_lap_pointwise(u, o, g->x(g->interior_node(i)), FarField::zero);
        CHECK(std::abs(pw - Au[i]) <= 1e-8 * (1.0 + std::abs(Au[i])));
      }
    }
  }
}

TEST_CASE("A applied to the barrier: interior convergence, boundary scaling law") {
  // Near the boundary w ~ sqrt(2 d); a translation-invariant stencil of order 1 maps
  // that to h^{-1/2} E(k) at the k-th node from the boundary, with E(k) independent of h.
  auto errs = [](int npu) {
    const auto g = make_grid({-1, 1}, npu, 2);
    const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
    const Eigen::VectorXd Aw = op.matrix * op.restrict_interior(sample(barrier, g));
    double inner = 0;
    for (std::size_t i = 0; i < op.n(); ++i)
      if (std::abs(g->x(g->interior_node(i))) <= 0.5) inner = std::max(inner, std::abs(Aw[i] - kGammaHalf));
    return std::pair{inner, (Aw[op.n() - 1] - kGammaHalf) * std::sqrt(g->h())};
  };
  const auto [i1, b1] = errs(50);
  const auto [i2, b2] = errs(100);
  const auto [i3, b3] = errs(200);
  CHECK(i1 / i2 > 2.5);
  CHECK(i2 / i3 > 2.5);
  CHECK(i3 < 2e-4);
  CHECK(b2 == doctest::Approx(b1).epsilon(0.01));
  CHECK(b3 == doctest::Approx(b2).epsilon(0.01));
}

TEST_CASE("solve_dirichlet: barrier, maximum principle, eigen self-consistency") {
  auto barrier_err = [](int npu) {
    const auto g = make_grid({-1, 1}, npu, 2);
    const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
    GridFunction f(g);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (g->is_interior(i)) f.values[i] = kGammaHalf;
    const auto u = solve_dirichlet(op, f);
    double e = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      e = std::max(e, std::abs(u[i] - barrier(g->x(i))));
      if (!g->is_interior(i)) CHECK(u[i] == 0.0);
    }
    return e;
  };
  const double e1 = barrier_err(50), e2 = barrier_err(100);
  CHECK(e2 < e1);
  CHECK(e2 < 0.02);

  std::mt19937_64 rng(5);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto g = make_grid({-1, 1}, 50, 2);
    const auto op = assemble_dirichlet_operator(g, FracOrder(s));
    for (int k = 0; k < 10; ++k) {
      const auto u = solve_dirichlet(op, random_nonnegative(rng, g));
      CHECK(*std::min_element(u.values.begin(), u.values.end()) >= -10.0 * std::pow(g->h(), s));
    }
  }

  const auto g = make_grid({-1, 1}, 50, 2);
  const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
  const auto ep = eigen_smallest(op, 1)[0];
  GridFunction f = ep.eigenfunction;
  for (double& v : f.values) v *= ep.eigenvalue;
  const auto u = solve_dirichlet(op, f);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(ep.eigenfunction[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("barrier comparison |u| <= (M/gamma)(1-x^2)^s") {
  std::mt19937_64 rng(9);
  const auto g = make_grid({-1, 1}, 100, 2);
  const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
  for (int k = 0; k < 10; ++k) {
    auto f = random_nonnegative(rng, g);
    double M = 0;
    for (double v : f.values) M = std::max(M, std::abs(v));
    const auto u = solve_dirichlet(op, f);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i]) <= M / kGammaHalf * barrier(g->x(i)) + 2e-3 * M);
  }
}

TEST_CASE("eigenpairs: normalization, sign, Poincare, lambda_1 oracle") {
  const auto g = make_grid({-1, 1}, 50, 2);
  const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
  const auto eig = eigen_smallest(op, 3);
  CHECK(eig[0].eigenvalue < eig[1].eigenvalue);
  CHECK(eig[1].eigenvalue < eig[2].eigenvalue);
  for (const auto& e : eig) {
    std::vector<double> sq(e.eigenfunction.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = e.eigenfunction[i] * e.eigenfunction[i];
    CHECK(integrate_values(*g, sq, Region::whole()) == doctest::Approx(1.0).epsilon(1e-10));
  }
  const Eigen::VectorXd p = op.restrict_interior(eig[0].eigenfunction);
  CHECK(g->h() * p.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.minCoeff() > 0.0);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd u = op.restrict_interior(random_smooth_bumps(rng, g, -1, 1, true));
    CHECK(g->h() * u.squaredNorm() <= op.energy(u) / eig[0].eigenvalue + 1e-12);
  }
  // Richardson extrapolation (empirical order from three resolutions) against the oracle.
  std::vector<double> lam;
  for (int npu : {50, 100, 200})
    lam.push_back(eigen_smallest(assemble_dirichlet_operator(make_grid({-1, 1}, npu, 2), FracOrder(0.5)), 1)[0].eigenvalue);
  const double q = (lam[0] - lam[1]) / (lam[1] - lam[2]);
  const double r1 = lam[1] + (lam[1] - lam[0]) / (q - 1), r2 = lam[2] + (lam[2] - lam[1]) / (q - 1);
  CHECK(std::abs(r1 - r2) <= 1e-3);
  CHECK(std::abs(r2 - kLambda1Half) <= 1e-3);
}

TEST_CASE("boundary_decay_ratio") {
  auto ratio_for = [](int npu, bool random) {
    const auto g = make_grid({-1, 1}, npu, 2);
    const auto op = assemble_dirichlet_operator(g, FracOrder(0.5));
    GridFunction f(g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (g->is_interior(i)) f.values[i] = random ? std::sin(7 * g->x(i)) : kGammaHalf;
    return boundary_decay_ratio(solve_dirichlet(op, f), f, FracOrder(0.5));
  };
  CHECK(ratio_for(100, false) <= std::sqrt(2.0) / kGammaHalf + 1e-2);
  const double r1 = ratio_for(50, true), r2 = ratio_for(100, true);
  CHECK(std::isfinite(r1));
  CHECK(std::abs(r1 - r2) / r2 < 0.1);
  const auto g = make_grid({-1, 1}, 20, 2);
  CHECK_THROWS(boundary_decay_ratio(GridFunction(g), GridFunction(g), FracOrder(0.5)));
}
