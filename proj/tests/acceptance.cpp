// Acceptance run: one line per criterion 1-13 with PASS/FAIL and the measured
// values. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracmt/fraclap.hpp"
#include "fracmt/green.hpp"
#include "fracmt/mtineq.hpp"
#include "fracmt/nehari.hpp"
#include "fracmt/rearrange.hpp"
#include "fracmt/validate.hpp"

using namespace fracmt;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGammaHalf = 1.0;                // pre-logged oracle gamma_{1/2}
constexpr double kLambda1Oracle = 1.15777388370;  // pre-logged oracle lambda_1((-1,1), 1/2)

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double max_of(const GridFunction& u) { return *std::max_element(u.values.begin(), u.values.end()); }

void criterion1(Outcome& o) {
  const double a = sharp_constant(Exponent(2.0));
  o.detail << "alpha_2 - pi = " << g(a - kPi);
  o.require(std::abs(a - kPi) <= 1e-12, "|alpha_2 - pi| <= 1e-12");
}

void criterion2(Outcome& o) {
  const auto grid = make_grid({-1, 1}, 100, 50);  // h = 0.01, truncation 50
  const auto eta = sample([](double x) { return std::log(2.0 / (1.0 + x * x)); }, grid);
  double worst = 0;
  for (double x : {0.0, 1.0, -1.0, 3.0, -3.0})
    worst = std::max(worst, std::abs(frac_lap_pointwise(eta, FracOrder(0.5), x, FarField::log_linear) - 2 / (1 + x * x)));
  o.detail << "max |(-D)^{1/2} eta_inf - 2/(1+x^2)| = " << g(worst) << " (log-linear far field)";
  o.require(worst <= 1e-3, "error <= 1e-3");
}

void criterion3(Outcome& o) {
  const auto grid = make_grid({-1, 1}, 100, 2);
  const auto w = sample([](double x) { return std::abs(x) < 1 ? std::sqrt(1 - x * x) : 0.0; }, grid);
  std::vector<double> v;
  for (double x : {0.0, 0.25, -0.25, 0.5, -0.5}) v.push_back(frac_lap_pointwise(w, FracOrder(0.5), x, FarField::zero));
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double spread = (*hi - *lo) / *lo;
  double dev = 0;
  for (double x : v) dev = std::max(dev, std::abs(x / kGammaHalf - 1));
  o.detail << "values in [" << g(*lo) << ", " << g(*hi) << "], spread " << g(spread) << ", max rel dev from gamma=1 "
           << g(dev);
  o.require(spread <= 0.01, "relative spread <= 1%");
  o.require(dev <= 0.005, "within 0.5% of gamma_{1/2}");
}

double green_residual(const GreenTable& table, GridPtr grid, FracOrder order) {
  const auto u = sample([](double x) { return std::abs(x) < 1 ? std::sqrt(1 - x * x) : 0.0; }, grid);
  const auto op = assemble_dirichlet_operator(grid, order);
  const auto back = reproduce(table, op.extend_by_zero(op.matrix * op.restrict_interior(u)));
  double r = 0;
  for (std::size_t i = 0; i < u.size(); ++i) r = std::max(r, std::abs(back[i] - u[i]));
  return r;
}

void criterion4(Outcome& o) {
  const FracOrder order(0.25);
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = make_grid({-1, 1}, 200, 2);
  const auto table = green_table(grid, order);
  double min_g = 1e300, max_excess = -1e300;
  for (std::size_t r = 0; r < table.rows(); ++r)
    for (std::size_t j = grid->index_a(); j <= grid->index_b(); ++j) {
      if (table.is_diagonal(r, j)) continue;  // pole of G: stored as -H, not a value of G
      const double v = table.g(r, j);
      min_g = std::min(min_g, v);
      max_excess = std::max(max_excess, v - fundamental_solution(order, grid->x(grid->interior_node(r)) - grid->x(j)));
    }
  const double res1 = green_residual(table, grid, order);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto fine = make_grid({-1, 1}, 400, 2);
  const double res2 = green_residual(green_table(fine, order), fine, order);
  o.detail << table.rows() << " interior nodes: min G = " << g(min_g) << ", max(G - F) = " << g(max_excess)
           << ", residual " << g(res1) << " -> " << g(res2) << " (ratio " << g(res2 / res1) << ") after refinement, "
           << g(secs) << " s";
  o.require(min_g >= -1e-8, "G >= -1e-8");
  o.require(max_excess <= 1e-8, "G <= F + 1e-8");
  o.require(res1 <= 5e-3, "residual <= 5e-3");
  o.require(res2 <= 0.5 * res1, "residual halves under refinement");
  o.require(secs < 60, "runtime < 60 s");
}

void criterion5(Outcome& o) {
  const auto grid = make_grid({-1, 1}, 100, 2);
  std::mt19937_64 rng(5);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto op = assemble_dirichlet_operator(grid, FracOrder(s));
    double worst = -1e300;
    for (int k = 0; k < 100; ++k) {
      const auto u = solve_dirichlet(op, random_nonnegative(rng, grid));
      worst = std::max(worst, -*std::min_element(u.values.begin(), u.values.end()) / std::pow(grid->h(), s));
    }
    o.detail << "s=" << s << ": max(-min u)/h^s = " << g(worst) << "; ";
    o.require(worst <= 10.0, "min u >= -10 h^s at s=" + g(s));
  }
}

void criterion6(Outcome& o) {
  // H^{1/2,2} seminorm, i.e. ||(-Delta)^{1/4} u||^2, via the Gagliardo form of order 1/2.
  const auto grid = make_grid({-1, 1}, 100, 2);
  std::mt19937_64 rng(6);
  double worst = -1e300;
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const auto r = polya_szego_check(random_smooth_bumps(rng, grid, -1.0, 1.0, true), FracOrder(0.5), 1e-8);
    worst = std::max(worst, r.lhs / r.rhs - 1);
    bad += !r.ok;
  }
  o.detail << "max lhs/rhs - 1 = " << g(worst) << ", violations " << bad << "/100";
  o.require(bad == 0, "lhs <= rhs (1 + 1e-8) in every case");
}

void criterion7(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = make_grid({-1, 1}, 100, 2);
  const Exponent two(2.0);
  const double target = 1 / std::sqrt(2 * sharp_constant(two));
  std::vector<double> C;
  double norm_err = 0;
  for (double tau : {4.0, 6.0, 8.0, 10.0}) {
    const auto fam = build_interval_test(two, tau, grid);
    // ||f||_2^2 = 2 int_r^{1/2} dy / (4 tau^2 y) = log(1/(2r)) / (2 tau^2), independently of lp_norm_f.
    const double direct = std::log(1 / (2 * fam.r)) / (2 * tau * tau);
    norm_err = std::max({norm_err, std::abs(direct - 1 / (2 * tau)), std::abs(fam.lp_norm_f - 1 / (2 * tau))});
    C.push_back(tau * std::abs(fam.plateau_mean - target));
  }
  const auto probe = sharpness_probe(two, probe_weight("square"), {4, 6, 8, 10}, grid);
  bool increasing = true;
  for (std::size_t k = 1; k < probe.size(); ++k) increasing &= probe[k].value > probe[k - 1].value;
  const double ratio = probe.back().value / probe.front().value;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double cmax = *std::max_element(C.begin(), C.end()), cmin = *std::min_element(C.begin(), C.end());
  o.detail << "|| f ||^2 err " << g(norm_err) << "; C = tau|mean - (2 alpha_2)^{-1/2}| = " << g(C[0]) << ", " << g(C[1])
           << ", " << g(C[2]) << ", " << g(C[3]) << "; t^2 probe " << g(probe[0].value) << " .. "
           << g(probe.back().value) << " (ratio " << g(ratio) << "), " << g(secs) << " s";
  o.require(norm_err <= 1e-12, "||f||^2 = 1/(2 tau)");
  // Stability of C: bounded by 0.35 and within 20% across tau.
  o.require(cmax <= 0.35 && (cmax - cmin) / cmax <= 0.2, "C bounded and stable");
  o.require(increasing, "probe strictly increasing");
  o.require(ratio >= 2, "final/first >= 2");
  o.require(secs < 300, "runtime < 5 min");
}

void criterion8(Outcome& o) {
  const auto grid = make_grid({-1, 1}, 100, 2);
  const Exponent two(2.0);
  std::vector<double> v;
  for (int tau = 4; tau <= 10; ++tau) {
    const auto fam = build_interval_test(two, tau, grid);
    v.push_back(mt_functional_nodes(fam.profile_x, fam.profile_w(), 0.9 * sharp_constant(two), two).value);
  }
  const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  o.detail << "mt_functional(w_tau) at 0.9 alpha_2, tau = 4..10:";
  for (double x : v) o.detail << ' ' << g(x);
  o.detail << "; (max - min)/min = " << g((hi - lo) / lo);
  o.require((hi - lo) / lo <= 0.2, "variation <= 20%");
}

void criterion9(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = make_grid({-1, 1}, 100, 2);
  std::vector<double> n, dev;
  for (double tau : {4.0, 6.0, 8.0}) {
    const auto fam = build_line_test(tau, grid);
    n.push_back(2 * tau * fam.full_norm_sq);
    dev.push_back(tau * std::abs(fam.plateau_mean - 1 / std::sqrt(2 * kPi)));
  }
  const auto probe = line_sharpness_probe(probe_weight("quartic"), {4, 6, 8}, grid);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "2 tau ||u||^2 = " << g(n[0]) << ", " << g(n[1]) << ", " << g(n[2]) << "; tau|plateau - 1/sqrt(2 pi)| = "
           << g(dev[0]) << ", " << g(dev[1]) << ", " << g(dev[2]) << "; t^4 probe " << g(probe[0].value) << ", "
           << g(probe[1].value) << ", " << g(probe[2].value) << "; " << g(secs) << " s";
  bool window = true, mono = true, plateau = true;
  for (std::size_t k = 0; k < n.size(); ++k) {
    window &= n[k] >= 0.8 && n[k] <= 1.2;
    plateau &= dev[k] <= 0.5;
    if (k > 0) mono &= std::abs(n[k] - 1) < std::abs(n[k - 1] - 1);
  }
  o.require(window, "2 tau ||u||^2 in [0.8, 1.2]");
  o.require(mono, "monotone approach to 1");
  o.require(plateau, "plateau within 0.5/tau");
  o.require(probe[1].value > probe[0].value && probe[2].value > probe[1].value, "t^4 probe strictly increasing");
  o.require(secs < 300, "runtime < 5 min");
}

const NehariContext& ctx100() {
  static const NehariContext ctx = make_nehari_context(make_grid({-1, 1}, 100, 2));
  return ctx;
}

NehariSolution half_solution() {
  static const NehariSolution sol = minimize_nehari(ctx100(), 0.5 * ctx100().lambda1, ctx100().phi1);
  return sol;
}

void criterion10(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  NehariSolution s;
  try {
    s = half_solution();
  } catch (const NehariNotConverged& e) {
    s = e.partial;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double mn = *std::min_element(s.u0.values.begin(), s.u0.values.end());
  o.detail << "converged " << (s.converged ? "yes" : "no") << ", min u " << g(mn) << ", symmetry err "
           << g(s.symmetry_error) << ", residual " << g(s.residual) << ", equation residual " << g(s.equation_residual)
           << ", energy " << g(s.energy) << ", sup u " << g(max_of(s.u0)) << ", " << g(secs) << " s";
  o.require(s.converged, "converged");
  o.require(mn >= 0, "nonnegative");
  o.require(s.symmetry_error <= 1e-8, "symmetric");
  o.require(s.residual <= 1e-6, "criticality residual <= 1e-6");
  o.require(s.equation_residual <= 1e-4, "equation residual <= 1e-4");
  o.require(s.energy > 0 && s.energy < kPi, "energy in (0, pi)");
  o.require(secs < 120, "runtime < 2 min");
}

void criterion11(Outcome& o) {
  const auto& ctx = ctx100();
  const auto u = half_solution().u0;
  for (double lam : {1.2 * ctx.lambda1, -0.5}) {
    const auto c = nonexistence_certificate(ctx, u, lam);
    o.detail << "lambda=" << g(lam) << ": " << c.verdict << " (" << c.reason << "); ";
    o.require(c.verdict == "inconsistent", "inconsistent at lambda=" + g(lam));
  }
}

void criterion12(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = make_grid({-1, 1}, 400, 2);
  const auto ctx = make_nehari_context(grid);
  const std::vector<double> fr{0.5, 0.3, 0.2, 0.1};
  std::vector<double> lambdas;
  for (double f : fr) lambdas.push_back(f * ctx.lambda1);
  const auto recs = blowup_scan(lambdas, grid);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool increasing = true;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    o.detail << "frac " << fr[k] << ": m=" << g(recs[k].m) << " eta_error=" << g(recs[k].eta_error) << "; ";
    if (k > 0) increasing &= recs[k].m > recs[k - 1].m;
  }
  o.detail << g(secs) << " s";
  o.require(recs.size() == fr.size(), "all solves converged");
  o.require(increasing, "sup u strictly increasing");
  o.require(!recs.empty() && recs.back().eta_error <= recs.front().eta_error, "final eta_error <= first");
  o.require(secs < 600, "runtime < 10 min");
}

void criterion13(Outcome& o) {
  std::vector<double> lam;
  for (int npu : {100, 200, 400})
    lam.push_back(eigen_smallest(assemble_dirichlet_operator(make_grid({-1, 1}, npu, 2), FracOrder(0.5)), 1)[0].eigenvalue);
  // Richardson with the empirical order q = log2 of the successive difference ratio.
  const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
  const double r1 = lam[1] + (lam[1] - lam[0]) / (ratio - 1);  // from (h, h/2)
  const double r2 = lam[2] + (lam[2] - lam[1]) / (ratio - 1);  // from (h/2, h/4)
  o.detail << "lambda_1(h) = " << g(lam[0]) << ", " << g(lam[1]) << ", " << g(lam[2]) << "; order "
           << g(std::log2(ratio)) << "; extrapolated " << std::to_string(r1) << ", " << std::to_string(r2)
           << " (oracle " << kLambda1Oracle << ")";
  o.require(std::abs(r1 - r2) <= 1e-3, "extrapolations agree within 1e-3");
  o.require(std::abs(r2 - kLambda1Oracle) <= 1e-3, "within 1e-3 of oracle");
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2,  criterion3,  criterion4,  criterion5,
                                                           criterion6, criterion7,  criterion8,  criterion9,  criterion10,
                                                           criterion11, criterion12, criterion13};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %2zu: %s  %s  (%.2f s)\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
