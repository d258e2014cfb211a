#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracmt/fraclap.hpp"
#include "fracmt/grid.hpp"
#include "fracmt/mtineq.hpp"

namespace fracmt {

// Discrete setting for (-Delta)^{1/2} u = lambda u e^{u^2/2} on the grid interval:
// H-norm ||u||_H^2 = h u^T A u, lambda_1 and phi_1 of A.
struct NehariContext {
  DirichletOperator op;
  double lambda1 = 0.0;
  GridFunction phi1;
};

NehariContext make_nehari_context(GridPtr grid);

// J(u) = ||u||_H^2 / 2 - lambda int_I (e^{u^2/2} - 1).
FunctionalValue functional_J(const NehariContext& ctx, const GridFunction& u, double lambda);
FunctionalValue functional_J(const GridFunction& u, double lambda);
// Q(u) = J(u) - <J'(u), u>/2 = lambda int_I ((u^2/2 - 1) e^{u^2/2} + 1).
FunctionalValue functional_Q(const GridFunction& u, double lambda);
// lambda int_I u^2 e^{t^2 u^2 / 2}.
double nonlinear_pairing(const GridFunction& u, double lambda, double t = 1.0);

// No positive root of t -> ||u||_H^2 - lambda int u^2 e^{t^2 u^2/2}.
struct NoScalingRoot : std::domain_error {
  using std::domain_error::domain_error;
};

// Unique t > 0 with t u on the Nehari manifold.
double nehari_scaling(const NehariContext& ctx, const GridFunction& u, double lambda);
double nehari_scaling(const GridFunction& u, double lambda);

struct NehariOptions {
  double tol = 1e-6;          // criticality residual
  double t_tol = 1e-8;        // |t(u0) - 1|
  int max_iter = 20000;
  double armijo_c = 1e-4;
  double armijo_factor = 0.5;
  bool newton_polish = true;  // Newton on the discrete equation once the descent residual is small
  double newton_switch = 1e-3;
};

struct NehariSolution {
  GridFunction u0;
  double lambda = 0.0;
  double energy = 0.0;             // J(u0)
  double residual = 0.0;           // ||H-gradient of J at u0||_H
  double equation_residual = 0.0;  // max |A u0 - lambda u0 e^{u0^2/2}| over interior nodes
  double manifold_defect = 0.0;    // |<J'(u0), u0>|
  double t_final = 1.0;            // t(u0)
  double symmetry_error = 0.0;     // max |u0(x) - u0(-x)|
  double monotonicity_violation = 0.0;  // max increase of u0 moving away from the center
  std::vector<std::pair<int, double>> t_history;
  int iterations = 0;
  int newton_steps = 0;
  bool converged = false;
};

struct NehariNotConverged : std::runtime_error {
  NehariSolution partial;
  NehariNotConverged(const std::string& what, NehariSolution p) : std::runtime_error(what), partial(std::move(p)) {}
};

NehariSolution minimize_nehari(const NehariContext& ctx, double lambda, const GridFunction& init,
                               const NehariOptions& opts = {});
NehariSolution minimize_nehari(double lambda, const GridFunction& init, const NehariOptions& opts = {});

struct Certificate {
  std::string verdict;         // "inconsistent" or "consistent"
  std::string reason;
  double lambda1_pairing = 0;  // lambda_1 int u phi_1
  double lambda_pairing = 0;   // lambda int u phi_1 e^{u^2/2}
  double identity_gap = 0;     // (lambda_pairing - lambda1_pairing) / |lambda1_pairing|
  double energy_pairing = 0;   // ||u||_H^2
  double energy_rhs = 0;       // lambda int u^2 e^{u^2/2}
};

// Pairing test of a positive candidate against phi_1 (and against itself).
Certificate nonexistence_certificate(const NehariContext& ctx, const GridFunction& u, double lambda);
Certificate nonexistence_certificate(const GridFunction& u, double lambda);

struct BlowupRecord {
  double lambda = 0.0;
  double m = 0.0;        // sup u
  // lambda r m^2 e^{m^2/2} = 2: the scaling under which eta_k solves
  // (-Delta)^{1/2} eta = e^eta (1 + O(m^-2)), the equation of eta_infinity.
  double r_scale = 0.0;
  GridFunction eta;      // eta(x) = m (u(r x) - m) + log 2 on [-5, 5]
  double eta_error = 0.0;
  // Diagnostic: the same error with lambda r m^2 e^{m^2/2} = 1, whose rescaled profiles
  // approach log(2 / (1 + x^2/4)) instead of eta_infinity.
  double eta_error_unit_scaling = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  bool converged = false;
};

double eta_infinity(double x);

// Warm-started Nehari solves along a descending lambda list. Solver failures stop
// the scan; the records computed so far are returned.
std::vector<BlowupRecord> blowup_scan(const std::vector<double>& lambdas, GridPtr grid, const NehariOptions& opts = {});

}  // namespace fracmt
