#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracmt/grid.hpp"

namespace fracmt {

struct Exponent {
  double p;
  double p_conj;
  explicit Exponent(double p_value);
};

// alpha_p = 1/2 [2 cos(pi/(2p)) Gamma(1/p)]^{p'}.
double sharp_constant(Exponent p);

struct FunctionalValue {
  double value = 0.0;
  bool overflow = false;  // an exponent argument was clamped at kExpClamp
};

inline constexpr double kExpClamp = 700.0;

// int_region (e^{alpha |u|^{p'}} - 1) dx (trapezoid on the grid).
FunctionalValue mt_functional(const GridFunction& u, double alpha, Exponent p, Region region);

// Same functional for a piecewise-linear profile on sorted nodes, with an
// optional weight h(u): int h(u) (e^{alpha |u|^{p'}} - 1) dx.
FunctionalValue mt_functional_nodes(const std::vector<double>& x, const std::vector<double>& u, double alpha,
                                    Exponent p, const std::function<double(double)>& weight = nullptr);

// A constructed extremal pair. The uniform-grid samples u, w are for display and
// export; all functionals use the graded profile (profile_x, profile_u), which
// resolves the exponentially small plateau radius r.
struct TestFamilyResult {
  double tau = 0.0;
  double r = 0.0;
  double delta = 0.0;  // line family: 1/tau; interval family: 1/2 (support edge of f)
  GridFunction u;      // unnormalized solution on the grid
  GridFunction w;      // u / constraint_norm
  double lp_norm_f = 0.0;        // ||f_tau||_{L^p}^p (interval family)
  double constraint_norm = 0.0;  // normalizer: ||(-Delta)^s u||_{L^p(I)} or ||u||_{H^{1/2,2}}
  double plateau_mean = 0.0;     // mean of u over [-r, r]
  double plateau_dev = 0.0;      // max |u - mean| over [-r, r]
  double tail_exponent = 0.0;    // fitted decay rate of (-Delta)^s u for |x| >= 2 (interval family)
  // Line family norms.
  double l2_norm_sq = 0.0;
  double seminorm_sq = 0.0;  // ||(-Delta)^{1/4} u||^2
  double full_norm_sq = 0.0;
  // Graded profile of u (unnormalized).
  std::vector<double> profile_x;
  std::vector<double> profile_u;
  std::vector<double> profile_w() const;
};

// Interval family of the p-critical case (s = 1/(2p)) on the grid's interval:
// f_tau = |y|^{-1/p} / (2 tau) on r <= |y| <= 1/2, u = F_s * f_tau - (discrete
// s-harmonic extension of its exterior values), w = u / ||f_tau||_{L^p}.
TestFamilyResult build_interval_test(Exponent p, double tau, GridPtr grid);

// Whole-line family: u = psi (F_{1/4} * f_tau) with f_tau = 1/(2 tau sqrt|x|) on
// r < |x| < delta, r = 1/(tau e^tau), delta = 1/tau; w = u / ||u||_{H^{1/2,2}}.
TestFamilyResult build_line_test(double tau, GridPtr grid);

// Quintic smoothstep cutoff: 1 on [-1/2, 1/2], 0 outside (-1, 1).
double cutoff_psi(double x);

// Convolution F_s * f_tau for the interval family (s = 1/(2p)); closed form for
// p = 2, adaptive double-exponential quadrature otherwise.
double interval_family_potential(Exponent p, double tau, double x);
double interval_family_potential_quadrature(Exponent p, double tau, double x);
// F_{1/4} * f_tau for the line family (closed form).
double line_family_potential(double tau, double x);

struct ProbeRow {
  double tau;
  double value;
  bool overflow;
};

// Named weights: "one", "zero", "square" (t^2), "quartic" (t^4).
std::function<double(double)> probe_weight(const std::string& name);

// int_I h(w_tau) (e^{alpha_p |w_tau|^{p'}} - 1) per tau (sorted by tau).
std::vector<ProbeRow> sharpness_probe(Exponent p, const std::function<double(double)>& h,
                                      std::vector<double> taus, GridPtr grid);
// int_R h(w_tau) (e^{pi w_tau^2} - 1) per tau for the line family.
std::vector<ProbeRow> line_sharpness_probe(const std::function<double(double)>& h, std::vector<double> taus,
                                           GridPtr grid);

struct WholeLineResult {
  double total = 0.0;
  double part_outer = 0.0;
  double part_inner = 0.0;
  double norm_full = 0.0;
  bool overflow = false;
};

// int_R (e^{pi u^2} - 1), split at |x| = 1/2, and ||u||^2_{L^2} + ||(-Delta)^{1/4} u||^2_{L^2}.
WholeLineResult whole_line_mt(const GridFunction& u);

}  // namespace fracmt
