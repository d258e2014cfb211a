#include "fracmt/mtineq.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracmt/fraclap.hpp"

namespace fracmt {

Exponent::Exponent(double p_value) : p(p_value), p_conj(0.0) {
  if (!std::isfinite(p_value) || !(p_value > 1.0)) throw std::invalid_argument("Exponent: p must exceed 1");
  p_conj = p_value / (p_value - 1.0);
}

double sharp_constant(Exponent p) {
  const double base = 2.0 * std::cos(std::numbers::pi / (2.0 * p.p)) * boost::math::tgamma(1.0 / p.p);
  return 0.5 * std::pow(base, p.p_conj);
}

namespace {

// e^{a} - 1 with clamping of the argument.
double expm1_clamped(double a, bool* overflow) {
  if (a > kExpClamp) {
    *overflow = true;
    a = kExpClamp;
  }
  return std::expm1(a);
}

}  // namespace

FunctionalValue mt_functional(const GridFunction& u, double alpha, Exponent p, Region region) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mt_functional: alpha must be positive");
  FunctionalValue out;
  std::vector<double> vals(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    vals[i] = expm1_clamped(alpha * std::pow(std::abs(u.values[i]), p.p_conj), &out.overflow);
  out.value = integrate_values(*u.grid, vals, region);
  return out;
}

FunctionalValue mt_functional_nodes(const std::vector<double>& x, const std::vector<double>& u, double alpha,
                                    Exponent p, const std::function<double(double)>& weight) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mt_functional: alpha must be positive");
  if (x.size() != u.size() || x.size() < 2) throw std::invalid_argument("mt_functional_nodes: bad sizes");
  FunctionalValue out;
  std::vector<double> vals(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = expm1_clamped(alpha * std::pow(std::abs(u[i]), p.p_conj), &out.overflow);
    vals[i] = weight ? weight(u[i]) * e : e;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (vals[i] + vals[i + 1]) * (x[i + 1] - x[i]);
  out.value = sum;
  return out;
}

WholeLineResult whole_line_mt(const GridFunction& u) {
  WholeLineResult r;
  const Exponent two(2.0);
  const auto total = mt_functional(u, std::numbers::pi, two, Region::whole());
  const auto inner = mt_functional(u, std::numbers::pi, two, Region::of(-0.5, 0.5));
  r.total = total.value;
  r.part_inner = inner.value;
  r.part_outer = total.value - inner.value;
  r.overflow = total.overflow;
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u.values[i] * u.values[i];
  const FracOrder half(0.5);
  r.norm_full = integrate_values(*u.grid, sq, Region::whole()) +
                0.5 * kernel_normalization(half) * gagliardo_seminorm(u, half);
  return r;
}

}  // namespace fracmt
