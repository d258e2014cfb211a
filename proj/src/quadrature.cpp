#include "fracmt/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

namespace fracmt::quad {

namespace {

GaussRule make_gauss16() {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  GaussRule r{};
  std::size_t k = 0;
  // Boost stores the non-negative abscissae; mirror them.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) continue;
    r.x[k] = 0.5 * (1.0 - xs[i]);
    r.w[k] = 0.5 * ws[i];
    ++k;
    r.x[k] = 0.5 * (1.0 + xs[i]);
    r.w[k] = 0.5 * ws[i];
    ++k;
  }
  if (k != 16) throw std::logic_error("gauss16: unexpected rule layout");
  return r;
}

}  // namespace

const GaussRule& gauss16() {
  static const GaussRule rule = make_gauss16();
  return rule;
}

double gauss(const std::function<double(double)>& f, double a, double b, int pieces) {
  const GaussRule& g = gauss16();
  const double len = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * len;
    double part = 0.0;
    for (std::size_t k = 0; k < 16; ++k) part += g.w[k] * f(lo + len * g.x[k]);
    sum += part * len;
  }
  return sum;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

double tanh_sinh_endpoint(const std::function<double(double, double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  // Boost passes xc = a - y (< 0) near a and b - y (> 0) near b.
  return integrator.integrate([&](double y, double xc) { return f(y, -xc); }, a, b, tol);
}

double exp_sinh(const std::function<double(double)>& f, double a, double tol) {
  static thread_local boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(a + t); }, 0.0,
                              std::numeric_limits<double>::infinity(), tol);
}

}  // namespace fracmt::quad
