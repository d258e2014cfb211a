#pragma once

#include <array>
#include <functional>

namespace fracmt::quad {

// 16-point Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::array<double, 16> x;
  std::array<double, 16> w;
};
const GaussRule& gauss16();

// Gauss-Legendre on [a, b] with `pieces` equal panels.
double gauss(const std::function<double(double)>& f, double a, double b, int pieces = 1);

// Double-exponential rules (tolerate integrable endpoint singularities).
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);
// Same, with f(y, d) where d = y - a near a and y - b near b (signed distance to
// the closer endpoint, computed without cancellation).
double tanh_sinh_endpoint(const std::function<double(double, double)>& f, double a, double b, double tol = 1e-12);
// Integral over [a, inf).
double exp_sinh(const std::function<double(double)>& f, double a, double tol = 1e-12);

}  // namespace fracmt::quad
