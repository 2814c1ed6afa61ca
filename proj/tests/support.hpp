#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pcity::fixture {

// Variate source replaying fixed values, for hand-computed cases.
class ScriptedSource {
 public:
  ScriptedSource(std::vector<double> exponentials, std::vector<double> uniforms)
      : e_(std::move(exponentials)), u_(std::move(uniforms)) {}
  double exponential1() {
    if (ei_ >= e_.size()) throw std::logic_error("ScriptedSource: out of exponentials");
    return e_[ei_++];
  }
  double uniform01() {
    if (ui_ >= u_.size()) throw std::logic_error("ScriptedSource: out of uniforms");
    return u_[ui_++];
  }

 private:
  std::vector<double> e_, u_;
  std::size_t ei_ = 0, ui_ = 0;
};

// Adaptive Gauss-Kronrod on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

// Composite midpoint rule; robust for integrands with kinks.
inline double midpoint_sum(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
  return s * h;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace pcity::fixture
