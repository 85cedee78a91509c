#include "cutheat/problems.hpp"

#include <cmath>
#include <numbers>

namespace cutheat::manufactured {

namespace {
constexpr double kPi = std::numbers::pi;
}

double value(double x, double t) {
  const double s = std::sin(kPi * x);
  return s * s * std::exp(-0.5 * t);
}

double source(double x, double t) {
  // f = u_t - u_xx for u = sin^2(pi x) e^(-t/2).
  const double s = std::sin(kPi * x);
  const double decay = std::exp(-0.5 * t);
  return (-0.5 * s * s - 2.0 * kPi * kPi * std::cos(2.0 * kPi * x)) * decay;
}

SmoothFunction solution_at(double t) {
  const double decay = std::exp(-0.5 * t);
  SmoothFunction f;
  f.value = [decay](double x) {
    const double s = std::sin(kPi * x);
    return s * s * decay;
  };
  f.deriv = [decay](double x) { return kPi * std::sin(2.0 * kPi * x) * decay; };
  f.second = [decay](double x) {
    return 2.0 * kPi * kPi * std::cos(2.0 * kPi * x) * decay;
  };
  return f;
}

SmoothFunction initial() { return solution_at(0.0); }

}  // namespace cutheat::manufactured
