#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace cutheat {

/// Closed 1D interval used for composite integration over cut segments.
struct Interval {
  double a = 0.0;
  double b = 0.0;

  double length() const { return b - a; }
  double map(double s) const { return a + s * (b - a); }  // s in (0,1)
};

enum class RuleKind { gauss1, gauss2, gauss3, lobatto3 };

/// Quadrature nodes/weights on the reference interval (0,1).
/// gauss-n is exact for polynomials of degree 2n-1, lobatto3 for degree 3.
struct QuadRule {
  RuleKind kind = RuleKind::gauss1;
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadRule make_rule(RuleKind kind);
QuadRule make_rule(std::string_view name);

/// Composite integration of f over a list of segments. Empty list gives 0.
double integrate(const std::function<double(double)>& f,
                 std::span<const Interval> segments, const QuadRule& rule);

}  // namespace cutheat
