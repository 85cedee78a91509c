#include "cutheat/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cutheat {

QuadRule make_rule(RuleKind kind) {
  QuadRule rule;
  rule.kind = kind;
  switch (kind) {
    case RuleKind::gauss1:
      rule.nodes = {0.5};
      rule.weights = {1.0};
      break;
    case RuleKind::gauss2: {
      const double d = 0.5 / std::sqrt(3.0);
      rule.nodes = {0.5 - d, 0.5 + d};
      rule.weights = {0.5, 0.5};
      break;
    }
    case RuleKind::gauss3: {
      const double d = 0.5 * std::sqrt(3.0 / 5.0);
      rule.nodes = {0.5 - d, 0.5, 0.5 + d};
      rule.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    case RuleKind::lobatto3:
      rule.nodes = {0.0, 0.5, 1.0};
      rule.weights = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
      break;
  }
  return rule;
}

QuadRule make_rule(std::string_view name) {
  if (name == "gauss1") return make_rule(RuleKind::gauss1);
  if (name == "gauss2") return make_rule(RuleKind::gauss2);
  if (name == "gauss3") return make_rule(RuleKind::gauss3);
  if (name == "lobatto3") return make_rule(RuleKind::lobatto3);
  throw std::invalid_argument("unknown quadrature rule: " + std::string(name));
}

double integrate(const std::function<double(double)>& f,
                 std::span<const Interval> segments, const QuadRule& rule) {
  double total = 0.0;
  for (const Interval& seg : segments) {
    const double len = seg.length();
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      acc += rule.weights[q] * f(seg.map(rule.nodes[q]));
    }
    total += len * acc;
  }
  return total;
}

}  // namespace cutheat
