#pragma once

#include "cutheat/operators.hpp"

namespace cutheat::manufactured {

/// Exact solution sin^2(pi x) e^(-t/2) of the forced heat equation on the
/// unit interval; the source below makes it exact.
double value(double x, double t);
double source(double x, double t);
SmoothFunction solution_at(double t);
SmoothFunction initial();

}  // namespace cutheat::manufactured
