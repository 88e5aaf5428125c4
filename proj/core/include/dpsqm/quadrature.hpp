#pragma once

#include <functional>

namespace dpsqm {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol
// (classic bisection with Richardson correction).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-11, int max_depth = 48);

}  // namespace dpsqm
