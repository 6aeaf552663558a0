#pragma once

#include <cmath>
#include <functional>

namespace qlsp {

/// Adaptive Simpson rule with Richardson correction. Recursion stops when the
/// local estimate changes by less than 15 * tol or `max_depth` is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

}  // namespace qlsp
