#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace spincycloid {

// Adaptive Simpson with Richardson correction. abs_tol is the target absolute
// error over [a, b]; recursion stops at max_depth regardless.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 50);

// Composite Simpson over equally spaced samples; needs an odd sample count >= 3.
double composite_simpson(std::span<const double> values, double h);

}  // namespace spincycloid
