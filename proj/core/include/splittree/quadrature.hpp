#pragma once

#include <functional>
#include <vector>

namespace splittree {

// Adaptive Gauss-Kronrod (G7,K15) quadrature on [a,b] with absolute
// tolerance distributed over subintervals by bisection.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          int max_depth = 60);

// Composite trapezoid over uniformly sampled values with step h.
double trapezoid(const std::vector<double>& values, double h);

// Trapezoid of values[0..n] (inclusive), i.e. over [0, n*h].
double trapezoid_prefix(const std::vector<double>& values, std::size_t n,
                        double h);

}  // namespace splittree
