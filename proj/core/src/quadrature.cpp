#include "splittree/quadrature.hpp"

#include <cmath>
#include <cstddef>

namespace splittree {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] and the embedded 7-point Gauss
// weights (positive half; nodes are symmetric).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GkResult {
  double kronrod;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fc = f(c);
  double kron = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double x = half * kKronrodNodes[i];
    double fsum = f(c - x) + f(c + x);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kron *= half;
  gauss *= half;
  return {kron, std::fabs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth) {
  GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth <= 0) return r.kronrod;
  double c = 0.5 * (a + b);
  return adapt(f, a, c, tol * 0.5, depth - 1) +
         adapt(f, c, b, tol * 0.5, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, max_depth);
}

double trapezoid(const std::vector<double>& values, double h) {
  if (values.size() < 2) return 0.0;
  return trapezoid_prefix(values, values.size() - 1, h);
}

double trapezoid_prefix(const std::vector<double>& values, std::size_t n,
                        double h) {
  if (n == 0) return 0.0;
  double sum = 0.5 * (values[0] + values[n]);
  for (std::size_t j = 1; j < n; ++j) sum += values[j];
  return sum * h;
}

}  // namespace splittree
