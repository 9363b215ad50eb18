#pragma once

#include <string>
#include <vector>

#include "splittree/lifespan.hpp"

namespace splittree {

// Uniform tabulation of a scale function W and its derivative on [0, T].
// W solves the second-kind Volterra equation
//   W(t) = 1 + int_0^t W(u) Lambda((t-u, inf]) du
// and W'(t) = b W(t) - int_0^t W(t-x) Lambda(dx).
struct ScaleGrid {
  double step = 0.0;
  double horizon = 0.0;
  std::vector<double> values;       // W(k h)
  std::vector<double> derivatives;  // W'(k h)
  std::string measure_tag;
  double birth_rate = 0.0;

  std::size_t size() const { return values.size(); }

  // Linear interpolation; OutOfRange outside [0, horizon].
  double w(double t) const;
  double w_prime(double t) const;
};

// One-dimensional marginal of the population size at a fixed time:
// zero with probability p_zero, else geometric with the given success
// probability.
struct GeometricLaw {
  double p_zero = 0.0;
  double success = 1.0;
  double mean = 1.0;  // E[population size] = W'(t)/b

  double pmf(int n) const;
};

enum class Regime { kSupercritical, kCritical, kSubcritical };

// Growth constants of W and W' in the three criticality regimes.
struct LimitConstants {
  Regime regime = Regime::kSupercritical;
  double eta = 0.0;                      // largest root of psi
  bool has_eta_tilde = false;
  double eta_tilde = 0.0;                // negative root (subcritical only)
  double psi_prime_at_root = 0.0;
  double w_growth_constant = 0.0;        // W(t) ~ c e^{eta t} / c t / c
  double wprime_growth_constant = 0.0;
};

// Largest root of psi; 0 when m <= 1, found by bisection otherwise.
double malthusian(const LifespanMeasure& measure);

// Negative root of psi for a subcritical measure (NoNegativeRoot /
// DivergentMoment otherwise).
double negative_root(const LifespanMeasure& measure);

// P(Ext) = 1 - eta/b.
double extinction_probability(const LifespanMeasure& measure);

// Solve the Volterra equation on [0, T] with step h (requires h*b <= 0.05).
ScaleGrid solve_scale(const LifespanMeasure& measure, double horizon,
                      double step);

// Scale grid of the clonal measure (1-p) Lambda.
ScaleGrid clonal_grid(const MutationContext& ctx, double horizon, double step);

GeometricLaw marginal(const ScaleGrid& grid, double t);

LimitConstants growth_constants(const LifespanMeasure& measure);

}  // namespace splittree
