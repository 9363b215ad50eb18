#pragma once

#include <vector>

#include "splittree/lifespan.hpp"
#include "splittree/scale.hpp"

namespace splittree {

// Uniform-grid tabulation of the i-fold convolution power f^{*(i)}.
struct ConvolutionGrid {
  double step = 0.0;
  double horizon = 0.0;
  int order = 1;
  std::vector<double> values;

  double at(double t) const;
};

// Trapezoid-rule convolution powers: f^{*(1)} = f and
// f^{*(i)} = f * f^{*(i-1)}, O(i n^2).
ConvolutionGrid iterated_convolution(const std::vector<double>& f, double step,
                                     int order);

// E[K_i(t)] = (1/(b(1-p))) (p/(1-p))^i (W_c')^{*(i+1)}(t); i = 0 gives
// E[clonal population size] = W_c'(t)/(b(1-p)).
double expected_K(const MutationContext& ctx, const ScaleGrid& grid_wc, int i,
                  double t);

// E[L_i(t)]: W_c'(t)/(b(1-p)W_c(t)) for i = 0, and for i >= 1
//   (1/(b(1-p))) (p/(1-p))^i (W_c')^{*(i)} * (W_c'/W_c) (t).
double expected_L(const MutationContext& ctx, const ScaleGrid& grid_wc, int i,
                  double t);

// Leading asymptotics E[K_i(t)] ~ leading_coefficient t^i e^{eta_p t}.
struct KAsymptotics {
  Regime regime = Regime::kSupercritical;
  double eta_p = 0.0;
  double c_p = 0.0;
  double leading_coefficient = 0.0;
};

KAsymptotics K_asymptotics(const MutationContext& ctx, int i);

// Leading term of E[L_i(t)] ~ constant t^power e^{growth t} (ln t)^{log}.
struct LAsymptotics {
  Regime regime = Regime::kSupercritical;
  double growth_exponent = 0.0;
  int polynomial_power = 0;
  bool log_factor = false;
  double constant = 0.0;
};

// Requires i >= 1 and a Wc grid long enough to certify J_c in the
// supercritical branch.
LAsymptotics L_asymptotics(const MutationContext& ctx,
                           const ScaleGrid& grid_wc, int i,
                           double abs_tol = 1e-8);

// Mixture law of kappa_i = lim t^{-i} e^{-eta_c t} K_i(t): an atom at 0
// plus an exponential conditional law.
struct KappaLaw {
  int order = 0;
  double atom_prob = 0.0;         // 1 - eta_c/(b(1-p))
  double conditional_mean = 0.0;  // (1/i!)(p/(1-p))^i eta_c^i/psi_c'(eta_c)^{i+1}
  double theta = 0.0;             // 1/conditional_mean
  double mean = 0.0;              // (1-atom_prob) * conditional_mean
};

KappaLaw kappa_law(const MutationContext& ctx, int i);

// Residual of the Laplace-transform fixed point at argument a for the
// mixture transform phi(a) = 1 - P + P theta/(a+theta).  The inner time
// integral is closed-form; the outer lifespan integral uses adaptive
// quadrature.  Analytically zero for the true law.  A theta_override is
// probed along the fixed-mean family (the side condition that makes the
// solution unique), i.e. the atom mass is rescaled with theta.
double kappa_fixed_point_residual(const MutationContext& ctx, int i, double a,
                                  double theta_override = 0.0);

// Deviation |(e^{a t}/t^{i-1}) f^{*(i)}(t) (i-1)!/l^i - 1| at t_probe,
// witnessing the convolution limit for e^{a t} f(t) -> l.
double convolution_limit_check(const std::vector<double>& f, double step,
                               int order, double a_rate, double l,
                               double t_probe);

}  // namespace splittree
