#include "splittree/scale.hpp"

#include <cmath>
#include <limits>

#include "splittree/errors.hpp"

namespace splittree {

namespace {

constexpr double kRootTol = 1e-12;

double interpolate(const std::vector<double>& v, double step, double horizon,
                   double t) {
  if (t < 0.0 || t > horizon * (1.0 + 1e-12))
    throw OutOfRange("grid evaluation outside [0, horizon]");
  double pos = t / step;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= v.size()) return v.back();
  double frac = pos - static_cast<double>(k);
  return v[k] + frac * (v[k + 1] - v[k]);
}

// Bisection for a root of psi in [lo, hi] given psi(lo) < 0 < psi(hi).
double bisect_psi(const LifespanMeasure& m, double lo, double hi) {
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * std::max(1.0, std::fabs(lo));
       ++it) {
    double mid = 0.5 * (lo + hi);
    (m.psi(mid) < 0.0 ? lo : hi) = mid;
  }
  double root = 0.5 * (lo + hi);
  if (std::fabs(m.psi(root)) > kRootTol)
    throw NonConvergence("bisection left |psi| > 1e-12 at root estimate");
  return root;
}

}  // namespace

double ScaleGrid::w(double t) const {
  return interpolate(values, step, horizon, t);
}

double ScaleGrid::w_prime(double t) const {
  return interpolate(derivatives, step, horizon, t);
}

double GeometricLaw::pmf(int n) const {
  if (n < 0) return 0.0;
  if (n == 0) return p_zero;
  return (1.0 - p_zero) * std::pow(1.0 - success, n - 1) * success;
}

double malthusian(const LifespanMeasure& measure) {
  if (measure.mean() <= 1.0) return 0.0;
  // psi'(0+) = 1 - m < 0, so psi is negative just right of 0; expand the
  // upper end until psi turns positive.
  double eps = 1e-9;
  double hi = 1.0;
  int doublings = 0;
  while (measure.psi(hi) <= 0.0) {
    hi *= 2.0;
    if (++doublings > 60)
      throw NonConvergence("malthusian: bracket expansion exceeded 2^60");
  }
  return bisect_psi(measure, eps, hi);
}

double negative_root(const LifespanMeasure& measure) {
  double m = measure.mean();
  if (!(m < 1.0))
    throw NoNegativeRoot("negative_root requires a subcritical measure");
  double domain_min = measure.psi_domain_min();
  // psi(lambda) ~ (1-m) lambda < 0 just left of 0; march toward the
  // divergence boundary until psi turns positive.
  double prev = -1e-6;  // psi(prev) < 0
  for (int step_count = 0; step_count < 200; ++step_count) {
    double next = std::isinf(domain_min) ? prev * 2.0
                                         : 0.5 * (prev + domain_min);
    double val;
    try {
      val = measure.psi(next);
    } catch (const DivergentMoment&) {
      break;
    }
    if (val > 0.0) {
      // root bracketed in [next, prev]
      double lo = next, hi = prev;
      for (int it = 0; it < 200 && (hi - lo) > 1e-16 * std::fabs(lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (measure.psi(mid) > 0.0 ? lo : hi) = mid;
      }
      double root = 0.5 * (lo + hi);
      if (std::fabs(measure.psi(root)) > kRootTol)
        throw NonConvergence("negative_root: |psi| > 1e-12 at estimate");
      // (condJagers3) also needs a finite first exponential moment at the
      // root, i.e. psi differentiable there.
      measure.psi_derivative(root);
      return root;
    }
    prev = next;
  }
  throw NoNegativeRoot(
      "psi stays negative up to the divergence boundary of the exponential "
      "moment");
}

double extinction_probability(const LifespanMeasure& measure) {
  return 1.0 - malthusian(measure) / measure.birth_rate();
}

ScaleGrid solve_scale(const LifespanMeasure& measure, double horizon,
                      double step) {
  double b = measure.birth_rate();
  if (step * b > 0.05)
    throw GridTooCoarse("solve_scale requires h*b <= 0.05");
  if (horizon < step) throw InvalidConfig("horizon must be at least one step");

  auto n = static_cast<std::size_t>(std::llround(horizon / step));
  ScaleGrid grid;
  grid.step = step;
  grid.horizon = static_cast<double>(n) * step;
  grid.measure_tag = measure.describe();
  grid.birth_rate = b;
  grid.values.resize(n + 1);
  grid.derivatives.resize(n + 1);

  // Kernel tabulated once.
  std::vector<double> tail(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    tail[k] = measure.tail_mass(static_cast<double>(k) * step);

  // Trapezoid discretization of W(t) = 1 + int_0^t W(u) tail(t-u) du with
  // the implicit diagonal solved exactly: the W_n coefficient is
  // 1 - (h/2) tail(0).
  grid.values[0] = 1.0;
  double diag = 1.0 - 0.5 * step * tail[0];
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.5 * grid.values[0] * tail[k];
    for (std::size_t j = 1; j < k; ++j) acc += grid.values[j] * tail[k - j];
    grid.values[k] = (1.0 + step * acc) / diag;
  }

  // Differentiating the equation above gives a second Volterra equation
  //   W'(t) = tail(t) + int_0^t W'(u) tail(t-u) du,
  // solved with the same rule; it is equivalent to
  // W'(t) = b W(t) - int_0^t W(t-x) Lambda(dx) but keeps the kernel
  // bounded even where the lifespan density blows up at 0 (gamma shapes
  // below 1).
  grid.derivatives[0] = tail[0];  // W'(0) = b
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.5 * grid.derivatives[0] * tail[k];
    for (std::size_t j = 1; j < k; ++j) acc += grid.derivatives[j] * tail[k - j];
    grid.derivatives[k] = (tail[k] + step * acc) / diag;
  }
  return grid;
}

ScaleGrid clonal_grid(const MutationContext& ctx, double horizon,
                      double step) {
  return solve_scale(ctx.clonal_measure(), horizon, step);
}

GeometricLaw marginal(const ScaleGrid& grid, double t) {
  double w = grid.w(t);
  double wp = grid.w_prime(t);
  GeometricLaw law;
  law.p_zero = 1.0 - wp / (grid.birth_rate * w);
  law.success = 1.0 / w;
  law.mean = wp / grid.birth_rate;
  return law;
}

LimitConstants growth_constants(const LifespanMeasure& measure) {
  LimitConstants out;
  double m = measure.mean();
  if (m > 1.0) {
    out.regime = Regime::kSupercritical;
    out.eta = malthusian(measure);
    out.psi_prime_at_root = measure.psi_derivative(out.eta);
    out.w_growth_constant = 1.0 / out.psi_prime_at_root;
    out.wprime_growth_constant = out.eta / out.psi_prime_at_root;
  } else if (m == 1.0) {
    double s2 = measure.second_moment();
    if (std::isinf(s2))
      throw DivergentMoment("critical regime requires finite sigma^2");
    out.regime = Regime::kCritical;
    out.eta = 0.0;
    out.psi_prime_at_root = 0.0;
    out.w_growth_constant = 2.0 / s2;
    out.wprime_growth_constant = 2.0 / s2;
  } else {
    out.regime = Regime::kSubcritical;
    out.eta = 0.0;
    out.w_growth_constant = 1.0 / (1.0 - m);
    try {
      out.eta_tilde = negative_root(measure);
      out.has_eta_tilde = true;
      out.psi_prime_at_root = measure.psi_derivative(out.eta_tilde);
      out.wprime_growth_constant = out.eta_tilde / out.psi_prime_at_root;
    } catch (const NoNegativeRoot&) {
      out.has_eta_tilde = false;
      out.wprime_growth_constant = 0.0;
    }
  }
  return out;
}

}  // namespace splittree
