#include "splittree/mutation.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "splittree/errors.hpp"
#include "splittree/quadrature.hpp"
#include "splittree/spectrum.hpp"

namespace splittree {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// One trapezoid convolution pass: out[n] = h (f * g)(n h).
std::vector<double> convolve(const std::vector<double>& f,
                             const std::vector<double>& g, double h) {
  std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.5 * (f[0] * g[k] + f[k] * g[0]);
    for (std::size_t j = 1; j < k; ++j) acc += f[j] * g[k - j];
    out[k] = acc * h;
  }
  return out;
}

// eta_c and psi_c'(eta_c) for a supercritical clonal process.
struct ClonalRoot {
  double eta_c;
  double psi_c_prime;
};

ClonalRoot clonal_root(const MutationContext& ctx) {
  LifespanMeasure mc = ctx.clonal_measure();
  double eta_c = malthusian(mc);
  if (!(eta_c > 0.0))
    throw WrongRegime("clonal process must be supercritical ((1-p)m > 1)");
  return {eta_c, ctx.psi_c_derivative(eta_c)};
}

}  // namespace

double ConvolutionGrid::at(double t) const {
  if (t < 0.0 || t > horizon * (1.0 + 1e-12))
    throw OutOfRange("convolution grid evaluated outside [0, horizon]");
  double pos = t / step;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= values.size()) return values.back();
  double frac = pos - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

ConvolutionGrid iterated_convolution(const std::vector<double>& f, double step,
                                     int order) {
  if (order < 1) throw OutOfRange("convolution order must be >= 1");
  if (f.size() < 2) throw GridTooCoarse("need at least two grid samples");
  ConvolutionGrid grid;
  grid.step = step;
  grid.horizon = static_cast<double>(f.size() - 1) * step;
  grid.order = order;
  grid.values = f;
  for (int level = 2; level <= order; ++level)
    grid.values = convolve(f, grid.values, step);
  return grid;
}

double expected_K(const MutationContext& ctx, const ScaleGrid& grid_wc, int i,
                  double t) {
  if (i < 0) throw OutOfRange("type index i must be >= 0");
  double bc = ctx.clonal_birth_rate();
  double ratio = ctx.mutation_prob / (1.0 - ctx.mutation_prob);
  if (i == 0) return grid_wc.w_prime(t) / bc;
  ConvolutionGrid conv =
      iterated_convolution(grid_wc.derivatives, grid_wc.step, i + 1);
  return ipow(ratio, i) / bc * conv.at(t);
}

double expected_L(const MutationContext& ctx, const ScaleGrid& grid_wc, int i,
                  double t) {
  if (i < 0) throw OutOfRange("type index i must be >= 0");
  double bc = ctx.clonal_birth_rate();
  double ratio = ctx.mutation_prob / (1.0 - ctx.mutation_prob);
  if (i == 0) return grid_wc.w_prime(t) / (bc * grid_wc.w(t));
  ConvolutionGrid conv =
      iterated_convolution(grid_wc.derivatives, grid_wc.step, i);
  std::vector<double> hazard(grid_wc.size());
  for (std::size_t k = 0; k < hazard.size(); ++k)
    hazard[k] = grid_wc.derivatives[k] / grid_wc.values[k];
  std::vector<double> combined = convolve(conv.values, hazard, grid_wc.step);
  ConvolutionGrid result;
  result.step = grid_wc.step;
  result.horizon = grid_wc.horizon;
  result.order = i + 1;
  result.values = std::move(combined);
  return ipow(ratio, i) / bc * result.at(t);
}

KAsymptotics K_asymptotics(const MutationContext& ctx, int i) {
  if (i < 0) throw OutOfRange("type index i must be >= 0");
  LifespanMeasure mc = ctx.clonal_measure();
  double mc_mean = mc.mean();
  double b = ctx.measure.birth_rate();
  double p = ctx.mutation_prob;

  KAsymptotics out;
  if (mc_mean > 1.0) {
    ClonalRoot root = clonal_root(ctx);
    out.regime = Regime::kSupercritical;
    out.eta_p = root.eta_c;
    out.c_p = root.eta_c / root.psi_c_prime;
  } else if (mc_mean == 1.0) {
    double s2 = ctx.measure.second_moment();
    if (std::isinf(s2))
      throw DivergentMoment("critical clonal regime requires sigma^2 < inf");
    out.regime = Regime::kCritical;
    out.eta_p = 0.0;
    out.c_p = 2.0 / ((1.0 - p) * s2);
  } else {
    double eta_tilde_c = negative_root(mc);
    out.regime = Regime::kSubcritical;
    out.eta_p = eta_tilde_c;
    out.c_p = eta_tilde_c / ctx.psi_c_derivative(eta_tilde_c);
  }
  out.leading_coefficient = ipow(p / (1.0 - p), i) * ipow(out.c_p, i + 1) /
                            (b * (1.0 - p) * factorial(i));
  return out;
}

LAsymptotics L_asymptotics(const MutationContext& ctx,
                           const ScaleGrid& grid_wc, int i, double abs_tol) {
  if (i < 1) throw OutOfRange("L asymptotics require i >= 1");
  LifespanMeasure mc = ctx.clonal_measure();
  double mc_mean = mc.mean();
  double b = ctx.measure.birth_rate();
  double p = ctx.mutation_prob;
  double ratio = p / (1.0 - p);

  LAsymptotics out;
  if (mc_mean > 1.0) {
    ClonalRoot root = clonal_root(ctx);
    double j_c =
        limit_J(grid_wc, root.eta_c, kAllFamilySizes, kInfiniteAge, abs_tol);
    out.regime = Regime::kSupercritical;
    out.growth_exponent = root.eta_c;
    out.polynomial_power = i - 1;
    out.log_factor = false;
    out.constant = j_c * ipow(ratio, i) *
                   ipow(root.eta_c / root.psi_c_prime, i) /
                   (b * (1.0 - p) * factorial(i - 1));
  } else if (mc_mean == 1.0) {
    double s2 = ctx.measure.second_moment();
    if (std::isinf(s2))
      throw DivergentMoment("critical clonal regime requires sigma^2 < inf");
    out.regime = Regime::kCritical;
    out.growth_exponent = 0.0;
    out.polynomial_power = i;
    out.log_factor = true;
    out.constant = ipow(2.0 * p / (s2 * (1.0 - p) * (1.0 - p)), i) /
                   (b * (1.0 - p) * factorial(i - 1));
  } else {
    double eta_tilde_c = negative_root(mc);
    out.regime = Regime::kSubcritical;
    out.growth_exponent = eta_tilde_c;
    out.polynomial_power = i;
    out.log_factor = false;
    out.constant = (1.0 - mc_mean) * ipow(ratio, i) *
                   ipow(eta_tilde_c / ctx.psi_c_derivative(eta_tilde_c),
                        i + 1) /
                   (b * (1.0 - p) * factorial(i));
  }
  return out;
}

KappaLaw kappa_law(const MutationContext& ctx, int i) {
  if (i < 0) throw OutOfRange("type index i must be >= 0");
  ClonalRoot root = clonal_root(ctx);
  double bc = ctx.clonal_birth_rate();
  double ratio = ctx.mutation_prob / (1.0 - ctx.mutation_prob);

  KappaLaw law;
  law.order = i;
  law.atom_prob = 1.0 - root.eta_c / bc;
  law.conditional_mean = ipow(ratio, i) * ipow(root.eta_c, i) /
                         (factorial(i) * ipow(root.psi_c_prime, i + 1));
  law.theta = 1.0 / law.conditional_mean;
  law.mean = (1.0 - law.atom_prob) * law.conditional_mean;
  return law;
}

double kappa_fixed_point_residual(const MutationContext& ctx, int i, double a,
                                  double theta_override) {
  if (!(a > 0.0)) throw OutOfRange("fixed-point residual requires a > 0");
  KappaLaw law = kappa_law(ctx, i);
  double theta = law.theta;
  double cap_p = 1.0 - law.atom_prob;  // eta_c / (b(1-p))
  // The equation alone does not see theta: the inner-integral algebra
  // cancels it for any mixture with atom mass 1 - cap_p.  Uniqueness
  // comes from fixing the mean cap_p/theta, so a theta probe moves along
  // the constant-mean family and thereby shifts the atom mass.
  if (theta_override > 0.0) {
    cap_p *= theta_override / theta;
    theta = theta_override;
  }
  double eta_c = ctx.clonal_birth_rate() * (1.0 - law.atom_prob);
  double bc = ctx.clonal_birth_rate();

  auto phi = [&](double arg) {
    return 1.0 - cap_p + cap_p * theta / (arg + theta);
  };

  // exp{b(1-p)(int_0^z phi(a e^{-eta_c u}) du - z)} with the inner
  // integral in closed form:
  //   z(1-P) + (P/eta_c)(ln(a + theta e^{eta_c z}) - ln(a + theta)),
  // which collapses to e^{-eta_c z} (a + theta e^{eta_c z})/(a + theta)
  // only when bc * P = eta_c; keep the general exponent so perturbed
  // theta probes stay honest.
  auto integrand_factor = [&](double z) {
    double inner = z * (1.0 - cap_p) +
                   cap_p / eta_c *
                       (std::log(a + theta * std::exp(eta_c * z)) -
                        std::log(a + theta));
    return std::exp(bc * (inner - z));
  };

  double rhs;
  if (ctx.measure.family() == Family::kPureBirth) {
    // all lifespan mass at +infinity: the factor tends to
    // ((theta e^{eta_c z})/(a+theta))^{bc P/eta_c} e^{-bc P z} -> limit
    double expo = bc * cap_p / eta_c;
    double limit = std::pow(theta / (a + theta), expo);
    rhs = limit;
  } else {
    double b = ctx.measure.birth_rate();
    // truncate where the lifespan tail is negligible
    double upper = 1.0;
    while (ctx.measure.tail_mass(upper) > 1e-14 * b && upper < 1e6)
      upper *= 2.0;
    rhs = integrate_adaptive(
        [&](double z) { return ctx.measure.density(z) / b * integrand_factor(z); },
        0.0, upper, 1e-10);
  }
  return std::fabs(phi(a) - rhs);
}

double convolution_limit_check(const std::vector<double>& f, double step,
                               int order, double a_rate, double l,
                               double t_probe) {
  if (order < 1) throw OutOfRange("convolution order must be >= 1");
  ConvolutionGrid conv = iterated_convolution(f, step, order);
  double value = conv.at(t_probe);
  double scaled = std::exp(a_rate * t_probe) /
                  ipow(t_probe, order - 1) * value;
  return std::fabs(scaled * factorial(order - 1) / ipow(l, order) - 1.0);
}

}  // namespace splittree
