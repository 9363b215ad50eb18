#include "splittree/spectrum.hpp"

#include <cmath>
#include <cstddef>

#include "splittree/errors.hpp"

namespace splittree {

namespace {

// (1 - 1/w)^(i-1) with the 0^0 = 1 convention at w = 1, i = 1.
double size_power(double w, int exponent) {
  if (exponent == 0) return 1.0;
  return std::pow(1.0 - 1.0 / w, exponent);
}

void check_query(const ScaleGrid& grid_w, const ScaleGrid& grid_wc,
                 const SpectrumQuery& q) {
  if (q.family_size < 1) throw OutOfRange("family size i must be >= 1");
  if (q.age_cutoff < 0.0 || q.age_cutoff > q.time)
    throw OutOfRange("age cutoff must satisfy 0 <= a <= t");
  if (q.time > grid_w.horizon * (1.0 + 1e-12) ||
      q.age_cutoff > grid_wc.horizon * (1.0 + 1e-12))
    throw OutOfRange("query exceeds the grid horizon");
}

}  // namespace

double expected_spectrum_density(const ScaleGrid& grid_w,
                                 const ScaleGrid& grid_wc,
                                 const MutationContext& ctx,
                                 const SpectrumQuery& q) {
  check_query(grid_w, grid_wc, q);
  if (!(q.age_cutoff < q.time))
    throw OutOfRange("spectrum density requires a < t");
  double p = ctx.mutation_prob;
  double b = ctx.measure.birth_rate();
  double wc = grid_wc.w(q.age_cutoff);
  double wcp = grid_wc.w_prime(q.age_cutoff);
  return p / (b * (1.0 - p)) * grid_w.w_prime(q.time - q.age_cutoff) *
         size_power(wc, q.family_size - 1) * wcp / (wc * wc);
}

double expected_spectrum(const ScaleGrid& grid_w, const ScaleGrid& grid_wc,
                         const MutationContext& ctx, const SpectrumQuery& q) {
  check_query(grid_w, grid_wc, q);
  double p = ctx.mutation_prob;
  double b = ctx.measure.birth_rate();
  double h = grid_wc.step;

  double integral = 0.0;
  if (q.age_cutoff > 0.0) {
    auto n = static_cast<std::size_t>(std::ceil(q.age_cutoff / h));
    double du = q.age_cutoff / static_cast<double>(n);
    auto integrand = [&](double u) {
      double wc = grid_wc.w(u);
      return grid_w.w_prime(q.time - u) * size_power(wc, q.family_size - 1) *
             grid_wc.w_prime(u) / (wc * wc);
    };
    double sum = 0.5 * (integrand(0.0) + integrand(q.age_cutoff));
    for (std::size_t j = 1; j < n; ++j)
      sum += integrand(static_cast<double>(j) * du);
    integral = p / (b * (1.0 - p)) * sum * du;
  }

  // Progenitor term, present exactly when a and t coincide at grid
  // resolution.
  double boundary = 0.0;
  if (std::fabs(q.age_cutoff - q.time) <= 0.5 * h) {
    double wc = grid_wc.w(q.time);
    boundary = 1.0 / (b * (1.0 - p)) * size_power(wc, q.family_size - 1) *
               grid_wc.w_prime(q.time) / (wc * wc);
  }
  return integral + boundary;
}

double limit_J(const ScaleGrid& grid_wc, double eta, int family_size,
               double age, double abs_tol) {
  if (!(eta > 0.0)) throw WrongRegime("limit_J requires eta > 0");
  double bc = grid_wc.birth_rate;  // b(1-p) of the clonal measure
  double h = grid_wc.step;
  double upper;
  if (age == kInfiniteAge) {
    upper = grid_wc.horizon;
    double tail_bound = bc * std::exp(-eta * upper) / eta;
    if (tail_bound > abs_tol)
      throw HorizonTooShort(
          "limit_J: truncation tail bound exceeds the requested tolerance");
  } else {
    if (age < 0.0) throw OutOfRange("limit_J: age must be >= 0 or infinite");
    if (age > grid_wc.horizon * (1.0 + 1e-12))
      throw HorizonTooShort("limit_J: age exceeds the grid horizon");
    upper = age;
  }
  if (upper == 0.0) return 0.0;

  auto integrand = [&](double u) {
    double wc = grid_wc.w(u);
    double wcp = grid_wc.w_prime(u);
    if (family_size == kAllFamilySizes)
      return std::exp(-eta * u) * wcp / wc;
    return std::exp(-eta * u) * size_power(wc, family_size - 1) * wcp /
           (wc * wc);
  };
  auto n = static_cast<std::size_t>(std::ceil(upper / h));
  double du = upper / static_cast<double>(n);
  double sum = 0.5 * (integrand(0.0) + integrand(upper));
  for (std::size_t j = 1; j < n; ++j)
    sum += integrand(static_cast<double>(j) * du);
  return sum * du;
}

SpectrumLimits spectrum_limits(const MutationContext& ctx,
                               const ScaleGrid& grid_wc, int family_size,
                               double age, double abs_tol) {
  double eta = malthusian(ctx.measure);
  if (!(eta > 0.0)) throw WrongRegime("spectrum limits require m > 1");
  double psi_prime = ctx.measure.psi_derivative(eta);
  double b = ctx.measure.birth_rate();
  double p = ctx.mutation_prob;

  double j_ia = limit_J(grid_wc, eta, family_size, age, abs_tol);
  double j_all = limit_J(grid_wc, eta, kAllFamilySizes, kInfiniteAge, abs_tol);

  SpectrumLimits out;
  out.as_limit_scale = p / (1.0 - p) * j_ia;
  out.mean_limit = eta / b * out.as_limit_scale / psi_prime;
  out.fraction_limit = j_ia / j_all;
  return out;
}

double size_fraction_limit(const ScaleGrid& grid_wc, double eta,
                           int family_size, double abs_tol) {
  if (!(eta > 0.0)) throw WrongRegime("size_fraction_limit requires eta > 0");
  if (family_size < 1) throw OutOfRange("family size i must be >= 1");
  double bc = grid_wc.birth_rate;
  double upper = grid_wc.horizon;
  double h = grid_wc.step;

  // Truncation envelopes: numerator integrand <= e^{-eta u}; the
  // denominator integrand is bounded by e^{-eta u}(ln W_c(U) + bc (u-U))
  // beyond U since (ln W_c)' = W_c'/W_c <= bc.
  double num_tail = std::exp(-eta * upper) / eta;
  double den_tail = std::exp(-eta * upper) *
                    (std::log(grid_wc.w(upper)) / eta + bc / (eta * eta));
  if (num_tail > abs_tol || den_tail > abs_tol)
    throw HorizonTooShort(
        "size_fraction_limit: truncation bound exceeds tolerance");

  auto n = static_cast<std::size_t>(std::llround(upper / h));
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    double u = static_cast<double>(j) * h;
    double weight = (j == 0 || j == n) ? 0.5 : 1.0;
    double wc = grid_wc.values[j];
    double e = std::exp(-eta * u);
    num += weight * e * size_power(wc, family_size);
    den += weight * e * std::log(wc);
  }
  return num / den / static_cast<double>(family_size);
}

}  // namespace splittree
