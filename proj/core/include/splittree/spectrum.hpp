#pragma once

#include "splittree/lifespan.hpp"
#include "splittree/scale.hpp"

namespace splittree {

// A frequency-spectrum query: alleles carried by exactly `family_size`
// individuals at time `t`, with age at most `age_cutoff`.
struct SpectrumQuery {
  int family_size = 1;     // i >= 1
  double age_cutoff = 0;   // 0 <= a <= t
  double time = 0;         // t
};

// Density in the age variable of the expected spectrum:
//   (p/(b(1-p))) W'(t-a) (1 - 1/W_c(a))^{i-1} W_c'(a)/W_c(a)^2,
// valid for 0 < a < t.
double expected_spectrum_density(const ScaleGrid& grid_w,
                                 const ScaleGrid& grid_wc,
                                 const MutationContext& ctx,
                                 const SpectrumQuery& q);

// E[M_t^{i,a}]: integral of the density over (0,a), plus the progenitor
// boundary term when a = t (at grid resolution, |a-t| <= h/2).
double expected_spectrum(const ScaleGrid& grid_w, const ScaleGrid& grid_wc,
                         const MutationContext& ctx, const SpectrumQuery& q);

constexpr int kAllFamilySizes = 0;
constexpr double kInfiniteAge = -1.0;

// J^{i,a} = int_0^a e^{-eta u} (1 - 1/W_c(u))^{i-1} W_c'(u)/W_c(u)^2 du,
// or J = int_0^inf e^{-eta u} W_c'(u)/W_c(u) du when family_size is
// kAllFamilySizes.  age = kInfiniteAge means a = infinity; the improper
// tail is certified against the envelope bound b(1-p) e^{-eta U}/eta.
double limit_J(const ScaleGrid& grid_wc, double eta, int family_size,
               double age, double abs_tol = 1e-8);

struct SpectrumLimits {
  double mean_limit = 0.0;      // limit of e^{-eta t} E[M_t^{i,a}]
  double as_limit_scale = 0.0;  // (p/(1-p)) J^{i,a}, scale of the a.s. limit
  double fraction_limit = 0.0;  // J^{i,a} / J
};

SpectrumLimits spectrum_limits(const MutationContext& ctx,
                               const ScaleGrid& grid_wc, int family_size,
                               double age, double abs_tol = 1e-8);

// Limit of M_t^{i,t}/M_t:
//   (1/i) int_0^inf e^{-eta u} (1 - 1/W_c(u))^i du
//         / int_0^inf e^{-eta u} ln W_c(u) du.
double size_fraction_limit(const ScaleGrid& grid_wc, double eta,
                           int family_size, double abs_tol = 1e-8);

}  // namespace splittree
