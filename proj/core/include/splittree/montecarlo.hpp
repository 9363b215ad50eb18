#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "splittree/simulate.hpp"

namespace splittree {

struct Estimate {
  std::string statistic;
  std::uint64_t n = 0;  // replicates retained
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t excluded_truncated = 0;
};

struct ComparisonReport {
  Estimate estimate;
  double theory_value = 0.0;
  double z_score = 0.0;
  bool pass = false;
};

// Monte Carlo mean of a snapshot statistic.  Replicate r uses the rng
// stream derived from (seed, r); truncated replicates are dropped and
// counted.  Results are aggregated in replicate-index order regardless of
// the number of worker threads, so the estimate is schedule-independent.
Estimate estimate(const MutationContext& ctx, double horizon,
                  const std::function<double(const PopulationSnapshot&)>& stat,
                  const std::string& name, std::uint64_t replicates,
                  std::uint64_t seed, std::uint64_t cap = 10'000'000,
                  unsigned threads = 0);

ComparisonReport compare(const Estimate& e, double theory,
                         double threshold = 3.0);

// Chi-square goodness of fit of integer samples against the mixed law
// {0 w.p. p_zero; Geometric(success) otherwise}; bins pooled from the top
// until every expected count is >= 5.  Needs >= 500 samples.
double geometric_gof(const std::vector<std::uint64_t>& samples, double success,
                     double p_zero);

struct KappaEmpirical {
  double atom_freq = 0.0;
  double atom_freq_se = 0.0;
  double conditional_mean = 0.0;
  double conditional_mean_se = 0.0;
  std::uint64_t n = 0;
  std::uint64_t excluded_truncated = 0;
};

// Empirical mixture summary of X = t^{-i} e^{-eta_c t} K_i(t) at a finite
// probe time; the atom at 0 is proxied by extinction of the ancestral
// clonal family at the probe time (K_i(t) = 0 alone is too strict: on the
// atom event K_i(t) usually stays positive while growing at a slower
// exponential rate).
KappaEmpirical kappa_empirical(const MutationContext& ctx, int i,
                               double t_probe, std::uint64_t replicates,
                               std::uint64_t seed,
                               std::uint64_t cap = 10'000'000,
                               unsigned threads = 0);

}  // namespace splittree
