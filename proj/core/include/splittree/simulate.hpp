#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splittree/lifespan.hpp"

namespace splittree {

struct Individual {
  std::uint64_t id = 0;
  std::int64_t parent = -1;  // -1 for the progenitor
  double birth_time = 0.0;
  double death_time = 0.0;  // +inf allowed
  std::uint64_t allele = 0;
};

struct AlleleRecord {
  std::uint64_t id = 0;
  double origin_time = 0.0;
  int type = 0;                    // mutation count from the ancestral allele
  std::int64_t parent_allele = -1;  // -1 for the ancestral allele
};

struct PopulationSnapshot {
  double time = 0.0;
  // (individual id, allele id) of everyone alive at `time`.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> alive;
  std::vector<AlleleRecord> allele_registry;
  std::uint64_t births_total = 0;  // y_t, individuals born in [0, time]
  bool truncated = false;
  // Full chronology, for CSV export and re-snapshotting.
  std::vector<Individual> individuals;
};

// Counts M_t^{i,a} indexed by family size i (index 0 unused semantics:
// counts[i-1] is the number of alleles of size i).
struct SpectrumTable {
  double time = 0.0;
  double age_cutoff = 0.0;
  std::vector<std::uint64_t> counts;

  std::uint64_t size_count(int i) const {
    return (i >= 1 && static_cast<std::size_t>(i) <= counts.size())
               ? counts[i - 1]
               : 0;
  }
  std::uint64_t total_alleles() const;
};

// Exact event-driven simulation up to `horizon`: the progenitor is born at
// time 0 carrying allele 0 of type 0; each individual draws a lifespan from
// the normalized law and scatters births as unit-rate-b exponential gaps,
// each birth mutant with probability p.  Individuals are processed in birth
// order; if ever-born exceeds `cap` the snapshot is flagged truncated.
PopulationSnapshot simulate(const MutationContext& ctx, double horizon,
                            CounterRng& rng, std::uint64_t cap = 10'000'000);

PopulationSnapshot simulate(const MutationContext& ctx, double horizon,
                            std::uint64_t seed,
                            std::uint64_t cap = 10'000'000);

// Snapshot of the same realization at an earlier time t <= s.time.
PopulationSnapshot snapshot_at(const PopulationSnapshot& s, double t);

SpectrumTable snapshot_spectrum(const PopulationSnapshot& s, double age_cutoff);

struct TypeCounts {
  std::vector<std::uint64_t> individuals_by_type;  // K_i
  std::vector<std::uint64_t> alleles_by_type;      // L_i
};

TypeCounts snapshot_type_counts(const PopulationSnapshot& s);

// One statistic sample under the survival-conditioned law, approximated by
// rejection: resimulate until the population is alive at proxy_horizon
// (>= horizon).  Throws WrongRegime in non-supercritical regimes and
// RejectionBudgetExceeded past max_attempts.
double survival_conditioned_statistic(
    const MutationContext& ctx, double horizon,
    const std::function<double(const PopulationSnapshot&)>& statistic,
    CounterRng& rng, double proxy_horizon = 15.0, int max_attempts = 10'000,
    std::uint64_t cap = 10'000'000);

}  // namespace splittree
