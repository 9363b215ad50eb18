#include "splittree/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "splittree/errors.hpp"
#include "splittree/scale.hpp"

namespace splittree {

namespace {

struct PendingBirth {
  double time;
  std::uint64_t id;
  std::int64_t parent;
  std::uint64_t allele;

  bool operator>(const PendingBirth& o) const {
    return time != o.time ? time > o.time : id > o.id;
  }
};

}  // namespace

std::uint64_t SpectrumTable::total_alleles() const {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

PopulationSnapshot simulate(const MutationContext& ctx, double horizon,
                            CounterRng& rng, std::uint64_t cap) {
  if (horizon < 0.0) throw InvalidConfig("simulate: horizon must be >= 0");
  if (cap < 1) throw InvalidConfig("simulate: cap must be >= 1");
  double b = ctx.measure.birth_rate();
  double p = ctx.mutation_prob;

  PopulationSnapshot snap;
  snap.time = horizon;
  snap.allele_registry.push_back({0, 0.0, 0, -1});

  std::priority_queue<PendingBirth, std::vector<PendingBirth>,
                      std::greater<PendingBirth>>
      queue;
  queue.push({0.0, 0, -1, 0});
  std::uint64_t next_id = 1;

  while (!queue.empty()) {
    PendingBirth ev = queue.top();
    queue.pop();
    if (snap.individuals.size() >= cap) {
      snap.truncated = true;
      break;
    }
    double lifespan = ctx.measure.sample_lifespan(rng);
    Individual ind;
    ind.id = ev.id;
    ind.parent = ev.parent;
    ind.birth_time = ev.time;
    ind.death_time = ev.time + lifespan;
    ind.allele = ev.allele;
    snap.individuals.push_back(ind);

    // Poisson scatter of child birth times: exponential gaps at rate b on
    // (birth, min(death, horizon)].
    double stop = std::min(ind.death_time, horizon);
    double t = ev.time + rng.exponential(b);
    while (t <= stop) {
      std::uint64_t child_allele = ev.allele;
      if (rng.bernoulli(p)) {
        child_allele = snap.allele_registry.size();
        int parent_type = snap.allele_registry[ev.allele].type;
        snap.allele_registry.push_back({child_allele, t, parent_type + 1,
                                        static_cast<std::int64_t>(ev.allele)});
      }
      queue.push({t, next_id++, static_cast<std::int64_t>(ind.id), child_allele});
      t += rng.exponential(b);
    }
  }

  snap.births_total = snap.individuals.size();
  for (const Individual& ind : snap.individuals)
    if (ind.birth_time <= horizon && ind.death_time > horizon)
      snap.alive.emplace_back(ind.id, ind.allele);
  return snap;
}

PopulationSnapshot simulate(const MutationContext& ctx, double horizon,
                            std::uint64_t seed, std::uint64_t cap) {
  CounterRng rng = CounterRng::for_stream(seed, 0);
  return simulate(ctx, horizon, rng, cap);
}

PopulationSnapshot snapshot_at(const PopulationSnapshot& s, double t) {
  if (t < 0.0 || t > s.time)
    throw OutOfRange("snapshot_at: t must lie in [0, snapshot time]");
  PopulationSnapshot out;
  out.time = t;
  out.truncated = s.truncated;
  out.individuals = s.individuals;
  for (const Individual& ind : s.individuals) {
    if (ind.birth_time <= t) ++out.births_total;
    if (ind.birth_time <= t && ind.death_time > t)
      out.alive.emplace_back(ind.id, ind.allele);
  }
  for (const AlleleRecord& rec : s.allele_registry)
    if (rec.origin_time <= t) out.allele_registry.push_back(rec);
  return out;
}

SpectrumTable snapshot_spectrum(const PopulationSnapshot& s,
                                double age_cutoff) {
  if (age_cutoff < 0.0 || age_cutoff > s.time)
    throw OutOfRange("snapshot_spectrum: cutoff must lie in [0, t]");
  std::unordered_map<std::uint64_t, std::uint64_t> family_size;
  for (const auto& [ind, allele] : s.alive) ++family_size[allele];

  SpectrumTable table;
  table.time = s.time;
  table.age_cutoff = age_cutoff;
  double oldest_origin = s.time - age_cutoff;
  for (const auto& [allele, size] : family_size) {
    if (s.allele_registry[allele].origin_time < oldest_origin) continue;
    if (table.counts.size() < size) table.counts.resize(size, 0);
    ++table.counts[size - 1];
  }
  return table;
}

TypeCounts snapshot_type_counts(const PopulationSnapshot& s) {
  TypeCounts out;
  std::unordered_map<std::uint64_t, std::uint64_t> family_size;
  for (const auto& [ind, allele] : s.alive) {
    ++family_size[allele];
    auto type = static_cast<std::size_t>(s.allele_registry[allele].type);
    if (out.individuals_by_type.size() <= type)
      out.individuals_by_type.resize(type + 1, 0);
    ++out.individuals_by_type[type];
  }
  for (const auto& [allele, size] : family_size) {
    auto type = static_cast<std::size_t>(s.allele_registry[allele].type);
    if (out.alleles_by_type.size() <= type)
      out.alleles_by_type.resize(type + 1, 0);
    ++out.alleles_by_type[type];
  }
  return out;
}

double survival_conditioned_statistic(
    const MutationContext& ctx, double horizon,
    const std::function<double(const PopulationSnapshot&)>& statistic,
    CounterRng& rng, double proxy_horizon, int max_attempts,
    std::uint64_t cap) {
  if (!(ctx.measure.mean() > 1.0))
    throw WrongRegime("survival conditioning requires a supercritical tree");
  double full_horizon = std::max(horizon, proxy_horizon);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    PopulationSnapshot s = simulate(ctx, full_horizon, rng, cap);
    if (s.truncated || !s.alive.empty())
      return statistic(horizon == full_horizon ? s : snapshot_at(s, horizon));
  }
  throw RejectionBudgetExceeded(
      "survival-conditioned sampling exhausted its attempt budget");
}

}  // namespace splittree
