#include <cmath>
#include <numeric>

#include <doctest.h>

#include "splittree/errors.hpp"
#include "splittree/simulate.hpp"

using namespace splittree;

namespace {

MutationContext bd_quarter() {
  return {LifespanMeasure::exponential(1.0, 2.0), 0.25};
}

// Six alleles alive at t = 10 with multiplicities A:2, B:1, C:3, D:2,
// E:1, F:1; C is the ancestral allele (age t) and D is old, the rest are
// younger than 5.
PopulationSnapshot textbook_snapshot() {
  PopulationSnapshot s;
  s.time = 10.0;
  s.allele_registry = {
      {0, 0.0, 0, -1},  // C
      {1, 6.0, 1, 0},   // A
      {2, 7.0, 1, 0},   // B
      {3, 2.0, 1, 0},   // D
      {4, 8.0, 2, 3},   // E
      {5, 7.5, 2, 1},   // F
  };
  std::uint64_t carriers[] = {1, 1, 2, 0, 0, 0, 3, 3, 4, 5};
  std::uint64_t id = 0;
  for (auto allele : carriers) s.alive.emplace_back(id++, allele);
  return s;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("zero horizon leaves the progenitor alone") {
  auto s = simulate(bd_quarter(), 0.0, 1u);
  CHECK(s.births_total == 1);
  CHECK(s.alive.size() == 1);
  CHECK(s.allele_registry.size() == 1);
  CHECK(s.individuals[0].parent == -1);
  CHECK(!s.truncated);
}

TEST_CASE("same seed, same realization") {
  auto a = simulate(bd_quarter(), 4.0, 99u);
  auto b = simulate(bd_quarter(), 4.0, 99u);
  REQUIRE(a.births_total == b.births_total);
  REQUIRE(a.alive.size() == b.alive.size());
  for (std::size_t k = 0; k < a.alive.size(); ++k)
    CHECK(a.alive[k] == b.alive[k]);
  CHECK(a.allele_registry.size() == b.allele_registry.size());
  for (std::size_t k = 0; k < a.individuals.size(); ++k) {
    CHECK(a.individuals[k].birth_time == b.individuals[k].birth_time);
    CHECK(a.individuals[k].death_time == b.individuals[k].death_time);
  }
}

TEST_CASE("mutation probability must lie strictly inside (0,1)") {
  auto m = LifespanMeasure::exponential(1.0, 2.0);
  CHECK_THROWS_AS(MutationContext(m, 0.0), InvalidConfig);
  CHECK_THROWS_AS(MutationContext(m, 1.0), InvalidConfig);
  auto s = simulate(bd_quarter(), 5.0, 3u);
  for (const auto& [ind, allele] : s.alive)
    CHECK(allele < s.allele_registry.size());
}

TEST_CASE("allele registry is a tree of incrementing types") {
  auto s = simulate(bd_quarter(), 6.0, 11u);
  REQUIRE(s.allele_registry.size() > 1);
  CHECK(s.allele_registry[0].type == 0);
  CHECK(s.allele_registry[0].parent_allele == -1);
  for (std::size_t k = 1; k < s.allele_registry.size(); ++k) {
    const auto& rec = s.allele_registry[k];
    REQUIRE(rec.parent_allele >= 0);
    CHECK(static_cast<std::uint64_t>(rec.parent_allele) < k);
    CHECK(rec.type ==
          s.allele_registry[rec.parent_allele].type + 1);
    CHECK(rec.origin_time > 0.0);
  }
}

TEST_CASE("conservation laws on a simulated snapshot") {
  auto s = simulate(bd_quarter(), 6.0, 11u);
  REQUIRE(!s.alive.empty());
  auto table = snapshot_spectrum(s, s.time);
  std::uint64_t carriers = 0;
  for (std::size_t i = 1; i <= table.counts.size(); ++i)
    carriers += i * table.size_count(static_cast<int>(i));
  CHECK(carriers == s.alive.size());

  auto types = snapshot_type_counts(s);
  CHECK(std::accumulate(types.individuals_by_type.begin(),
                        types.individuals_by_type.end(), 0ull) ==
        s.alive.size());
  CHECK(std::accumulate(types.alleles_by_type.begin(),
                        types.alleles_by_type.end(), 0ull) ==
        table.total_alleles());
}

TEST_CASE("textbook fixture: (3,2,1) and, with an age cutoff, (3,1,0)") {
  auto s = textbook_snapshot();
  auto full = snapshot_spectrum(s, s.time);
  CHECK(full.size_count(1) == 3);
  CHECK(full.size_count(2) == 2);
  CHECK(full.size_count(3) == 1);
  CHECK(full.size_count(4) == 0);
  CHECK(full.total_alleles() == 6);

  auto young = snapshot_spectrum(s, 5.0);  // drops the two pre-(t-a) alleles
  CHECK(young.size_count(1) == 3);
  CHECK(young.size_count(2) == 1);
  CHECK(young.size_count(3) == 0);
  CHECK(young.total_alleles() == 4);

  PopulationSnapshot empty;
  empty.time = 1.0;
  empty.allele_registry.push_back({0, 0.0, 0, -1});
  CHECK(snapshot_spectrum(empty, 1.0).total_alleles() == 0);
  CHECK_THROWS_AS(snapshot_spectrum(s, 11.0), OutOfRange);
}

TEST_CASE("snapshot_at restricts a realization consistently") {
  auto s = simulate(bd_quarter(), 5.0, 11u);
  auto same = snapshot_at(s, 5.0);
  CHECK(same.alive.size() == s.alive.size());
  CHECK(same.births_total == s.births_total);
  auto start = snapshot_at(s, 0.0);
  CHECK(start.alive.size() == 1);
  CHECK(start.births_total == 1);
  CHECK(start.allele_registry.size() == 1);
  CHECK_THROWS_AS(snapshot_at(s, 6.0), OutOfRange);
}

TEST_CASE("cap marks truncation") {
  MutationContext ctx(LifespanMeasure::pure_birth(2.0), 0.1);
  auto s = simulate(ctx, 10.0, 5u, 100);
  CHECK(s.truncated);
  CHECK(s.births_total <= 100);
}

TEST_CASE("survival-conditioned sampling") {
  auto ctx = bd_quarter();
  CounterRng rng = CounterRng::for_stream(42, 0);
  for (int k = 0; k < 20; ++k) {
    double alive = survival_conditioned_statistic(
        ctx, 2.0,
        [](const PopulationSnapshot& s) {
          return static_cast<double>(s.alive.size());
        },
        rng, 8.0);
    CHECK(alive >= 1.0);  // survival to 8 implies a live lineage at 2
  }

  MutationContext sub(LifespanMeasure::exponential(1.0, 0.5), 0.25);
  CHECK_THROWS_AS(
      survival_conditioned_statistic(
          sub, 1.0, [](const PopulationSnapshot&) { return 0.0; }, rng),
      WrongRegime);
}

TEST_CASE("rejection acceptance rate approximates eta / b") {
  // P(alive at 6) = 0.5 / (1 - 0.5 e^{-6}), within noise of eta/b = 0.5
  auto ctx = bd_quarter();
  const int n = 2000;
  int accepted = 0;
  for (int r = 0; r < n; ++r) {
    CounterRng rng = CounterRng::for_stream(42, r);
    if (!simulate(ctx, 6.0, rng).alive.empty()) ++accepted;
  }
  double rate = static_cast<double>(accepted) / n;
  CHECK(std::fabs(rate - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

}  // TEST_SUITE
