#include "splittree/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "splittree/errors.hpp"
#include "splittree/scale.hpp"
#include "splittree/special.hpp"

namespace splittree {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs one simulation per replicate index and stores f(snapshot) at that
// index (NaN marks a truncated replicate).  Chunked across threads; the
// output vector is indexed by replicate, so aggregation order is fixed.
std::vector<double> run_replicates(
    const MutationContext& ctx, double horizon,
    const std::function<double(const PopulationSnapshot&)>& stat,
    std::uint64_t replicates, std::uint64_t seed, std::uint64_t cap,
    unsigned threads) {
  std::vector<double> out(replicates, kNaN);
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<std::uint64_t>(threads, replicates);

  auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t r = lo; r < hi; ++r) {
      CounterRng rng = CounterRng::for_stream(seed, r);
      PopulationSnapshot s = simulate(ctx, horizon, rng, cap);
      if (!s.truncated) out[r] = stat(s);
    }
  };

  if (threads == 1) {
    worker(0, replicates);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (replicates + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      std::uint64_t lo = w * chunk;
      std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, replicates);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace

Estimate estimate(const MutationContext& ctx, double horizon,
                  const std::function<double(const PopulationSnapshot&)>& stat,
                  const std::string& name, std::uint64_t replicates,
                  std::uint64_t seed, std::uint64_t cap, unsigned threads) {
  if (replicates < 2) throw InvalidConfig("estimate needs >= 2 replicates");
  std::vector<double> samples =
      run_replicates(ctx, horizon, stat, replicates, seed, cap, threads);

  Estimate e;
  e.statistic = name;
  double sum = 0.0;
  for (double x : samples) {
    if (std::isnan(x)) {
      ++e.excluded_truncated;
      continue;
    }
    ++e.n;
    sum += x;
  }
  if (e.n < 2) throw InvalidConfig("fewer than 2 non-truncated replicates");
  e.mean = sum / static_cast<double>(e.n);
  double ss = 0.0;
  for (double x : samples) {
    if (std::isnan(x)) continue;
    ss += (x - e.mean) * (x - e.mean);
  }
  double stdev = std::sqrt(ss / static_cast<double>(e.n - 1));
  e.standard_error = stdev / std::sqrt(static_cast<double>(e.n));
  return e;
}

ComparisonReport compare(const Estimate& e, double theory, double threshold) {
  ComparisonReport r;
  r.estimate = e;
  r.theory_value = theory;
  if (e.standard_error == 0.0) {
    if (e.mean != theory)
      throw ZeroVariance("zero standard error with mean != theory");
    r.z_score = 0.0;
  } else {
    r.z_score = (e.mean - theory) / e.standard_error;
  }
  r.pass = std::fabs(r.z_score) <= threshold;
  return r;
}

double geometric_gof(const std::vector<std::uint64_t>& samples, double success,
                     double p_zero) {
  if (samples.size() < 500)
    throw TooFewSamples("geometric_gof needs at least 500 samples");
  auto n = static_cast<double>(samples.size());

  // Observed counts per value, then pooled from the top so each expected
  // count is at least 5.
  std::uint64_t max_value = 0;
  for (auto s : samples) max_value = std::max(max_value, s);
  std::vector<double> observed(max_value + 1, 0.0);
  for (auto s : samples) observed[s] += 1.0;

  auto prob = [&](std::uint64_t k) {
    if (k == 0) return p_zero;
    return (1.0 - p_zero) * std::pow(1.0 - success, static_cast<double>(k - 1)) *
           success;
  };

  std::vector<double> obs_bins, exp_bins;
  double obs_acc = 0.0, exp_acc = 0.0, cum_prob = 0.0;
  for (std::uint64_t k = 0; k <= max_value; ++k) {
    double pk = prob(k);
    obs_acc += observed[k];
    exp_acc += n * pk;
    cum_prob += pk;
    double remaining = n * (1.0 - cum_prob);
    if (exp_acc >= 5.0 && remaining >= 5.0) {
      obs_bins.push_back(obs_acc);
      exp_bins.push_back(exp_acc);
      obs_acc = 0.0;
      exp_acc = 0.0;
    }
  }
  // closing bin also carries the analytic tail mass beyond max_value
  obs_bins.push_back(obs_acc);
  exp_bins.push_back(exp_acc + n * std::max(0.0, 1.0 - cum_prob));
  if (exp_bins.back() < 5.0 && exp_bins.size() >= 2) {
    exp_bins[exp_bins.size() - 2] += exp_bins.back();
    obs_bins[obs_bins.size() - 2] += obs_bins.back();
    exp_bins.pop_back();
    obs_bins.pop_back();
  }
  if (obs_bins.size() < 2)
    throw TooFewSamples("geometric_gof: not enough distinct bins");

  double stat = 0.0;
  for (std::size_t k = 0; k < obs_bins.size(); ++k) {
    double diff = obs_bins[k] - exp_bins[k];
    stat += diff * diff / exp_bins[k];
  }
  double df = static_cast<double>(obs_bins.size()) - 1.0;
  return chi_square_sf(stat, df);
}

KappaEmpirical kappa_empirical(const MutationContext& ctx, int i,
                               double t_probe, std::uint64_t replicates,
                               std::uint64_t seed, std::uint64_t cap,
                               unsigned threads) {
  LifespanMeasure clonal = ctx.clonal_measure();
  double eta_c = malthusian(clonal);
  if (!(eta_c > 0.0))
    throw WrongRegime("kappa_empirical requires a supercritical clonal tree");
  double scale = std::exp(-eta_c * t_probe) /
                 std::pow(t_probe, static_cast<double>(i));

  // The limit's atom at 0 is the event that the ancestral clonal family
  // dies out; at a finite probe time K_i(t) is typically still positive on
  // that event (it merely grows at a slower exponential rate), so K_i(t)=0
  // alone over-counts survivors.  Classify by clonal-side extinction — no
  // carrier of the ancestral allele alive at t — and smuggle that flag
  // through the scalar replicate channel as a sign bit (values are >= 0).
  auto stat = [&, i](const PopulationSnapshot& s) {
    TypeCounts counts = snapshot_type_counts(s);
    std::uint64_t k_i =
        static_cast<std::size_t>(i) < counts.individuals_by_type.size()
            ? counts.individuals_by_type[i]
            : 0;
    bool clonal_alive = !counts.individuals_by_type.empty() &&
                        counts.individuals_by_type[0] > 0;
    double x = static_cast<double>(k_i) * scale;
    return clonal_alive ? x : -1.0 - x;
  };
  std::vector<double> samples =
      run_replicates(ctx, t_probe, stat, replicates, seed, cap, threads);

  KappaEmpirical out;
  std::uint64_t atoms = 0;
  double sum = 0.0;
  std::vector<double> survivors;
  for (double x : samples) {
    if (std::isnan(x)) {
      ++out.excluded_truncated;
      continue;
    }
    ++out.n;
    if (x < 0.0) {
      ++atoms;
    } else {
      survivors.push_back(x);
      sum += x;
    }
  }
  if (out.n < 2 || survivors.size() < 2)
    throw TooFewSamples("kappa_empirical: too few usable replicates");

  double nn = static_cast<double>(out.n);
  out.atom_freq = static_cast<double>(atoms) / nn;
  out.atom_freq_se =
      std::sqrt(out.atom_freq * (1.0 - out.atom_freq) / nn);
  double m = sum / static_cast<double>(survivors.size());
  double ss = 0.0;
  for (double x : survivors) ss += (x - m) * (x - m);
  out.conditional_mean = m;
  out.conditional_mean_se =
      std::sqrt(ss / static_cast<double>(survivors.size() - 1)) /
      std::sqrt(static_cast<double>(survivors.size()));
  return out;
}

}  // namespace splittree
