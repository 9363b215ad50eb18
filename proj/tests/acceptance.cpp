// Acceptance suite: one PASS/FAIL line per criterion, exit status is the
// number of failed criteria.  Everything runs from the fixed seed 42.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "splittree/montecarlo.hpp"
#include "splittree/mutation.hpp"
#include "splittree/quadrature.hpp"
#include "splittree/scale.hpp"
#include "splittree/simulate.hpp"
#include "splittree/spectrum.hpp"

#include "property_suite.hpp"

using namespace splittree;

namespace {

constexpr std::uint64_t kSeed = 42;
int g_failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("%s  criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

MutationContext bd_quarter() {
  return {LifespanMeasure::exponential(1.0, 2.0), 0.25};
}

double grid_error(const ScaleGrid& g, double (*w)(double),
                  double (*wp)(double)) {
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double t = static_cast<double>(k) * g.step;
    worst = std::max(worst, std::fabs(g.values[k] / w(t) - 1.0));
    worst = std::max(worst, std::fabs(g.derivatives[k] / wp(t) - 1.0));
  }
  return worst;
}

double w_bd(double t) { return 2.0 * std::exp(t) - 1.0; }
double wp_bd(double t) { return 2.0 * std::exp(t); }
double w_yule(double t) { return std::exp(t); }

double alive_count(const PopulationSnapshot& s) {
  return static_cast<double>(s.alive.size());
}

// ---- criteria ----

void criterion_1() {
  auto bd = solve_scale(LifespanMeasure::exponential(1.0, 2.0), 10.0, 1e-3);
  double err_bd = grid_error(bd, w_bd, wp_bd);
  auto yule = solve_scale(LifespanMeasure::pure_birth(1.0), 10.0, 1e-3);
  double err_yule = grid_error(yule, w_yule, w_yule);
  report(1, "scale solver vs closed forms on [0,10]",
         err_bd <= 1e-5 && err_yule <= 1e-5,
         fmt("max rel err: birth-death %.2e, pure birth %.2e", err_bd,
             err_yule));
}

void criterion_2() {
  MutationContext quarter(LifespanMeasure::exponential(1.0, 2.0), 0.25);
  MutationContext half(LifespanMeasure::exponential(1.0, 2.0), 0.5);
  auto g1 = clonal_grid(quarter, 10.0, 1e-3);
  auto g2 = clonal_grid(half, 10.0, 1e-3);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    double x = static_cast<double>(k) * 1e-3;
    e1 = std::max(e1,
                  std::fabs(g1.values[k] / (3.0 * std::exp(0.5 * x) - 2.0) -
                            1.0));
    e2 = std::max(e2, std::fabs(g2.values[k] / (1.0 + x) - 1.0));
  }
  report(2, "clonal closed forms (p=1/4 and p=1/2)", e1 <= 1e-5 && e2 <= 1e-5,
         fmt("max rel err: %.2e and %.2e", e1, e2));
}

void criterion_3() {
  auto super = solve_scale(LifespanMeasure::exponential(1.0, 2.0), 20.0, 1e-3);
  double dev_super = std::fabs(std::exp(-20.0) * super.w(20.0) * 0.5 - 1.0);

  MutationContext half(LifespanMeasure::exponential(1.0, 2.0), 0.5);
  auto crit = clonal_grid(half, 10.0, 1e-3);
  double dev_crit = std::fabs(crit.w_prime(10.0) - 1.0);

  auto sub = solve_scale(LifespanMeasure::exponential(1.0, 0.5), 20.0, 1e-3);
  double dev_sub_w = std::fabs(sub.w(20.0) - 2.0);
  double dev_sub_wp = std::fabs(std::exp(10.0) * sub.w_prime(20.0) / 0.5 - 1.0);

  report(3, "growth constants at long horizons",
         dev_super <= 1e-3 && dev_crit <= 1e-4 && dev_sub_w <= 1e-3 &&
             dev_sub_wp <= 1e-2,
         fmt("super %.2e, critical %.2e, sub %.2e", dev_super, dev_crit,
             std::max(dev_sub_w, dev_sub_wp)));
}

void criterion_4() {
  auto ctx = bd_quarter();
  auto grid = solve_scale(ctx.measure, 1.0, 1e-3);
  GeometricLaw law = marginal(grid, 1.0);
  const std::uint64_t n = 10'000;

  auto mean_rep = compare(
      estimate(ctx, 1.0, alive_count, "|alive(1)|", n, kSeed),
      std::exp(1.0));
  auto ext_rep = compare(
      estimate(
          ctx, 1.0,
          [](const PopulationSnapshot& s) {
            return s.alive.empty() ? 1.0 : 0.0;
          },
          "extinct-by-1", n, kSeed),
      law.p_zero);

  std::vector<std::uint64_t> samples;
  samples.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    CounterRng rng = CounterRng::for_stream(kSeed, r);
    samples.push_back(simulate(ctx, 1.0, rng).alive.size());
  }
  double p_value = geometric_gof(samples, law.success, law.p_zero);

  report(4, "marginal law at t=1 (mean, extinction, GOF)",
         mean_rep.pass && ext_rep.pass && p_value > 0.01,
         fmt("z_mean=%.2f z_ext=%.2f gof_p=%.3f", mean_rep.z_score,
             ext_rep.z_score, p_value));
}

void criterion_5() {
  auto ctx = bd_quarter();
  auto gw = solve_scale(ctx.measure, 2.0, 1e-3);
  auto gwc = clonal_grid(ctx, 2.0, 1e-3);
  bool ok = true;
  std::string detail;
  for (int i = 1; i <= 3; ++i) {
    double theory = expected_spectrum(gw, gwc, ctx, {i, 1.0, 2.0});
    auto rep = compare(
        estimate(
            ctx, 2.0,
            [i](const PopulationSnapshot& s) {
              return static_cast<double>(snapshot_spectrum(s, 1.0)
                                             .size_count(i));
            },
            "M(i,1,2)", 10'000, kSeed),
        theory);
    ok = ok && rep.pass;
    char buf[32];
    std::snprintf(buf, sizeof buf, "z%d=%.2f ", i, rep.z_score);
    detail += buf;
  }

  // hand-built snapshot with carrier multiplicities 2,1,3,2,1,1
  PopulationSnapshot s;
  s.time = 10.0;
  s.allele_registry = {{0, 0.0, 0, -1}, {1, 6.0, 1, 0}, {2, 7.0, 1, 0},
                       {3, 2.0, 1, 0},  {4, 8.0, 2, 3}, {5, 7.5, 2, 1}};
  std::uint64_t carriers[] = {1, 1, 2, 0, 0, 0, 3, 3, 4, 5};
  std::uint64_t id = 0;
  for (auto a : carriers) s.alive.emplace_back(id++, a);
  auto full = snapshot_spectrum(s, 10.0);
  auto young = snapshot_spectrum(s, 5.0);
  bool fixture = full.size_count(1) == 3 && full.size_count(2) == 2 &&
                 full.size_count(3) == 1 && full.size_count(4) == 0 &&
                 young.size_count(1) == 3 && young.size_count(2) == 1 &&
                 young.size_count(3) == 0;
  ok = ok && fixture;
  detail += fixture ? "fixture ok" : "fixture WRONG";
  report(5, "expected spectrum vs Monte Carlo; textbook fixture", ok, detail);
}

void criterion_6() {
  MutationContext ctx(LifespanMeasure::pure_birth(1.0), 0.3);
  auto gwc = clonal_grid(ctx, 22.0, 1e-3);
  double eta = malthusian(ctx.measure);
  double j = limit_J(gwc, eta, kAllFamilySizes, kInfiniteAge);
  double j1 = limit_J(gwc, eta, 1, kInfiniteAge);
  double frac = size_fraction_limit(gwc, eta, 1);
  double e_j = std::fabs(j - 0.7);
  double e_j1 = std::fabs(j1 - 0.7 / 1.7);
  double e_f = std::fabs(frac - 1.0 / 1.7);

  auto rep = compare(
      estimate(
          ctx, 8.0,
          [](const PopulationSnapshot& s) {
            auto table = snapshot_spectrum(s, s.time);
            return static_cast<double>(table.size_count(1)) /
                   static_cast<double>(table.total_alleles());
          },
          "M1/M at t=8", 1'000, kSeed),
      1.0 / 1.7);

  report(6, "pure-birth spectrum limits and size fraction",
         e_j <= 1e-6 && e_j1 <= 1e-6 && e_f <= 1e-6 && rep.pass,
         fmt("|dJ|=%.1e |dJ1|=%.1e |dfrac|=%.1e", e_j, e_j1, e_f) +
             fmt(", z=%.2f", rep.z_score));
}

void criterion_7() {
  MutationContext yule(LifespanMeasure::pure_birth(1.0), 0.3);
  auto gy = clonal_grid(yule, 2.0, 1e-3);
  double k1 = expected_K(yule, gy, 1, 2.0);
  double k2 = expected_K(yule, gy, 2, 2.0);
  double e_k1 = std::fabs(k1 / (0.6 * std::exp(1.4)) - 1.0);
  double e_k2 = std::fabs(k2 / (0.18 * std::exp(1.4)) - 1.0);

  auto ctx = bd_quarter();
  auto gwc = clonal_grid(ctx, 2.0, 1e-3);
  double theory_k = expected_K(ctx, gwc, 1, 2.0);
  double theory_l = expected_L(ctx, gwc, 1, 2.0);

  auto type_stat = [](int i, bool alleles) {
    return [i, alleles](const PopulationSnapshot& s) {
      auto counts = snapshot_type_counts(s);
      const auto& v =
          alleles ? counts.alleles_by_type : counts.individuals_by_type;
      return static_cast<std::size_t>(i) < v.size()
                 ? static_cast<double>(v[i])
                 : 0.0;
    };
  };
  const std::uint64_t n = 10'000;
  auto rep_k = compare(estimate(ctx, 2.0, type_stat(1, false), "K1(2)", n,
                                kSeed),
                       theory_k);
  auto rep_l = compare(estimate(ctx, 2.0, type_stat(1, true), "L1(2)", n,
                                kSeed),
                       theory_l);

  // pathwise conservation over the same replicate streams
  std::uint64_t broken = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    CounterRng rng = CounterRng::for_stream(kSeed, r);
    auto s = simulate(ctx, 2.0, rng);
    auto counts = snapshot_type_counts(s);
    std::uint64_t total = 0;
    for (auto k : counts.individuals_by_type) total += k;
    if (total != s.alive.size()) ++broken;
  }

  report(7, "mutation moments: grids, Monte Carlo, conservation",
         e_k1 <= 1e-4 && e_k2 <= 1e-4 && rep_k.pass && rep_l.pass &&
             broken == 0,
         fmt("rel err K1 %.1e K2 %.1e", e_k1, e_k2) +
             fmt(", zK=%.2f zL=%.2f", rep_k.z_score, rep_l.z_score) +
             fmt(", broken=%g", static_cast<double>(broken)));
}

void criterion_8() {
  MutationContext yule(LifespanMeasure::pure_birth(1.0), 0.3);
  auto gy = clonal_grid(yule, 30.0, 1e-3);
  bool yule_ok = true;
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i) {
    // W_c' = 0.7 e^{0.7t}: C = eta_c / psi_c'(eta_c) = 0.7
    double dev = convolution_limit_check(gy.derivatives, gy.step, i + 1, -0.7,
                                         0.7, 30.0);
    worst = std::max(worst, dev);
    yule_ok = yule_ok && dev <= 1e-4;
  }

  // Birth-death: the convolution identity is exact in t (W_c' is a single
  // exponential), so the deviations measure grid error only; require the
  // 2% bound and no growth beyond noise under t-doubling.
  auto ctx = bd_quarter();
  auto gwc = clonal_grid(ctx, 30.0, 1e-3);
  double d1 = convolution_limit_check(gwc.derivatives, gwc.step, 2, -0.5, 1.5,
                                      7.5);
  double d2 = convolution_limit_check(gwc.derivatives, gwc.step, 2, -0.5, 1.5,
                                      15.0);
  double d3 = convolution_limit_check(gwc.derivatives, gwc.step, 2, -0.5, 1.5,
                                      30.0);
  bool bd_ok = d3 <= 0.02 && d3 <= std::max(d1, d2) + 1e-4;

  report(8, "convolution-power asymptotics", yule_ok && bd_ok,
         fmt("pure-birth worst %.1e", worst) +
             fmt("; birth-death %.1e -> %.1e -> %.1e", d1, d2, d3));
}

void criterion_9() {
  auto ctx = bd_quarter();
  auto law = kappa_law(ctx, 1);
  double worst = 0.0;
  // Any normalized mixture has phi(0) = 1, so every law's residual decays
  // to 0 as a -> 0; the control is detected through the grid maximum, the
  // same functional the true-law bound uses.
  double worst_perturbed = 0.0;
  for (double a = 1e-2; a <= 1e2 * (1.0 + 1e-9);
       a *= std::pow(10.0, 0.25)) {
    worst = std::max(worst, kappa_fixed_point_residual(ctx, 1, a));
    worst_perturbed = std::max(
        worst_perturbed,
        kappa_fixed_point_residual(ctx, 1, a, 1.1 * law.theta));
  }
  bool fp_ok = worst <= 1e-8;
  bool control_ok = worst_perturbed >= 1e-4;

  auto k8 = kappa_empirical(ctx, 1, 8.0, 2'000, kSeed);
  auto k12 = kappa_empirical(ctx, 1, 12.0, 500, kSeed);
  double atom_dev = std::fabs(k12.atom_freq - law.atom_prob);
  double mean_dev = std::fabs(k12.conditional_mean / law.conditional_mean -
                              1.0);
  bool mc_ok = atom_dev <= 0.05 && mean_dev <= 0.10;
  // approach diagnostic: the t=12 summary should sit no further from the
  // limit than the t=8 one, up to sampling noise
  double slack_atom = 2.0 * (k8.atom_freq_se + k12.atom_freq_se);
  double slack_mean = 2.0 * (k8.conditional_mean_se + k12.conditional_mean_se) /
                      law.conditional_mean;
  bool approach_ok =
      atom_dev <= std::fabs(k8.atom_freq - law.atom_prob) + slack_atom &&
      mean_dev <= std::fabs(k8.conditional_mean / law.conditional_mean - 1.0) +
                      slack_mean;

  report(9, "kappa mixture: fixed point, negative control, Monte Carlo",
         fp_ok && control_ok && mc_ok && approach_ok,
         fmt("residual %.1e, control %.1e", worst, worst_perturbed) +
             fmt(", atom %.3f vs 0.667", k12.atom_freq) +
             fmt(", cond mean %.3f vs 1.5", k12.conditional_mean) +
             (approach_ok ? "" : ", approach violated"));
}

void criterion_10() {
  int violations = splittree_tests::run_property_suite(kSeed, 200, false);
  report(10, "randomized property suite (200 configs)", violations == 0,
         fmt("%g violations", static_cast<double>(violations)));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d/10 criteria passed\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              10 - g_failures);
  return g_failures;
}
