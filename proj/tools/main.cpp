// Command-line front end: scale, limits, spectrum, mutation, kappa,
// simulate and validate subcommands over the splittree core library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splittree/config.hpp"
#include "splittree/errors.hpp"
#include "splittree/montecarlo.hpp"
#include "splittree/mutation.hpp"
#include "splittree/scale.hpp"
#include "splittree/simulate.hpp"
#include "splittree/spectrum.hpp"

namespace {

using namespace splittree;

// Locale-independent, 9 significant digits.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct OutputFile {
  std::ofstream file;
  std::ostream* stream = nullptr;

  explicit OutputFile(const std::string& path) {
    if (path == "-") {
      stream = &std::cout;
    } else {
      file.open(path);
      if (!file) throw InvalidConfig("cannot open output file: " + path);
      stream = &file;
    }
  }
  std::ostream& out() { return *stream; }
};

// Measure flags shared by every subcommand.
struct MeasureFlags {
  std::string family;
  double d = 0.0, k = 0.0, r = 0.0, c = 0.0, b = 0.0;
  double p = -1.0;
  std::string config_path;

  void attach(CLI::App* cmd, bool with_p = true) {
    cmd->add_option("--family", family,
                    "Lifespan family: exponential|pure_birth|gamma|uniform");
    cmd->add_option("--d", d, "Exponential lifespan rate d");
    cmd->add_option("--k", k, "Gamma shape k");
    cmd->add_option("--r", r, "Gamma rate r");
    cmd->add_option("--c", c, "Uniform lifespan upper bound c");
    cmd->add_option("--b", b, "Birth rate b (total mass of the measure)");
    if (with_p)
      cmd->add_option("--p", p, "Per-birth mutation probability in (0,1)");
    cmd->add_option("--config", config_path,
                    "JSON config file (flags override its keys)");
  }

  void merge_into(RunConfig& cfg) const {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (!family.empty()) {
      if (!(b > 0.0))
        throw InvalidConfig("flag --b is required with --family");
      if (family == "exponential")
        cfg.measure = LifespanMeasure::exponential(d, b);
      else if (family == "pure_birth")
        cfg.measure = LifespanMeasure::pure_birth(b);
      else if (family == "gamma")
        cfg.measure = LifespanMeasure::gamma(k, r, b);
      else if (family == "uniform")
        cfg.measure = LifespanMeasure::uniform_life(c, b);
      else
        throw InvalidConfig("unknown --family \"" + family + "\"");
    }
    if (p >= 0.0) {
      if (!(p > 0.0 && p < 1.0))
        throw InvalidConfig("flag --p must lie in (0,1)");
      cfg.mutation_prob = p;
    }
  }
};

int run_scale(const RunConfig& cfg, int stride) {
  ScaleGrid grid = solve_scale(cfg.require_measure(), cfg.horizon, cfg.step);
  OutputFile o(cfg.output);
  o.out() << "t,W,Wprime\n";
  for (std::size_t kk = 0; kk < grid.size(); kk += stride)
    o.out() << num(static_cast<double>(kk) * grid.step) << ','
            << num(grid.values[kk]) << ',' << num(grid.derivatives[kk])
            << '\n';
  return 0;
}

int run_limits(const RunConfig& cfg) {
  nlohmann::json out;
  const LifespanMeasure& m = cfg.require_measure();
  LimitConstants lc = growth_constants(m);
  auto regime_name = [](Regime rg) {
    switch (rg) {
      case Regime::kSupercritical: return "supercritical";
      case Regime::kCritical: return "critical";
      case Regime::kSubcritical: return "subcritical";
    }
    return "";
  };
  out["regime"] = regime_name(lc.regime);
  out["eta"] = lc.eta;
  if (lc.has_eta_tilde) out["eta_tilde"] = lc.eta_tilde;
  out["psi_prime_at_root"] = lc.psi_prime_at_root;
  out["w_growth_constant"] = lc.w_growth_constant;
  out["wprime_growth_constant"] = lc.wprime_growth_constant;
  out["extinction_probability"] = extinction_probability(m);
  if (cfg.mutation_prob) {
    MutationContext ctx = cfg.context();
    LimitConstants lcc = growth_constants(ctx.clonal_measure());
    out["clonal"] = {{"regime", regime_name(lcc.regime)},
                     {"eta_c", lcc.eta},
                     {"psi_c_prime_at_root", lcc.psi_prime_at_root}};
  }
  OutputFile o(cfg.output);
  o.out() << out.dump(2) << '\n';
  return 0;
}

int run_spectrum(const RunConfig& cfg, int i_min, int i_max, double a,
                 double t) {
  MutationContext ctx = cfg.context();
  double horizon = std::max(cfg.horizon, t);
  ScaleGrid grid_w = solve_scale(ctx.measure, horizon, cfg.step);
  ScaleGrid grid_wc = clonal_grid(ctx, horizon, cfg.step);
  double eta = malthusian(ctx.measure);

  OutputFile o(cfg.output);
  o.out() << "i,a,t,expected,limit_constant,fraction_limit\n";
  for (int i = i_min; i <= i_max; ++i) {
    SpectrumQuery q{i, a, t};
    double expected = expected_spectrum(grid_w, grid_wc, ctx, q);
    double limit_constant = std::nan("");
    double fraction = std::nan("");
    if (eta > 0.0) {
      try {
        SpectrumLimits lim = spectrum_limits(ctx, grid_wc, i, a, cfg.tolerance);
        limit_constant = lim.mean_limit;
        fraction = lim.fraction_limit;
      } catch (const HorizonTooShort&) {
        // leave NaN: the grid horizon cannot certify the improper tails
      }
    }
    o.out() << i << ',' << num(a) << ',' << num(t) << ',' << num(expected)
            << ',' << num(limit_constant) << ',' << num(fraction) << '\n';
  }
  return 0;
}

int run_mutation(const RunConfig& cfg, int i_max, double t) {
  MutationContext ctx = cfg.context();
  double horizon = std::max(cfg.horizon, t);
  ScaleGrid grid_wc = clonal_grid(ctx, horizon, cfg.step);

  OutputFile o(cfg.output);
  o.out() << "i,t,E_K,E_L,eta_p,leading_coeff\n";
  for (int i = 0; i <= i_max; ++i) {
    double ek = expected_K(ctx, grid_wc, i, t);
    double el = expected_L(ctx, grid_wc, i, t);
    KAsymptotics ka = K_asymptotics(ctx, i);
    o.out() << i << ',' << num(t) << ',' << num(ek) << ',' << num(el) << ','
            << num(ka.eta_p) << ',' << num(ka.leading_coefficient) << '\n';
  }
  return 0;
}

int run_kappa(const RunConfig& cfg, int i) {
  MutationContext ctx = cfg.context();
  KappaLaw law = kappa_law(ctx, i);
  double residual_max = 0.0;
  for (double a = 1e-2; a <= 1e2 * (1.0 + 1e-12); a *= std::pow(10.0, 0.25))
    residual_max =
        std::max(residual_max, kappa_fixed_point_residual(ctx, i, a));
  nlohmann::json out = {{"i", i},
                        {"atom_prob", law.atom_prob},
                        {"conditional_mean", law.conditional_mean},
                        {"theta", law.theta},
                        {"mean", law.mean},
                        {"residual_max", residual_max}};
  OutputFile o(cfg.output);
  o.out() << out.dump(2) << '\n';
  return 0;
}

int run_simulate(const RunConfig& cfg, const std::string& registry_path) {
  MutationContext ctx = cfg.context();
  PopulationSnapshot snap = simulate(ctx, cfg.horizon, cfg.seed, cfg.cap);
  OutputFile o(cfg.output);
  o.out() << "individual,parent,birth,death,allele,allele_type,allele_origin\n";
  for (const Individual& ind : snap.individuals) {
    const AlleleRecord& rec = snap.allele_registry[ind.allele];
    o.out() << ind.id << ',' << ind.parent << ',' << num(ind.birth_time) << ','
            << num(ind.death_time) << ',' << ind.allele << ',' << rec.type
            << ',' << num(rec.origin_time) << '\n';
  }
  if (!registry_path.empty()) {
    OutputFile reg(registry_path);
    reg.out() << "allele,origin,type,parent_allele\n";
    for (const AlleleRecord& rec : snap.allele_registry)
      reg.out() << rec.id << ',' << num(rec.origin_time) << ',' << rec.type
                << ',' << rec.parent_allele << '\n';
  }
  std::cerr << "alive=" << snap.alive.size() << " born=" << snap.births_total
            << " truncated=" << (snap.truncated ? 1 : 0) << '\n';
  return 0;
}

int run_validate(RunConfig cfg, const std::string& suite) {
  if (suite != "core")
    throw InvalidConfig("unknown validation suite \"" + suite + "\"");
  // The core suite pins its own model so that theory values are exact.
  if (!cfg.measure) cfg.measure = LifespanMeasure::exponential(1.0, 2.0);
  if (!cfg.mutation_prob) cfg.mutation_prob = 0.25;
  MutationContext ctx = cfg.context();

  ScaleGrid grid_w = solve_scale(ctx.measure, 4.0, cfg.step);
  ScaleGrid grid_wc = clonal_grid(ctx, 4.0, cfg.step);
  GeometricLaw law1 = marginal(grid_w, 1.0);

  struct Row {
    std::string check;
    double theory;
    double estimate;
    double se;
    double z;
    bool pass;
  };
  std::vector<Row> rows;
  auto add = [&rows](const std::string& name, const ComparisonReport& r) {
    rows.push_back({name, r.theory_value, r.estimate.mean,
                    r.estimate.standard_error, r.z_score, r.pass});
  };

  auto alive_count = [](const PopulationSnapshot& s) {
    return static_cast<double>(s.alive.size());
  };
  add("mean_alive_t1",
      compare(estimate(ctx, 1.0, alive_count, "mean_alive_t1", cfg.replicates,
                       cfg.seed, cfg.cap),
              law1.mean));
  add("extinct_by_1",
      compare(estimate(
                  ctx, 1.0,
                  [](const PopulationSnapshot& s) {
                    return s.alive.empty() ? 1.0 : 0.0;
                  },
                  "extinct_by_1", cfg.replicates, cfg.seed + 1, cfg.cap),
              law1.p_zero));
  add("spectrum_M1_a1_t2",
      compare(estimate(
                  ctx, 2.0,
                  [](const PopulationSnapshot& s) {
                    return static_cast<double>(
                        snapshot_spectrum(s, 1.0).size_count(1));
                  },
                  "spectrum_M1_a1_t2", cfg.replicates, cfg.seed + 2, cfg.cap),
              expected_spectrum(grid_w, grid_wc, ctx, SpectrumQuery{1, 1.0, 2.0})));
  add("K1_t2", compare(estimate(
                           ctx, 2.0,
                           [](const PopulationSnapshot& s) {
                             TypeCounts tc = snapshot_type_counts(s);
                             return tc.individuals_by_type.size() > 1
                                        ? static_cast<double>(
                                              tc.individuals_by_type[1])
                                        : 0.0;
                           },
                           "K1_t2", cfg.replicates, cfg.seed + 3, cfg.cap),
                       expected_K(ctx, grid_wc, 1, 2.0)));
  add("L1_t2", compare(estimate(
                           ctx, 2.0,
                           [](const PopulationSnapshot& s) {
                             TypeCounts tc = snapshot_type_counts(s);
                             return tc.alleles_by_type.size() > 1
                                        ? static_cast<double>(
                                              tc.alleles_by_type[1])
                                        : 0.0;
                           },
                           "L1_t2", cfg.replicates, cfg.seed + 4, cfg.cap),
                       expected_L(ctx, grid_wc, 1, 2.0)));

  // Goodness of fit of the t=1 population-size marginal.
  {
    std::vector<std::uint64_t> sizes;
    sizes.reserve(cfg.replicates);
    for (std::uint64_t rep = 0; rep < cfg.replicates; ++rep) {
      CounterRng rng = CounterRng::for_stream(cfg.seed + 5, rep);
      PopulationSnapshot s = simulate(ctx, 1.0, rng, cfg.cap);
      if (!s.truncated) sizes.push_back(s.alive.size());
    }
    double p_value = geometric_gof(sizes, law1.success, law1.p_zero);
    rows.push_back({"marginal_gof_t1", 0.01, p_value, 0.0, 0.0,
                    p_value > 0.01});
  }

  OutputFile o(cfg.output);
  o.out() << "check,theory,estimate,se,z,pass\n";
  bool all_pass = true;
  for (const Row& row : rows) {
    all_pass = all_pass && row.pass;
    o.out() << row.check << ',' << num(row.theory) << ',' << num(row.estimate)
            << ',' << num(row.se) << ',' << num(row.z) << ','
            << (row.pass ? "1" : "0") << '\n';
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Deterministic numerics and exact simulation for splitting trees "
      "with neutral mutations at birth"};
  app.require_subcommand(1);

  RunConfig cfg;
  MeasureFlags flags;

  auto* scale_cmd = app.add_subcommand(
      "scale", "Tabulate the scale function W and W' (CSV t,W,Wprime)");
  int stride = 1;
  flags.attach(scale_cmd, false);
  scale_cmd->add_option("--horizon", cfg.horizon, "Grid horizon T");
  scale_cmd->add_option("--step", cfg.step, "Grid step h (h*b <= 0.05)");
  scale_cmd->add_option("--stride", stride, "Emit every k-th grid node");
  scale_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* limits_cmd = app.add_subcommand(
      "limits", "Malthusian root, regime and growth constants (JSON)");
  flags.attach(limits_cmd);
  limits_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* spectrum_cmd = app.add_subcommand(
      "spectrum",
      "Expected frequency spectrum E[M_t^{i,a}] with limit constants (CSV)");
  int i_min = 1, i_max = 1;
  double sp_a = 0.0, sp_t = 1.0;
  flags.attach(spectrum_cmd);
  spectrum_cmd->add_option("--i", i_min, "Smallest family size i");
  spectrum_cmd->add_option("--i-max", i_max, "Largest family size i");
  spectrum_cmd->add_option("--a", sp_a, "Age cutoff a (0 <= a <= t)");
  spectrum_cmd->add_option("--t", sp_t, "Observation time t");
  spectrum_cmd->add_option("--horizon", cfg.horizon, "Grid horizon");
  spectrum_cmd->add_option("--step", cfg.step, "Grid step h");
  spectrum_cmd->add_option("--tolerance", cfg.tolerance,
                           "Improper-integral truncation tolerance");
  spectrum_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* mutation_cmd = app.add_subcommand(
      "mutation",
      "Expected mutation-type counts E[K_i(t)], E[L_i(t)] and growth "
      "constants (CSV)");
  int mu_imax = 3;
  double mu_t = 1.0;
  flags.attach(mutation_cmd);
  mutation_cmd->add_option("--i-max", mu_imax, "Largest type index");
  mutation_cmd->add_option("--t", mu_t, "Observation time t");
  mutation_cmd->add_option("--horizon", cfg.horizon, "Grid horizon");
  mutation_cmd->add_option("--step", cfg.step, "Grid step h");
  mutation_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* kappa_cmd = app.add_subcommand(
      "kappa",
      "Mixture law of the scaled type-i carrier count limit and its "
      "Laplace fixed-point residual (JSON)");
  int kappa_i = 1;
  flags.attach(kappa_cmd);
  kappa_cmd->add_option("--i", kappa_i, "Type index i");
  kappa_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "One exact realization up to --horizon (CSV chronology)");
  std::string registry_path;
  flags.attach(simulate_cmd);
  simulate_cmd->add_option("--horizon", cfg.horizon, "Simulation horizon");
  simulate_cmd->add_option("--seed", cfg.seed, "RNG seed");
  simulate_cmd->add_option("--cap", cfg.cap, "Ever-born population cap");
  simulate_cmd->add_option("--registry-out", registry_path,
                           "Also write the allele registry CSV here");
  simulate_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  auto* validate_cmd = app.add_subcommand(
      "validate",
      "Monte Carlo vs analytic validation suite (CSV report; exit 1 on "
      "failure)");
  std::string suite = "core";
  flags.attach(validate_cmd);
  validate_cmd->add_option("--suite", suite, "Suite name (core)");
  validate_cmd->add_option("--seed", cfg.seed, "Master seed");
  validate_cmd->add_option("--replicates", cfg.replicates,
                           "Replicates per check");
  validate_cmd->add_option("--step", cfg.step, "Grid step h");
  validate_cmd->add_option("--out", cfg.output, "Output path or - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    flags.merge_into(cfg);
    if (scale_cmd->parsed()) return run_scale(cfg, stride);
    if (limits_cmd->parsed()) return run_limits(cfg);
    if (spectrum_cmd->parsed())
      return run_spectrum(cfg, i_min, i_max, sp_a, sp_t);
    if (mutation_cmd->parsed()) return run_mutation(cfg, mu_imax, mu_t);
    if (kappa_cmd->parsed()) return run_kappa(cfg, kappa_i);
    if (simulate_cmd->parsed()) return run_simulate(cfg, registry_path);
    if (validate_cmd->parsed()) return run_validate(cfg, suite);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
