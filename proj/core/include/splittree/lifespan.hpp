#pragma once

#include <string>

#include "splittree/rng.hpp"

namespace splittree {

enum class Family {
  kExponential,  // lifespan law Exp(d)
  kPureBirth,    // all mass at +infinity (Yule case)
  kGamma,        // Gamma(shape, rate)
  kUniformLife,  // Uniform(0, upper)
};

// The lifespan measure: a finite measure on (0, +inf] with total mass b.
// The normalized law birth-rate-free part is one of the four parametric
// families above.  Immutable after construction.
class LifespanMeasure {
 public:
  static LifespanMeasure exponential(double d, double b);
  static LifespanMeasure pure_birth(double b);
  static LifespanMeasure gamma(double shape, double rate, double b);
  static LifespanMeasure uniform_life(double upper, double b);

  Family family() const { return family_; }
  double birth_rate() const { return b_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  // Mass of (t, +inf]; equals birth_rate() at t = 0.
  double tail_mass(double t) const;

  // Density of the measure on (0, inf); identically 0 for the pure-birth
  // case whose mass sits at +infinity.
  double density(double t) const;

  // First and second moments of the measure (not of the normalized law);
  // both +inf for pure birth.
  double mean() const;
  double second_moment() const;

  // Branching mechanism: psi(lambda) = lambda - int (1 - e^{-lambda r}) L(dr)
  // and its derivative, by the per-family closed forms.  Throws
  // DivergentMoment when the exponential moment diverges at lambda.
  double psi(double lambda) const;
  double psi_derivative(double lambda) const;

  // Lower end of the open domain of psi (largest lambda at which the
  // exponential moment diverges); -inf when psi is entire.
  double psi_domain_min() const;

  // One draw from the normalized lifespan law; +inf for pure birth.
  double sample_lifespan(CounterRng& rng) const;

  // Measure scaled by a positive factor (same normalized law).
  LifespanMeasure scaled(double factor) const;

  std::string describe() const;

 private:
  LifespanMeasure(Family family, double b, double p1, double p2);

  Family family_;
  double b_;
  double p1_;
  double p2_;
};

// A lifespan measure together with the per-birth mutation probability.
struct MutationContext {
  LifespanMeasure measure;
  double mutation_prob;

  MutationContext(LifespanMeasure m, double p);

  // Lifespan measure of the clonal subtree, (1-p) * Lambda.
  LifespanMeasure clonal_measure() const {
    return measure.scaled(1.0 - mutation_prob);
  }
  double clonal_birth_rate() const {
    return (1.0 - mutation_prob) * measure.birth_rate();
  }

  double psi_c(double lambda) const;
  double psi_c_derivative(double lambda) const;
};

}  // namespace splittree
