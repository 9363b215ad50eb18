#include "splittree/lifespan.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "splittree/errors.hpp"
#include "splittree/special.hpp"

namespace splittree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exprel(x) = (e^x - 1)/x, stable near 0.
double exprel(double x) {
  if (std::fabs(x) < 1e-5) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
  return std::expm1(x) / x;
}

// (1 - (1 + x) e^{-x}) / x^2, stable near 0; appears in the uniform-life
// psi derivative.
double one_minus_1px_expmx_over_x2(double x) {
  if (std::fabs(x) < 1e-4) {
    // series: 1/2 - x/3 + x^2/8 - x^3/30
    return 0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0;
  }
  return (1.0 - (1.0 + x) * std::exp(-x)) / (x * x);
}

}  // namespace

LifespanMeasure::LifespanMeasure(Family family, double b, double p1, double p2)
    : family_(family), b_(b), p1_(p1), p2_(p2) {
  if (!(b > 0.0)) throw InvalidConfig("birth_rate b must be positive");
}

LifespanMeasure LifespanMeasure::exponential(double d, double b) {
  if (!(d > 0.0)) throw InvalidConfig("exponential rate d must be positive");
  return LifespanMeasure(Family::kExponential, b, d, 0.0);
}

LifespanMeasure LifespanMeasure::pure_birth(double b) {
  return LifespanMeasure(Family::kPureBirth, b, 0.0, 0.0);
}

LifespanMeasure LifespanMeasure::gamma(double shape, double rate, double b) {
  if (!(shape > 0.0)) throw InvalidConfig("gamma shape k must be positive");
  if (!(rate > 0.0)) throw InvalidConfig("gamma rate r must be positive");
  return LifespanMeasure(Family::kGamma, b, shape, rate);
}

LifespanMeasure LifespanMeasure::uniform_life(double upper, double b) {
  if (!(upper > 0.0)) throw InvalidConfig("uniform upper c must be positive");
  return LifespanMeasure(Family::kUniformLife, b, upper, 0.0);
}

double LifespanMeasure::tail_mass(double t) const {
  if (t < 0.0) throw OutOfRange("tail_mass: t must be nonnegative");
  switch (family_) {
    case Family::kExponential:
      return b_ * std::exp(-p1_ * t);
    case Family::kPureBirth:
      return b_;
    case Family::kGamma:
      return t == 0.0 ? b_ : b_ * gamma_q(p1_, p2_ * t);
    case Family::kUniformLife:
      return t >= p1_ ? 0.0 : b_ * (1.0 - t / p1_);
  }
  return 0.0;
}

double LifespanMeasure::density(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::kExponential:
      return b_ * p1_ * std::exp(-p1_ * t);
    case Family::kPureBirth:
      return 0.0;
    case Family::kGamma:
      return b_ * std::exp(p1_ * std::log(p2_) + (p1_ - 1.0) * std::log(t) -
                           p2_ * t - std::lgamma(p1_));
    case Family::kUniformLife:
      return t <= p1_ ? b_ / p1_ : 0.0;
  }
  return 0.0;
}

double LifespanMeasure::mean() const {
  switch (family_) {
    case Family::kExponential:
      return b_ / p1_;
    case Family::kPureBirth:
      return kInf;
    case Family::kGamma:
      return b_ * p1_ / p2_;
    case Family::kUniformLife:
      return b_ * p1_ / 2.0;
  }
  return 0.0;
}

double LifespanMeasure::second_moment() const {
  switch (family_) {
    case Family::kExponential:
      return 2.0 * b_ / (p1_ * p1_);
    case Family::kPureBirth:
      return kInf;
    case Family::kGamma:
      return b_ * p1_ * (p1_ + 1.0) / (p2_ * p2_);
    case Family::kUniformLife:
      return b_ * p1_ * p1_ / 3.0;
  }
  return 0.0;
}

double LifespanMeasure::psi_domain_min() const {
  switch (family_) {
    case Family::kExponential:
      return -p1_;
    case Family::kPureBirth:
      return 0.0;
    case Family::kGamma:
      return -p2_;
    case Family::kUniformLife:
      return -kInf;
  }
  return 0.0;
}

double LifespanMeasure::psi(double lambda) const {
  if (lambda == 0.0) return 0.0;  // psi(0+) = 0 for every family
  if (lambda <= psi_domain_min())
    throw DivergentMoment("psi: exponential moment diverges at lambda=" +
                          std::to_string(lambda));
  switch (family_) {
    case Family::kExponential:
      // lambda (lambda + d - b) / (lambda + d)
      return lambda * (lambda + p1_ - b_) / (lambda + p1_);
    case Family::kPureBirth:
      return lambda > 0.0 ? lambda - b_
                          : throw DivergentMoment(
                                "psi: pure birth requires lambda >= 0");
    case Family::kGamma:
      return lambda - b_ * (1.0 - std::pow(p2_ / (p2_ + lambda), p1_));
    case Family::kUniformLife: {
      // lambda - b + (b / (c lambda)) (1 - e^{-lambda c})
      double x = lambda * p1_;
      return lambda - b_ + b_ * exprel(-x);
    }
  }
  return 0.0;
}

double LifespanMeasure::psi_derivative(double lambda) const {
  if (lambda < psi_domain_min() ||
      (lambda == psi_domain_min() && family_ != Family::kPureBirth))
    throw DivergentMoment("psi_derivative: divergent at lambda=" +
                          std::to_string(lambda));
  switch (family_) {
    case Family::kExponential:
      return 1.0 - b_ * p1_ / ((lambda + p1_) * (lambda + p1_));
    case Family::kPureBirth:
      // 1 - int r e^{-lambda r} L(dr): the mass at +inf contributes 0 for
      // lambda > 0 and -inf at lambda = 0 (1 - m with m = inf).
      return lambda > 0.0 ? 1.0 : -kInf;
    case Family::kGamma:
      return 1.0 - b_ * p1_ * std::pow(p2_, p1_) /
                       std::pow(p2_ + lambda, p1_ + 1.0);
    case Family::kUniformLife: {
      double x = lambda * p1_;
      return 1.0 - b_ * p1_ * one_minus_1px_expmx_over_x2(x);
    }
  }
  return 0.0;
}

double LifespanMeasure::sample_lifespan(CounterRng& rng) const {
  switch (family_) {
    case Family::kExponential:
      return rng.exponential(p1_);
    case Family::kPureBirth:
      return kInf;
    case Family::kGamma: {
      // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
      double k = p1_;
      double boost = 1.0;
      if (k < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / k);
        k += 1.0;
      }
      double d = k - 1.0 / 3.0;
      double c = 1.0 / std::sqrt(9.0 * d);
      for (;;) {
        // normal via Box-Muller on the counter stream
        double u1 = rng.uniform();
        double u2 = rng.uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * M_PI * u2);
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v))
          return boost * d * v / p2_;
      }
    }
    case Family::kUniformLife:
      return rng.uniform() * p1_;
  }
  return 0.0;
}

LifespanMeasure LifespanMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidConfig("scale factor must be positive");
  return LifespanMeasure(family_, b_ * factor, p1_, p2_);
}

std::string LifespanMeasure::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::kExponential:
      os << "exponential(d=" << p1_ << ",b=" << b_ << ")";
      break;
    case Family::kPureBirth:
      os << "pure_birth(b=" << b_ << ")";
      break;
    case Family::kGamma:
      os << "gamma(k=" << p1_ << ",r=" << p2_ << ",b=" << b_ << ")";
      break;
    case Family::kUniformLife:
      os << "uniform_life(c=" << p1_ << ",b=" << b_ << ")";
      break;
  }
  return os.str();
}

MutationContext::MutationContext(LifespanMeasure m, double p)
    : measure(std::move(m)), mutation_prob(p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidConfig("mutation_prob p must lie in (0,1)");
}

double MutationContext::psi_c(double lambda) const {
  if (lambda == 0.0) return 0.0;
  return mutation_prob * lambda + (1.0 - mutation_prob) * measure.psi(lambda);
}

double MutationContext::psi_c_derivative(double lambda) const {
  return mutation_prob +
         (1.0 - mutation_prob) * measure.psi_derivative(lambda);
}

}  // namespace splittree
