#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace splittree {

// Counter-based generator: each draw hashes (key, counter) with the
// splitmix64 finalizer, so streams derived from distinct keys are
// independent and a stream's output depends only on its key and on how
// many values were consumed.  Replicate r of a run seeded with s uses
// key mix(s, r), which makes parallel replicates reproducible.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix(seed + 0x9e3779b97f4a7c15ULL, stream));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  result_type operator()() { return mix(key_, counter_++); }

  // Uniform on (0,1]; never returns 0 so -log(u) is finite.
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  bool bernoulli(double p) { return uniform() <= p; }

 private:
  static std::uint64_t mix(std::uint64_t key, std::uint64_t x) {
    std::uint64_t z = x + key;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace splittree
