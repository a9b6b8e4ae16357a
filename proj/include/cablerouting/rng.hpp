#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace cablerouting {

// Every random decision in the library goes through Rng. The bit stream is
// std::mt19937_64 (fully specified by the C++ standard); the conversions to
// floats, bounded integers and shuffles are defined here instead of using
// <random> distributions, whose outputs differ between standard libraries.
// Anyone reimplementing the generator can match streams exactly by following
// the definitions in rng.cpp.
inline constexpr const char* kRngAlgorithm = "mt19937_64/v1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) from the top 53 bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates, last element first.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Draws an index with probability proportional to weights[i]. Zero-weight
// entries are never chosen. Returns weights.size() when the total is not
// positive.
std::size_t weighted_index(std::span<const double> weights, Rng& rng);

// Folds the parts into one seed with the splitmix64 finalizer. Used to give
// every (run, iteration, operator, neighbor) its own independent stream.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace cablerouting
