#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace urbanlens {

/// Seeded generator with distribution code kept in-house so sample streams
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Samples indices proportionally to non-negative weights.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  /// Normalized probabilities.
  std::vector<double> probabilities() const;

 private:
  std::vector<double> cumulative_;
};

}  // namespace urbanlens
