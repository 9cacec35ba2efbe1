#include "urbanlens/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "urbanlens/error.hpp"

namespace urbanlens {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

double Rng::normal(double mean, double stddev) {
  // Box-Muller; uniform() may return 0 so shift into (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  double running = 0.0;
  cumulative_.reserve(weights.size());
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::invalid_argument, "sampling weights must be finite and >= 0");
    }
    running += w;
    cumulative_.push_back(running);
  }
  if (!(running > 0.0)) throw Error(ErrorCode::invalid_argument, "sampling weights sum to zero");
}

std::size_t WeightedSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

std::vector<double> WeightedSampler::probabilities() const {
  std::vector<double> p(cumulative_.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (cumulative_[i] - prev) / cumulative_.back();
    prev = cumulative_[i];
  }
  return p;
}

}  // namespace urbanlens
