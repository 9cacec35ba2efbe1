#include "urbanlens/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "urbanlens/error.hpp"
#include "urbanlens/random.hpp"

namespace urbanlens {

std::vector<double> column_means(std::span<const double> rows, std::size_t dims) {
  std::vector<double> mean(dims, 0.0);
  if (dims == 0) return mean;
  const std::size_t n = rows.size() / dims;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < dims; ++c) mean[c] += rows[r * dims + c];
  }
  if (n > 0) {
    for (auto& m : mean) m /= static_cast<double>(n);
  }
  return mean;
}

PearsonResult pearson_matrix(std::span<const double> rows, std::size_t dims) {
  const std::size_t n = dims == 0 ? 0 : rows.size() / dims;
  if (n < 2) throw Error(ErrorCode::invalid_argument, "correlation needs at least two rows");
  const auto mean = column_means(rows, dims);

  // Centered sums of squares and cross products.
  SquareMatrix cov(dims);
  std::vector<double> centered(dims);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < dims; ++c) centered[c] = rows[r * dims + c] - mean[c];
    for (std::size_t i = 0; i < dims; ++i) {
      for (std::size_t j = i; j < dims; ++j) cov(i, j) += centered[i] * centered[j];
    }
  }

  PearsonResult out{SquareMatrix(dims), {}};
  for (std::size_t i = 0; i < dims; ++i) {
    if (!(cov(i, i) > 0.0)) out.constant_features.push_back(i);
  }
  for (std::size_t i = 0; i < dims; ++i) {
    out.matrix(i, i) = 1.0;
    for (std::size_t j = i + 1; j < dims; ++j) {
      double r = 0.0;
      if (cov(i, i) > 0.0 && cov(j, j) > 0.0) {
        r = std::clamp(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j)), -1.0, 1.0);
      }
      out.matrix(i, j) = r;
      out.matrix(j, i) = r;
    }
  }
  return out;
}

ReducedMatrix reduce_by_layer(const SquareMatrix& full, std::span<const std::size_t> assignment,
                              std::size_t groups) {
  if (assignment.size() != full.n) {
    throw Error(ErrorCode::invalid_argument, "every feature needs a layer assignment");
  }
  SquareMatrix sum(groups);
  SquareMatrix count(groups);
  for (std::size_t a = 0; a < full.n; ++a) {
    for (std::size_t b = 0; b < full.n; ++b) {
      if (a == b) continue;
      const auto ga = assignment[a];
      const auto gb = assignment[b];
      if (ga >= groups || gb >= groups) {
        throw Error(ErrorCode::invalid_argument, "layer assignment out of range");
      }
      sum(ga, gb) += full(a, b);
      count(ga, gb) += 1.0;
    }
  }
  ReducedMatrix out{SquareMatrix(groups), {}};
  for (std::size_t i = 0; i < groups; ++i) {
    for (std::size_t j = 0; j < groups; ++j) {
      if (count(i, j) > 0.0) {
        out.matrix(i, j) = sum(i, j) / count(i, j);
      } else if (i == j) {
        out.matrix(i, j) = 1.0;
        out.singleton_groups.push_back(i);
      }
    }
  }
  return out;
}

namespace {

std::vector<double> exact_shapley(const ScoreFunction& f, std::span<const double> x,
                                  std::span<const double> background) {
  const std::size_t d = x.size();
  // weight[s] = s! (d - s - 1)! / d!
  std::vector<double> weight(d);
  for (std::size_t s = 0; s < d; ++s) {
    double w = 1.0 / static_cast<double>(d);
    // 1 / (d * C(d-1, s))
    double binom = 1.0;
    for (std::size_t k = 1; k <= s; ++k) {
      binom = binom * static_cast<double>(d - 1 - s + k) / static_cast<double>(k);
    }
    weight[s] = w / binom;
  }
  const std::size_t subsets = std::size_t{1} << d;
  std::vector<double> value(subsets);
  std::vector<double> masked(d);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t i = 0; i < d; ++i) masked[i] = (mask >> i) & 1U ? x[i] : background[i];
    value[mask] = f(masked);
  }
  std::vector<double> phi(d, 0.0);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t i = 0; i < d; ++i) {
      if ((mask >> i) & 1U) continue;
      phi[i] += weight[size] * (value[mask | (std::size_t{1} << i)] - value[mask]);
    }
  }
  return phi;
}

std::vector<double> sampled_shapley(const ScoreFunction& f, std::span<const double> x,
                                    std::span<const double> background,
                                    const ShapleyOptions& options) {
  const std::size_t d = x.size();
  std::vector<double> phi(d, 0.0);
  if (options.permutations == 0) return phi;
  Rng rng(options.seed);
  std::vector<std::size_t> order(d);
  std::vector<double> current(d);
  for (std::size_t p = 0; p < options.permutations; ++p) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::copy(background.begin(), background.end(), current.begin());
    double prev = f(current);
    for (std::size_t i : order) {
      current[i] = x[i];
      const double next = f(current);
      phi[i] += next - prev;
      prev = next;
    }
  }
  for (auto& v : phi) v /= static_cast<double>(options.permutations);
  return phi;
}

}  // namespace

std::vector<double> shapley(const ScoreFunction& f, std::span<const double> x,
                            std::span<const double> background, const ShapleyOptions& options) {
  if (x.size() != background.size()) {
    throw Error(ErrorCode::invalid_argument, "instance and background differ in width");
  }
  if (options.method == ShapleyMethod::exact) {
    if (x.size() > kMaxExactShapleyFeatures) {
      throw Error(ErrorCode::invalid_argument,
                  "exact Shapley supports at most 12 features; use monte_carlo");
    }
    return exact_shapley(f, x, background);
  }
  return sampled_shapley(f, x, background, options);
}

ShapleyReport shapley_report(const ScoreFunction& f, std::span<const double> eval_rows,
                             std::size_t dims, std::span<const double> background,
                             std::span<const std::size_t> assignment, std::size_t groups,
                             const ShapleyOptions& options) {
  if (assignment.size() != dims) {
    throw Error(ErrorCode::invalid_argument, "every feature needs a layer assignment");
  }
  ShapleyReport report;
  report.method = options.method;
  report.permutations = options.method == ShapleyMethod::monte_carlo ? options.permutations : 0;
  report.sample_size = dims == 0 ? 0 : eval_rows.size() / dims;
  report.mean_abs.assign(dims, 0.0);
  for (std::size_t r = 0; r < report.sample_size; ++r) {
    ShapleyOptions per_row = options;
    per_row.seed = options.seed + r;
    const auto phi = shapley(f, eval_rows.subspan(r * dims, dims), background, per_row);
    for (std::size_t i = 0; i < dims; ++i) report.mean_abs[i] += std::abs(phi[i]);
  }
  if (report.sample_size > 0) {
    for (auto& v : report.mean_abs) v /= static_cast<double>(report.sample_size);
  }
  const double total = std::accumulate(report.mean_abs.begin(), report.mean_abs.end(), 0.0);
  report.percent.assign(dims, 0.0);
  report.layer_sum.assign(groups, 0.0);
  report.layer_percent.assign(groups, 0.0);
  for (std::size_t i = 0; i < dims; ++i) {
    report.layer_sum.at(assignment[i]) += report.mean_abs[i];
    if (total > 0.0) report.percent[i] = 100.0 * report.mean_abs[i] / total;
  }
  for (std::size_t g = 0; g < groups; ++g) {
    if (total > 0.0) report.layer_percent[g] = 100.0 * report.layer_sum[g] / total;
  }
  return report;
}

}  // namespace urbanlens
