#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace urbanlens {

/// Dense square matrix, row-major.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), values(size * size, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

struct PearsonResult {
  SquareMatrix matrix;
  /// Columns with zero variance; they correlate 0 with others, 1 with themselves.
  std::vector<std::size_t> constant_features;
};

/// Pearson correlation of the columns of a row-major n x dims matrix.
/// Throws Error(invalid_argument) when fewer than two rows are given.
PearsonResult pearson_matrix(std::span<const double> rows, std::size_t dims);

struct ReducedMatrix {
  SquareMatrix matrix;
  /// Groups with a single member; their diagonal is 1 by convention.
  std::vector<std::size_t> singleton_groups;
};

/// Block means: off-diagonal entries average every cross pair, diagonal
/// entries average the distinct within-group pairs (self-correlations excluded).
ReducedMatrix reduce_by_layer(const SquareMatrix& full, std::span<const std::size_t> assignment,
                              std::size_t groups);

using ScoreFunction = std::function<double(std::span<const double>)>;

enum class ShapleyMethod { exact, monte_carlo };

struct ShapleyOptions {
  ShapleyMethod method = ShapleyMethod::monte_carlo;
  std::size_t permutations = 2000;
  std::uint64_t seed = 11;
};

inline constexpr std::size_t kMaxExactShapleyFeatures = 12;

/// Shapley values of f at x where absent features take the background value.
/// Exact mode enumerates all coalitions and refuses more than 12 features.
std::vector<double> shapley(const ScoreFunction& f, std::span<const double> x,
                            std::span<const double> background, const ShapleyOptions& options);

/// Column means of a row-major matrix.
std::vector<double> column_means(std::span<const double> rows, std::size_t dims);

struct ShapleyReport {
  std::vector<double> mean_abs;         // per feature
  std::vector<double> percent;          // per feature, sums to 100 when total > 0
  std::vector<double> layer_sum;        // per group
  std::vector<double> layer_percent;
  std::size_t sample_size = 0;
  ShapleyMethod method = ShapleyMethod::monte_carlo;
  std::size_t permutations = 0;

  friend bool operator==(const ShapleyReport&, const ShapleyReport&) = default;
};

/// Mean |phi| over the evaluation rows, grouped by layer.
ShapleyReport shapley_report(const ScoreFunction& f, std::span<const double> eval_rows,
                             std::size_t dims, std::span<const double> background,
                             std::span<const std::size_t> assignment, std::size_t groups,
                             const ShapleyOptions& options);

}  // namespace urbanlens
