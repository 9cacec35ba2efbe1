#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "urbanlens/features.hpp"
#include "urbanlens/geo.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

/// Row-major labeled design matrix.
struct Dataset {
  std::size_t dims = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dims, dims}; }
  void add(std::span<const double> row, std::uint8_t label);
  Dataset subset(std::span<const std::size_t> indices) const;
};

/// Concatenates origin and destination corner features; label 1 = occurrence.
Dataset trip_dataset(std::span<const NodeFeatures> features, std::span<const TripRecord> trips);

/// Indices of a balanced sample: the minority class whole plus an equally
/// sized draw without replacement from the majority, in seeded shuffled
/// order. Throws Error(invalid_argument) when one class is absent.
std::vector<std::size_t> undersample_indices(std::span<const std::uint8_t> labels,
                                             std::uint64_t seed);
Dataset undersample(const Dataset& data, std::uint64_t seed);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class seeded split; each class contributes round(holdout * count) to test.
Split stratified_split(std::span<const std::uint8_t> labels, double holdout,
                       std::uint64_t seed);

struct GbtParams {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double min_child_weight = 1.0;
  double subsample = 1.0;
  std::uint64_t seed = 7;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x < threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;         // leaf output (already scaled by the learning rate)

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

/// Gradient-boosted trees for binary logistic loss.
struct GbtModel {
  std::size_t dims = 0;
  double base_margin = 0.0;
  GbtParams params;
  std::vector<RegressionTree> trees;

  double margin(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
  std::uint8_t classify(std::span<const double> x, double threshold = 0.5) const {
    return probability(x) >= threshold ? 1 : 0;
  }
  friend bool operator==(const GbtModel& a, const GbtModel& b) {
    return a.dims == b.dims && a.base_margin == b.base_margin && a.trees == b.trees;
  }
};

/// Newton boosting with exact greedy splits grown level by level.
/// Throws Error(invalid_argument) on an empty dataset.
GbtModel train(const Dataset& data, const GbtParams& params);

inline constexpr int kModelFormatVersion = 1;

/// Structured-text (JSON) model file:
///   {"format":"urbanlens-gbt","version":1,"dims":..,"base_margin":..,
///    "params":{...},"trees":[[{"f":..,"t":..,"l":..,"r":..,"v":..},...],...]}
std::string model_to_json(const GbtModel& model);
GbtModel model_from_json(const std::string& text);
void save_model(const GbtModel& model, const std::filesystem::path& path);
GbtModel load_model(const std::filesystem::path& path);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;

  double sensitivity() const;
  double specificity() const;
};

Confusion confusion(std::span<const std::uint8_t> predictions,
                    std::span<const std::uint8_t> labels);
/// sqrt(sensitivity * specificity); a 0/0 class rate counts as 0.
double g_mean(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels);

/// Regular grid over the graph's node extent, in projected meters.
struct PredictionGrid {
  double cell_m = 500.0;
  double min_x = 0.0;
  double min_y = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<std::uint32_t> success;  // row-major, iy * nx + ix
  std::vector<std::uint32_t> failure;

  std::size_t cells() const { return nx * ny; }
  std::size_t cell_of(const ProjectedPoint& p) const;
  Box cell_box(std::size_t cell) const;
  std::uint64_t total() const;

  friend bool operator==(const PredictionGrid&, const PredictionGrid&) = default;
};

PredictionGrid empty_grid(const StreetGraph& g, double cell_m);

/// Each trip adds one success (prediction == label) or failure to the cell
/// of its origin corner and one to the cell of its destination corner.
PredictionGrid prediction_grid(const StreetGraph& g, std::span<const TripRecord> trips,
                               std::span<const std::uint8_t> predictions, double cell_m = 500.0);
PredictionGrid prediction_grid(const GbtModel& model, const StreetGraph& g,
                               std::span<const NodeFeatures> features,
                               std::span<const TripRecord> trips, double cell_m = 500.0);

}  // namespace urbanlens
