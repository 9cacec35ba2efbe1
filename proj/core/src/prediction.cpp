#include "urbanlens/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "urbanlens/error.hpp"
#include "urbanlens/random.hpp"

namespace urbanlens {

using nlohmann::json;

void Dataset::add(std::span<const double> row, std::uint8_t label) {
  if (dims == 0 && values.empty()) dims = row.size();
  if (row.size() != dims) throw Error(ErrorCode::invalid_argument, "row width mismatch");
  values.insert(values.end(), row.begin(), row.end());
  labels.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.dims = dims;
  out.values.reserve(indices.size() * dims);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.add(row(i), labels[i]);
  return out;
}

Dataset trip_dataset(std::span<const NodeFeatures> features, std::span<const TripRecord> trips) {
  Dataset d;
  d.dims = kTripFeatureCount;
  d.values.reserve(trips.size() * kTripFeatureCount);
  d.labels.reserve(trips.size());
  for (const auto& t : trips) {
    const auto& o = features[t.origin].values;
    const auto& dst = features[t.destination].values;
    d.values.insert(d.values.end(), o.begin(), o.end());
    d.values.insert(d.values.end(), dst.begin(), dst.end());
    d.labels.push_back(t.label == TripLabel::occurrence ? 1 : 0);
  }
  return d;
}

std::vector<std::size_t> undersample_indices(std::span<const std::uint8_t> labels,
                                             std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorCode::invalid_argument, "undersampling needs both classes present");
  }
  auto& minority = pos.size() <= neg.size() ? pos : neg;
  auto& majority = pos.size() <= neg.size() ? neg : pos;
  Rng rng(seed);
  rng.shuffle(majority);
  std::vector<std::size_t> out(minority);
  out.insert(out.end(), majority.begin(),
             majority.begin() + static_cast<std::ptrdiff_t>(minority.size()));
  rng.shuffle(out);
  return out;
}

Dataset undersample(const Dataset& data, std::uint64_t seed) {
  const auto idx = undersample_indices(data.labels, seed);
  return data.subset(idx);
}

Split stratified_split(std::span<const std::uint8_t> labels, double holdout, std::uint64_t seed) {
  if (!(holdout >= 0.0 && holdout < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "holdout fraction must lie in [0, 1)");
  }
  Rng rng(seed);
  Split split;
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.shuffle(members);
    const auto n_test =
        static_cast<std::size_t>(std::llround(holdout * static_cast<double>(members.size())));
    split.test.insert(split.test.end(), members.begin(),
                      members.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(),
                       members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes[i].value;
}

double GbtModel::margin(std::span<const double> x) const {
  double m = base_margin;
  for (const auto& t : trees) m += t.predict(x);
  return m;
}

double GbtModel::probability(std::span<const double> x) const {
  return 1.0 / (1.0 + std::exp(-margin(x)));
}

namespace {

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
};

struct SplitChoice {
  double gain = 0.0;
  std::int32_t feature = -1;
  double threshold = 0.0;
};

double score(double g, double h, double lambda) { return g * g / (h + lambda); }

// Grows one tree level by level. `position[i]` is the tree node holding
// sample i, or -1 once the sample sits in a finished leaf (or is not drawn).
RegressionTree grow_tree(const Dataset& data, std::span<const std::vector<std::uint32_t>> order,
                         std::span<const double> grad, std::span<const double> hess,
                         std::vector<std::int32_t>& position, const GbtParams& params) {
  RegressionTree tree;
  NodeStats root;
  for (std::size_t i = 0; i < position.size(); ++i) {
    if (position[i] < 0) continue;
    root.g += grad[i];
    root.h += hess[i];
  }
  tree.nodes.push_back({});
  std::vector<NodeStats> stats{root};
  std::vector<std::int32_t> frontier{0};

  for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
    const std::size_t nodes_now = tree.nodes.size();
    std::vector<SplitChoice> best(nodes_now);
    std::vector<NodeStats> left(nodes_now);
    std::vector<double> last_value(nodes_now);
    std::vector<bool> seen(nodes_now);

    for (std::size_t f = 0; f < data.dims; ++f) {
      std::fill(left.begin(), left.end(), NodeStats{});
      std::fill(seen.begin(), seen.end(), false);
      for (std::uint32_t i : order[f]) {
        const auto node = position[i];
        if (node < 0) continue;
        const auto n = static_cast<std::size_t>(node);
        const double v = data.values[i * data.dims + f];
        if (seen[n] && v > last_value[n]) {
          const NodeStats& total = stats[n];
          const NodeStats l = left[n];
          const NodeStats r{total.g - l.g, total.h - l.h};
          if (l.h >= params.min_child_weight && r.h >= params.min_child_weight) {
            const double gain = 0.5 * (score(l.g, l.h, params.lambda) +
                                       score(r.g, r.h, params.lambda) -
                                       score(total.g, total.h, params.lambda));
            if (gain > best[n].gain + 1e-12) {
              double thr = last_value[n] + 0.5 * (v - last_value[n]);
              if (thr <= last_value[n]) thr = v;
              best[n] = {gain, static_cast<std::int32_t>(f), thr};
            }
          }
        }
        left[n].g += grad[i];
        left[n].h += hess[i];
        last_value[n] = v;
        seen[n] = true;
      }
    }

    std::vector<std::int32_t> next;
    std::vector<std::int32_t> remap(nodes_now, -1);
    for (std::int32_t node : frontier) {
      const auto& choice = best[static_cast<std::size_t>(node)];
      if (choice.feature < 0) continue;
      const auto l = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      stats.push_back({});
      stats.push_back({});
      auto& tn = tree.nodes[static_cast<std::size_t>(node)];
      tn.feature = choice.feature;
      tn.threshold = choice.threshold;
      tn.left = l;
      tn.right = l + 1;
      remap[static_cast<std::size_t>(node)] = l;
      next.push_back(l);
      next.push_back(l + 1);
    }
    for (std::size_t i = 0; i < position.size(); ++i) {
      const auto node = position[i];
      if (node < 0) continue;
      const auto& tn = tree.nodes[static_cast<std::size_t>(node)];
      if (tn.feature < 0) {
        position[i] = -1 - node;  // parked in a finished leaf
        continue;
      }
      const bool go_left = data.values[i * data.dims + static_cast<std::size_t>(tn.feature)] <
                           tn.threshold;
      const auto child = go_left ? tn.left : tn.right;
      position[i] = child;
      stats[static_cast<std::size_t>(child)].g += grad[i];
      stats[static_cast<std::size_t>(child)].h += hess[i];
    }
    frontier = std::move(next);
  }

  for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
    auto& tn = tree.nodes[n];
    if (tn.feature >= 0) continue;
    tn.value = -stats[n].g / (stats[n].h + params.lambda) * params.learning_rate;
  }
  return tree;
}

}  // namespace

GbtModel train(const Dataset& data, const GbtParams& params) {
  if (data.size() == 0) throw Error(ErrorCode::invalid_argument, "cannot train on an empty dataset");
  if (params.rounds < 0 || params.max_depth < 0 || !(params.learning_rate > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "invalid boosting parameters");
  }
  const std::size_t n = data.size();
  GbtModel model;
  model.dims = data.dims;
  model.params = params;

  const double positives = std::accumulate(data.labels.begin(), data.labels.end(), 0.0);
  const double prior = std::clamp(positives / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
  model.base_margin = std::log(prior / (1.0 - prior));

  std::vector<std::vector<std::uint32_t>> order(data.dims);
  for (std::size_t f = 0; f < data.dims; ++f) {
    auto& o = order[f];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0U);
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
      return data.values[a * data.dims + f] < data.values[b * data.dims + f];
    });
  }

  std::vector<double> margin(n, model.base_margin);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<std::int32_t> position(n);
  Rng rng(params.seed);

  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-margin[i]));
      grad[i] = p - data.labels[i];
      hess[i] = std::max(p * (1.0 - p), 1e-16);
      position[i] = params.subsample < 1.0 && rng.uniform() >= params.subsample ? -1 : 0;
    }
    if (params.subsample < 1.0 &&
        std::all_of(position.begin(), position.end(), [](auto p) { return p < 0; })) {
      continue;
    }
    auto tree = grow_tree(data, order, grad, hess, position, params);
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(data.row(i));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::string model_to_json(const GbtModel& model) {
  json trees = json::array();
  for (const auto& t : model.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right},
                       {"v", n.value}});
    }
    trees.push_back(std::move(nodes));
  }
  const auto& p = model.params;
  json j = {{"format", "urbanlens-gbt"},
            {"version", kModelFormatVersion},
            {"dims", model.dims},
            {"base_margin", model.base_margin},
            {"params",
             {{"rounds", p.rounds},
              {"max_depth", p.max_depth},
              {"learning_rate", p.learning_rate},
              {"lambda", p.lambda},
              {"min_child_weight", p.min_child_weight},
              {"subsample", p.subsample},
              {"seed", p.seed}}},
            {"trees", std::move(trees)}};
  return j.dump();
}

GbtModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_workspace, std::string("model file is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "urbanlens-gbt") {
    throw Error(ErrorCode::corrupt_workspace, "not an urbanlens model file");
  }
  if (j.value("version", -1) != kModelFormatVersion) {
    throw Error(ErrorCode::version_mismatch,
                "model format version " + std::to_string(j.value("version", -1)) +
                    " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  try {
    GbtModel m;
    m.dims = j.at("dims").get<std::size_t>();
    m.base_margin = j.at("base_margin").get<double>();
    const auto& p = j.at("params");
    m.params.rounds = p.at("rounds");
    m.params.max_depth = p.at("max_depth");
    m.params.learning_rate = p.at("learning_rate");
    m.params.lambda = p.at("lambda");
    m.params.min_child_weight = p.at("min_child_weight");
    m.params.subsample = p.at("subsample");
    m.params.seed = p.at("seed");
    for (const auto& t : j.at("trees")) {
      RegressionTree tree;
      for (const auto& n : t) {
        tree.nodes.push_back({n.at("f"), n.at("t"), n.at("l"), n.at("r"), n.at("v")});
      }
      m.trees.push_back(std::move(tree));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_workspace, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const GbtModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

GbtModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

double Confusion::sensitivity() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Confusion::specificity() const {
  return tn + fp == 0 ? 0.0 : static_cast<double>(tn) / static_cast<double>(tn + fp);
}

Confusion confusion(std::span<const std::uint8_t> predictions,
                    std::span<const std::uint8_t> labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::invalid_argument, "predictions and labels differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      (predictions[i] ? c.tp : c.fn)++;
    } else {
      (predictions[i] ? c.fp : c.tn)++;
    }
  }
  return c;
}

double g_mean(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels) {
  const auto c = confusion(predictions, labels);
  return std::sqrt(c.sensitivity() * c.specificity());
}

std::size_t PredictionGrid::cell_of(const ProjectedPoint& p) const {
  const auto clamp_index = [](double v, std::size_t n) {
    if (!(v > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(v), n - 1);
  };
  const auto ix = clamp_index(std::floor((p.x - min_x) / cell_m), nx);
  const auto iy = clamp_index(std::floor((p.y - min_y) / cell_m), ny);
  return iy * nx + ix;
}

Box PredictionGrid::cell_box(std::size_t cell) const {
  const auto ix = static_cast<double>(cell % nx);
  const auto iy = static_cast<double>(cell / nx);
  return {min_x + ix * cell_m, min_y + iy * cell_m, min_x + (ix + 1) * cell_m,
          min_y + (iy + 1) * cell_m};
}

std::uint64_t PredictionGrid::total() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < success.size(); ++i) t += success[i] + failure[i];
  return t;
}

PredictionGrid empty_grid(const StreetGraph& g, double cell_m) {
  if (!(cell_m > 0.0)) throw Error(ErrorCode::invalid_argument, "grid cell size must be > 0");
  PredictionGrid grid;
  grid.cell_m = cell_m;
  double max_x = 0.0;
  double max_y = 0.0;
  const auto planar = g.planar();
  if (!planar.empty()) {
    grid.min_x = max_x = planar[0].x;
    grid.min_y = max_y = planar[0].y;
    for (const auto& p : planar) {
      grid.min_x = std::min(grid.min_x, p.x);
      grid.min_y = std::min(grid.min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  grid.nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((max_x - grid.min_x) / cell_m)));
  grid.ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((max_y - grid.min_y) / cell_m)));
  grid.success.assign(grid.cells(), 0);
  grid.failure.assign(grid.cells(), 0);
  return grid;
}

PredictionGrid prediction_grid(const StreetGraph& g, std::span<const TripRecord> trips,
                               std::span<const std::uint8_t> predictions, double cell_m) {
  if (predictions.size() != trips.size()) {
    throw Error(ErrorCode::invalid_argument, "one prediction per trip is required");
  }
  auto grid = empty_grid(g, cell_m);
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const bool correct =
        predictions[i] == (trips[i].label == TripLabel::occurrence ? 1 : 0);
    auto& counts = correct ? grid.success : grid.failure;
    ++counts[grid.cell_of(g.planar()[trips[i].origin])];
    ++counts[grid.cell_of(g.planar()[trips[i].destination])];
  }
  return grid;
}

PredictionGrid prediction_grid(const GbtModel& model, const StreetGraph& g,
                               std::span<const NodeFeatures> features,
                               std::span<const TripRecord> trips, double cell_m) {
  const auto data = trip_dataset(features, trips);
  std::vector<std::uint8_t> predictions(trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) predictions[i] = model.classify(data.row(i));
  return prediction_grid(g, trips, predictions, cell_m);
}

}  // namespace urbanlens
