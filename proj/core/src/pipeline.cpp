#include "urbanlens/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "urbanlens/error.hpp"
#include "urbanlens/ingest.hpp"
#include "urbanlens/random.hpp"

namespace urbanlens {

namespace {

void reset_after(Workspace& w, Stage s) {
  w.stage = static_cast<int>(s);
  if (s < Stage::built) {
    w.graph = {};
    w.classes.clear();
    w.hotspots.clear();
  }
  if (s < Stage::trips) {
    w.trips.clear();
    w.features.clear();
    w.occurrence_probability = 0.0;
    w.near_hotspot_share = 0.0;
    w.no_hotspots = false;
  }
  if (s < Stage::trained) {
    w.model.reset();
    w.evaluation.reset();
    w.grid.reset();
  }
  if (s < Stage::analyzed) {
    w.correlation.reset();
    w.shapley.reset();
  }
}

}  // namespace

Workspace ingest(const Config& config) {
  Workspace w;
  w.config_json = config_to_json(config);
  const auto& in = config.inputs;
  const double bad = config.max_bad_row_fraction;
  const auto need = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw Error(ErrorCode::config, std::string("inputs.") + what + " is not set");
  };
  need(in.streets, "streets");
  need(in.crimes, "crimes");
  need(in.transport, "transport");
  need(in.favelas, "favelas");
  need(in.tracts, "tracts");
  need(in.stations, "stations");
  need(in.weather, "weather");

  w.streets = load_streets_geojson(in.streets, &w.warnings);
  w.crimes = load_crimes_csv(in.crimes, bad, &w.warnings);
  w.facilities = load_transport_csv(in.transport, bad, &w.warnings);
  w.favelas = load_favelas_geojson(in.favelas);
  w.tracts = load_tracts_geojson(in.tracts);
  if (w.tracts.empty()) throw Error(ErrorCode::ingest, in.tracts.string() + ": no census tracts");
  w.stations = load_stations_csv(in.stations);
  if (w.stations.size() != 3) {
    throw Error(ErrorCode::ingest, in.stations.string() + ": expected exactly 3 weather stations, found " +
                                       std::to_string(w.stations.size()));
  }
  load_weather_csv(in.weather, w.stations, bad, &w.warnings);
  w.stage = static_cast<int>(Stage::ingested);
  return w;
}

void build(Workspace& w, const Config& config) {
  w.require(Stage::ingested);
  GraphBuildOptions options;
  options.snap_tolerance_m = config.snap_tolerance_m;
  options.origin = config.projection_origin;
  options.index = config.index;
  auto graph = build_graph(w.streets, options);
  auto classes = classify_nodes(graph, config.aggregation.near_dead_end_m);
  const auto series = activity_series(graph, w.crimes);
  auto hotspots = detect_hotspots(series, config.hotspots);
  reset_after(w, Stage::built);
  w.graph = std::move(graph);
  w.classes = std::move(classes);
  w.hotspots = std::move(hotspots);
  w.config_json = config_to_json(config);
}

void synthesize_trips(Workspace& w, const Config& config) {
  w.require(Stage::built);
  std::vector<TripRecord> trips;
  double p = 0.0;
  double near = 0.0;
  bool none = false;
  if (config.inputs.trips) {
    trips = load_trips_csv(*config.inputs.trips, w.graph, config.max_bad_row_fraction, &w.warnings);
  } else {
    auto synth = synth_trips(w.graph, w.tracts, w.hotspot_nodes(), config.trips);
    trips = std::move(synth.trips);
    p = synth.occurrence_probability;
    near = synth.near_hotspot_share;
    none = synth.no_hotspots;
    if (none) w.warnings.push_back("no hotspot nodes detected; every synthetic trip is regular");
  }
  AggregationInputs inputs;
  inputs.crimes = &w.crimes;
  inputs.facilities = &w.facilities;
  inputs.favelas = &w.favelas;
  inputs.tracts = &w.tracts;
  inputs.stations = &w.stations;
  inputs.hotspots = &w.hotspots;
  inputs.trips = &trips;
  auto features = aggregate_all(w.graph, w.classes, inputs, config.aggregation);

  reset_after(w, Stage::trips);
  w.trips = std::move(trips);
  w.occurrence_probability = p;
  w.near_hotspot_share = near;
  w.no_hotspots = none;
  w.features = std::move(features);
}

void train_model(Workspace& w, const Config& config) {
  w.require(Stage::trips);
  const auto data = trip_dataset(w.features, w.trips);
  const auto split = stratified_split(data.labels, config.holdout_fraction, config.split_seed);
  const auto train_set = data.subset(split.train);
  const auto test_set = data.subset(split.test);
  const auto balanced = undersample(train_set, config.undersample_seed);
  auto model = train(balanced, config.gbt);

  Evaluation ev;
  ev.test_indices = split.test;
  ev.train_size = train_set.size();
  ev.balanced_train_size = balanced.size();
  ev.background = column_means(train_set.values, train_set.dims);
  ev.test_predictions.reserve(test_set.size());
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    ev.test_predictions.push_back(model.classify(test_set.row(i)));
  }
  ev.confusion = confusion(ev.test_predictions, test_set.labels);
  ev.g_mean = g_mean(ev.test_predictions, test_set.labels);

  // Control: identical pipeline on permuted training labels.
  auto shuffled = train_set;
  Rng rng(config.split_seed ^ 0x5bd1e995ULL);
  rng.shuffle(shuffled.labels);
  const auto control = train(undersample(shuffled, config.undersample_seed), config.gbt);
  std::vector<std::uint8_t> control_predictions;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    control_predictions.push_back(control.classify(test_set.row(i)));
  }
  ev.shuffled_g_mean = g_mean(control_predictions, test_set.labels);

  std::vector<TripRecord> held_out;
  for (auto i : split.test) held_out.push_back(w.trips[i]);
  auto grid = prediction_grid(w.graph, held_out, ev.test_predictions, config.grid_cell_m);

  reset_after(w, Stage::trained);
  w.model = std::move(model);
  w.evaluation = std::move(ev);
  w.grid = std::move(grid);
}

void analyze(Workspace& w, const Config& config) {
  w.require(Stage::trained);
  const auto data = trip_dataset(w.features, w.trips);
  CorrelationReport corr;
  corr.assignment = trip_feature_layers();
  corr.full = pearson_matrix(data.values, data.dims);
  corr.reduced = reduce_by_layer(corr.full.matrix, corr.assignment, kThematicLayerCount);
  corr.rows = data.size();

  std::vector<std::size_t> sample(data.size());
  std::iota(sample.begin(), sample.end(), std::size_t{0});
  Rng rng(config.shapley_seed);
  rng.shuffle(sample);
  sample.resize(std::min(sample.size(), config.shapley_samples));
  std::sort(sample.begin(), sample.end());
  const auto eval = data.subset(sample);

  const GbtModel& model = *w.model;
  const ScoreFunction score = [&model](std::span<const double> x) { return model.probability(x); };
  ShapleyOptions options;
  options.method = ShapleyMethod::monte_carlo;
  options.permutations = config.shapley_permutations;
  options.seed = config.shapley_seed;
  auto report = shapley_report(score, eval.values, data.dims, w.evaluation->background,
                               corr.assignment, kThematicLayerCount, options);

  reset_after(w, Stage::analyzed);
  w.correlation = std::move(corr);
  w.shapley = std::move(report);
}

std::string grid_to_csv(const Workspace& w) {
  w.require(Stage::trained);
  const auto& g = *w.grid;
  std::ostringstream out;
  out.precision(17);
  out << "cell,ix,iy,min_lat,min_lon,max_lat,max_lon,success,failure\n";
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto box = g.cell_box(c);
    const auto lo = w.graph.projection().inverse({box.min_x, box.min_y});
    const auto hi = w.graph.projection().inverse({box.max_x, box.max_y});
    out << c << ',' << c % g.nx << ',' << c / g.nx << ',' << lo.lat << ',' << lo.lon << ','
        << hi.lat << ',' << hi.lon << ',' << g.success[c] << ',' << g.failure[c] << '\n';
  }
  return out.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
}

std::string matrix_csv(const SquareMatrix& m, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out.precision(17);
  out << "feature";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < m.n; ++j) out << ',' << m(i, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::size_t export_csv(const Workspace& w, const std::filesystem::path& dir) {
  w.require(Stage::trips);
  std::filesystem::create_directories(dir);
  std::size_t written = 0;
  write_text(dir / "trips.csv", trips_to_csv(w.graph, w.trips));
  ++written;
  if (w.has(Stage::trained)) {
    write_text(dir / "grid.csv", grid_to_csv(w));
    ++written;
  }
  if (w.has(Stage::analyzed)) {
    const auto names = trip_feature_names();
    write_text(dir / "correlation_full.csv", matrix_csv(w.correlation->full.matrix, names));
    std::vector<std::string> layers(kThematicLayerNames.begin(), kThematicLayerNames.end());
    write_text(dir / "correlation_reduced.csv", matrix_csv(w.correlation->reduced.matrix, layers));
    std::ostringstream out;
    out.precision(17);
    out << "feature,layer,mean_abs_shapley,percent\n";
    const auto& s = *w.shapley;
    for (std::size_t i = 0; i < s.mean_abs.size(); ++i) {
      out << names[i] << ',' << kThematicLayerNames[w.correlation->assignment[i]] << ','
          << s.mean_abs[i] << ',' << s.percent[i] << '\n';
    }
    write_text(dir / "shapley.csv", out.str());
    written += 3;
  }
  return written;
}

}  // namespace urbanlens
