#include "urbanlens/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "urbanlens/error.hpp"

namespace urbanlens {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw Error(ErrorCode::config, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::config, "unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (const auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Config c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(j, "config",
               {"workspace", "export_dir", "inputs", "projection_origin", "snap_tolerance_m",
                "max_bad_row_fraction", "index", "radii", "hotspots", "trips", "gbt",
                "evaluation", "grid", "analytics", "server"});
    if (j.contains("workspace")) c.workspace = resolve(base_dir, j["workspace"]);
    else c.workspace = base_dir / c.workspace;
    if (j.contains("export_dir")) c.export_dir = resolve(base_dir, j["export_dir"]);
    else c.export_dir = base_dir / c.export_dir;

    if (j.contains("inputs")) {
      const auto& in = j["inputs"];
      check_keys(in, "inputs",
                 {"streets", "crimes", "transport", "favelas", "tracts", "stations", "weather",
                  "trips"});
      const auto path_of = [&](const char* key, std::filesystem::path& out) {
        if (in.contains(key)) out = resolve(base_dir, in[key].get<std::string>());
      };
      path_of("streets", c.inputs.streets);
      path_of("crimes", c.inputs.crimes);
      path_of("transport", c.inputs.transport);
      path_of("favelas", c.inputs.favelas);
      path_of("tracts", c.inputs.tracts);
      path_of("stations", c.inputs.stations);
      path_of("weather", c.inputs.weather);
      if (in.contains("trips") && !in["trips"].is_null()) {
        c.inputs.trips = resolve(base_dir, in["trips"].get<std::string>());
      }
    }
    if (j.contains("projection_origin") && !j["projection_origin"].is_null()) {
      const auto& o = j["projection_origin"];
      check_keys(o, "projection_origin", {"lat", "lon"});
      c.projection_origin = GeoPoint{o.at("lat").get<double>(), o.at("lon").get<double>()};
      if (!c.projection_origin->valid()) {
        throw Error(ErrorCode::config, "projection_origin is not a valid coordinate");
      }
    }
    read(j, "snap_tolerance_m", c.snap_tolerance_m);
    read(j, "max_bad_row_fraction", c.max_bad_row_fraction);
    if (j.contains("index")) {
      check_keys(j["index"], "index", {"leaf_capacity", "max_depth"});
      read(j["index"], "leaf_capacity", c.index.leaf_capacity);
      read(j["index"], "max_depth", c.index.max_depth);
    }
    if (j.contains("radii")) {
      const auto& r = j["radii"];
      check_keys(r, "radii",
                 {"near_dead_end_m", "transport_m", "favela_m", "census_boundary_m",
                  "hotspot_label_m"});
      read(r, "near_dead_end_m", c.aggregation.near_dead_end_m);
      read(r, "transport_m", c.aggregation.transport_radius_m);
      read(r, "favela_m", c.aggregation.favela_radius_m);
      read(r, "census_boundary_m", c.aggregation.census_boundary_m);
      read(r, "hotspot_label_m", c.trips.label_radius_m);
    }
    if (j.contains("hotspots")) {
      check_keys(j["hotspots"], "hotspots", {"theta", "min_count"});
      read(j["hotspots"], "theta", c.hotspots.theta);
      read(j["hotspots"], "min_count", c.hotspots.min_count);
    }
    if (j.contains("trips")) {
      const auto& t = j["trips"];
      check_keys(t, "trips",
                 {"count", "seed", "occurrence_share", "period_weights", "weekday_weights"});
      read(t, "count", c.trips.count);
      read(t, "seed", c.trips.seed);
      read(t, "occurrence_share", c.trips.occurrence_share);
      if (t.contains("period_weights")) {
        const auto& w = t["period_weights"];
        check_keys(w, "trips.period_weights", {"morning", "afternoon", "night", "dawn"});
        read(w, "morning", c.trips.period_weights[0]);
        read(w, "afternoon", c.trips.period_weights[1]);
        read(w, "night", c.trips.period_weights[2]);
        read(w, "dawn", c.trips.period_weights[3]);
      }
      if (t.contains("weekday_weights")) {
        const auto& w = t["weekday_weights"];
        check_keys(w, "trips.weekday_weights", {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"});
        for (int d = 0; d < 7; ++d) read(w, weekday_name(d), c.trips.weekday_weights[static_cast<std::size_t>(d)]);
      }
    }
    if (j.contains("gbt")) {
      const auto& g = j["gbt"];
      check_keys(g, "gbt",
                 {"rounds", "max_depth", "learning_rate", "lambda", "min_child_weight",
                  "subsample", "seed"});
      read(g, "rounds", c.gbt.rounds);
      read(g, "max_depth", c.gbt.max_depth);
      read(g, "learning_rate", c.gbt.learning_rate);
      read(g, "lambda", c.gbt.lambda);
      read(g, "min_child_weight", c.gbt.min_child_weight);
      read(g, "subsample", c.gbt.subsample);
      read(g, "seed", c.gbt.seed);
    }
    if (j.contains("evaluation")) {
      const auto& e = j["evaluation"];
      check_keys(e, "evaluation", {"holdout_fraction", "split_seed", "undersample_seed"});
      read(e, "holdout_fraction", c.holdout_fraction);
      read(e, "split_seed", c.split_seed);
      read(e, "undersample_seed", c.undersample_seed);
    }
    if (j.contains("grid")) {
      check_keys(j["grid"], "grid", {"cell_m"});
      read(j["grid"], "cell_m", c.grid_cell_m);
    }
    if (j.contains("analytics")) {
      const auto& a = j["analytics"];
      check_keys(a, "analytics", {"shapley_samples", "shapley_permutations", "seed"});
      read(a, "shapley_samples", c.shapley_samples);
      read(a, "shapley_permutations", c.shapley_permutations);
      read(a, "seed", c.shapley_seed);
    }
    if (j.contains("server")) {
      const auto& s = j["server"];
      check_keys(s, "server", {"host", "port", "cors_origin"});
      read(s, "host", c.server.host);
      read(s, "port", c.server.port);
      read(s, "cors_origin", c.server.cors_origin);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, std::string("invalid config value: ") + e.what());
  }
  if (c.index.leaf_capacity == 0) throw Error(ErrorCode::config, "index.leaf_capacity must be >= 1");
  if (!(c.grid_cell_m > 0.0)) throw Error(ErrorCode::config, "grid.cell_m must be > 0");
  if (!(c.holdout_fraction > 0.0 && c.holdout_fraction < 1.0)) {
    throw Error(ErrorCode::config, "evaluation.holdout_fraction must lie in (0, 1)");
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string config_to_json(const Config& c) {
  json period = {{"morning", c.trips.period_weights[0]},
                 {"afternoon", c.trips.period_weights[1]},
                 {"night", c.trips.period_weights[2]},
                 {"dawn", c.trips.period_weights[3]}};
  json weekday = json::object();
  for (int d = 0; d < 7; ++d) weekday[weekday_name(d)] = c.trips.weekday_weights[static_cast<std::size_t>(d)];
  json j = {
      {"snap_tolerance_m", c.snap_tolerance_m},
      {"max_bad_row_fraction", c.max_bad_row_fraction},
      {"index", {{"leaf_capacity", c.index.leaf_capacity}, {"max_depth", c.index.max_depth}}},
      {"radii",
       {{"near_dead_end_m", c.aggregation.near_dead_end_m},
        {"transport_m", c.aggregation.transport_radius_m},
        {"favela_m", c.aggregation.favela_radius_m},
        {"census_boundary_m", c.aggregation.census_boundary_m},
        {"hotspot_label_m", c.trips.label_radius_m}}},
      {"hotspots", {{"theta", c.hotspots.theta}, {"min_count", c.hotspots.min_count}}},
      {"trips",
       {{"count", c.trips.count},
        {"seed", c.trips.seed},
        {"occurrence_share", c.trips.occurrence_share},
        {"period_weights", period},
        {"weekday_weights", weekday}}},
      {"gbt",
       {{"rounds", c.gbt.rounds},
        {"max_depth", c.gbt.max_depth},
        {"learning_rate", c.gbt.learning_rate},
        {"lambda", c.gbt.lambda},
        {"min_child_weight", c.gbt.min_child_weight},
        {"subsample", c.gbt.subsample},
        {"seed", c.gbt.seed}}},
      {"evaluation",
       {{"holdout_fraction", c.holdout_fraction},
        {"split_seed", c.split_seed},
        {"undersample_seed", c.undersample_seed}}},
      {"grid", {{"cell_m", c.grid_cell_m}}},
      {"analytics",
       {{"shapley_samples", c.shapley_samples},
        {"shapley_permutations", c.shapley_permutations},
        {"seed", c.shapley_seed}}},
      {"server",
       {{"host", c.server.host}, {"port", c.server.port}, {"cors_origin", c.server.cors_origin}}},
  };
  j["projection_origin"] = c.projection_origin
                               ? json{{"lat", c.projection_origin->lat}, {"lon", c.projection_origin->lon}}
                               : json(nullptr);
  return j.dump(2);
}

}  // namespace urbanlens
