#include "urbanlens/workspace.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "urbanlens/error.hpp"

namespace urbanlens {

using nlohmann::json;

const char* to_string(Stage s) {
  switch (s) {
    case Stage::ingested: return "ingest";
    case Stage::built: return "build";
    case Stage::trips: return "synth-trips";
    case Stage::trained: return "train";
    case Stage::analyzed: return "analyze";
  }
  return "?";
}

const char* command_for(Stage s) { return to_string(s); }

void Workspace::require(Stage s) const {
  if (!has(s)) {
    throw Error(ErrorCode::prerequisite, std::string("stage '") + to_string(s) +
                                             "' has not run; run `urbanlens " + command_for(s) +
                                             " --config <file>` first");
  }
}

std::vector<NodeId> Workspace::hotspot_nodes() const {
  std::vector<NodeId> out;
  for (const auto& h : hotspots) {
    if (h.is_hotspot) out.push_back(h.node);
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'U', 'L', 'W', 'S'};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json point_json(const GeoPoint& p) { return json::array({p.lat, p.lon}); }
GeoPoint point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json polygons_json(const std::vector<Polygon>& parts) {
  json out = json::array();
  for (const auto& poly : parts) {
    json rings = json::array();
    for (const auto& ring : poly.rings) {
      json r = json::array();
      for (const auto& p : ring) r.push_back(point_json(p));
      rings.push_back(std::move(r));
    }
    out.push_back(std::move(rings));
  }
  return out;
}

std::vector<Polygon> polygons_from(const json& j) {
  std::vector<Polygon> out;
  for (const auto& rings : j) {
    Polygon poly;
    for (const auto& r : rings) {
      Ring ring;
      for (const auto& p : r) ring.push_back(point_from(p));
      poly.rings.push_back(std::move(ring));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

json matrix_json(const SquareMatrix& m) { return {{"n", m.n}, {"values", m.values}}; }
SquareMatrix matrix_from(const json& j) {
  SquareMatrix m;
  m.n = j.at("n");
  m.values = j.at("values").get<std::vector<double>>();
  return m;
}

json shapley_json(const ShapleyReport& r) {
  return {{"mean_abs", r.mean_abs},
          {"percent", r.percent},
          {"layer_sum", r.layer_sum},
          {"layer_percent", r.layer_percent},
          {"sample_size", r.sample_size},
          {"method", r.method == ShapleyMethod::exact ? "exact" : "monte_carlo"},
          {"permutations", r.permutations}};
}

ShapleyReport shapley_from(const json& j) {
  ShapleyReport r;
  r.mean_abs = j.at("mean_abs").get<std::vector<double>>();
  r.percent = j.at("percent").get<std::vector<double>>();
  r.layer_sum = j.at("layer_sum").get<std::vector<double>>();
  r.layer_percent = j.at("layer_percent").get<std::vector<double>>();
  r.sample_size = j.at("sample_size");
  r.method = j.at("method") == "exact" ? ShapleyMethod::exact : ShapleyMethod::monte_carlo;
  r.permutations = j.at("permutations");
  return r;
}

json grid_json(const PredictionGrid& g) {
  return {{"cell_m", g.cell_m}, {"min_x", g.min_x}, {"min_y", g.min_y}, {"nx", g.nx},
          {"ny", g.ny},         {"success", g.success}, {"failure", g.failure}};
}

PredictionGrid grid_from(const json& j) {
  PredictionGrid g;
  g.cell_m = j.at("cell_m");
  g.min_x = j.at("min_x");
  g.min_y = j.at("min_y");
  g.nx = j.at("nx");
  g.ny = j.at("ny");
  g.success = j.at("success").get<std::vector<std::uint32_t>>();
  g.failure = j.at("failure").get<std::vector<std::uint32_t>>();
  if (g.success.size() != g.cells() || g.failure.size() != g.cells()) {
    throw std::invalid_argument("grid size mismatch");
  }
  return g;
}

json to_json(const Workspace& w) {
  json j;
  j["stage"] = w.stage;
  j["config"] = w.config_json;
  j["warnings"] = w.warnings;

  json streets = json::array();
  for (const auto& line : w.streets) {
    json l = json::array();
    for (const auto& p : line) l.push_back(point_json(p));
    streets.push_back(std::move(l));
  }
  j["streets"] = std::move(streets);

  json crimes = json::array();
  for (const auto& c : w.crimes) {
    const auto& t = c.time;
    crimes.push_back({c.location.lat, c.location.lon, static_cast<int>(c.type), t.year, t.month,
                      t.day, t.hour, t.minute, t.second});
  }
  j["crimes"] = std::move(crimes);

  json facilities = json::array();
  for (const auto& f : w.facilities) {
    facilities.push_back({f.location.lat, f.location.lon, static_cast<int>(f.category)});
  }
  j["facilities"] = std::move(facilities);

  json favelas = json::array();
  for (const auto& f : w.favelas) favelas.push_back({{"name", f.name}, {"parts", polygons_json(f.parts)}});
  j["favelas"] = std::move(favelas);

  json tracts = json::array();
  for (const auto& t : w.tracts) {
    tracts.push_back({{"code", t.code},
                      {"population", t.population},
                      {"indicators", t.indicators},
                      {"parts", polygons_json(t.parts)}});
  }
  j["tracts"] = std::move(tracts);

  json stations = json::array();
  for (const auto& s : w.stations) {
    json monthly = json::array();
    for (const auto& [m, c] : s.monthly) monthly.push_back({m, c.tmax_c, c.tmin_c, c.precip_mm});
    stations.push_back({{"id", s.id},
                        {"name", s.name},
                        {"location", point_json(s.location)},
                        {"monthly", std::move(monthly)}});
  }
  j["stations"] = std::move(stations);

  if (w.has(Stage::built)) {
    const auto& g = w.graph;
    std::vector<double> coords;
    coords.reserve(2 * g.node_count());
    for (const auto& p : g.nodes()) {
      coords.push_back(p.lat);
      coords.push_back(p.lon);
    }
    std::vector<double> edges;
    for (const auto& e : g.edges()) {
      edges.push_back(e.a);
      edges.push_back(e.b);
      edges.push_back(e.length_m);
    }
    const auto& idx = g.index().config();
    j["graph"] = {{"origin", point_json(g.projection().origin())},
                  {"nodes", std::move(coords)},
                  {"edges", std::move(edges)},
                  {"leaf_capacity", idx.leaf_capacity},
                  {"max_depth", idx.max_depth}};
    std::vector<int> classes;
    for (auto c : w.classes) classes.push_back(static_cast<int>(c));
    j["classes"] = std::move(classes);
    json hotspots = json::array();
    for (const auto& h : w.hotspots) {
      hotspots.push_back({h.node, h.stay_active, h.become_active, h.stationary_active,
                          h.is_hotspot, h.count});
    }
    j["hotspots"] = std::move(hotspots);
  }

  if (w.has(Stage::trips)) {
    std::vector<std::uint32_t> trips;
    trips.reserve(6 * w.trips.size());
    for (const auto& t : w.trips) {
      trips.insert(trips.end(), {t.origin, t.destination, static_cast<std::uint32_t>(t.period),
                                 static_cast<std::uint32_t>(t.weekday),
                                 static_cast<std::uint32_t>(t.month),
                                 static_cast<std::uint32_t>(t.label)});
    }
    j["trips"] = std::move(trips);
    j["occurrence_probability"] = w.occurrence_probability;
    j["near_hotspot_share"] = w.near_hotspot_share;
    j["no_hotspots"] = w.no_hotspots;
    std::vector<double> features;
    features.reserve(kNodeFeatureCount * w.features.size());
    for (const auto& f : w.features) features.insert(features.end(), f.values.begin(), f.values.end());
    j["features"] = std::move(features);
  }

  if (w.model) j["model"] = model_to_json(*w.model);
  if (w.evaluation) {
    const auto& e = *w.evaluation;
    j["evaluation"] = {{"test_indices", e.test_indices},
                       {"test_predictions", e.test_predictions},
                       {"confusion", {e.confusion.tp, e.confusion.fn, e.confusion.tn, e.confusion.fp}},
                       {"g_mean", e.g_mean},
                       {"shuffled_g_mean", e.shuffled_g_mean},
                       {"train_size", e.train_size},
                       {"balanced_train_size", e.balanced_train_size},
                       {"background", e.background}};
  }
  if (w.grid) j["grid"] = grid_json(*w.grid);
  if (w.correlation) {
    const auto& c = *w.correlation;
    j["correlation"] = {{"full", matrix_json(c.full.matrix)},
                        {"constant", c.full.constant_features},
                        {"reduced", matrix_json(c.reduced.matrix)},
                        {"singleton", c.reduced.singleton_groups},
                        {"assignment", c.assignment},
                        {"rows", c.rows}};
  }
  if (w.shapley) j["shapley"] = shapley_json(*w.shapley);
  return j;
}

Workspace from_json(const json& j) {
  Workspace w;
  w.stage = j.at("stage");
  w.config_json = j.at("config");
  w.warnings = j.at("warnings").get<Warnings>();

  for (const auto& l : j.at("streets")) {
    Polyline line;
    for (const auto& p : l) line.push_back(point_from(p));
    w.streets.push_back(std::move(line));
  }
  for (const auto& c : j.at("crimes")) {
    CrimeEvent e;
    e.location = {c.at(0), c.at(1)};
    e.type = static_cast<CrimeType>(c.at(2).get<int>());
    e.time = {c.at(3), c.at(4), c.at(5), c.at(6), c.at(7), c.at(8)};
    w.crimes.push_back(e);
  }
  for (const auto& f : j.at("facilities")) {
    w.facilities.push_back({{f.at(0), f.at(1)}, static_cast<TransportCategory>(f.at(2).get<int>())});
  }
  for (const auto& f : j.at("favelas")) {
    w.favelas.push_back({f.at("name"), polygons_from(f.at("parts"))});
  }
  for (const auto& t : j.at("tracts")) {
    CensusTract tract;
    tract.code = t.at("code");
    tract.population = t.at("population");
    tract.indicators = t.at("indicators").get<CensusValues>();
    tract.parts = polygons_from(t.at("parts"));
    w.tracts.push_back(std::move(tract));
  }
  for (const auto& s : j.at("stations")) {
    WeatherStation st;
    st.id = s.at("id");
    st.name = s.at("name");
    st.location = point_from(s.at("location"));
    for (const auto& m : s.at("monthly")) st.monthly[m.at(0).get<int>()] = {m.at(1), m.at(2), m.at(3)};
    w.stations.push_back(std::move(st));
  }

  if (w.has(Stage::built)) {
    const auto& g = j.at("graph");
    const auto coords = g.at("nodes").get<std::vector<double>>();
    std::vector<GeoPoint> nodes;
    for (std::size_t i = 0; i + 1 < coords.size(); i += 2) nodes.push_back({coords[i], coords[i + 1]});
    const auto flat = g.at("edges").get<std::vector<double>>();
    std::vector<StreetEdge> edges;
    for (std::size_t i = 0; i + 2 < flat.size(); i += 3) {
      edges.push_back({static_cast<NodeId>(flat[i]), static_cast<NodeId>(flat[i + 1]), flat[i + 2]});
    }
    IndexConfig idx;
    idx.leaf_capacity = g.at("leaf_capacity");
    idx.max_depth = g.at("max_depth");
    w.graph = StreetGraph(Projection(point_from(g.at("origin"))), std::move(nodes),
                          std::move(edges), idx);
    for (int c : j.at("classes")) w.classes.push_back(static_cast<NodeClass>(c));
    for (const auto& h : j.at("hotspots")) {
      w.hotspots.push_back({h.at(0), h.at(1), h.at(2), h.at(3), h.at(4), h.at(5)});
    }
  }

  if (w.has(Stage::trips)) {
    const auto flat = j.at("trips").get<std::vector<std::uint32_t>>();
    for (std::size_t i = 0; i + 5 < flat.size(); i += 6) {
      w.trips.push_back({flat[i], flat[i + 1], static_cast<Period>(flat[i + 2]),
                         static_cast<int>(flat[i + 3]), static_cast<int>(flat[i + 4]),
                         static_cast<TripLabel>(flat[i + 5])});
    }
    w.occurrence_probability = j.at("occurrence_probability");
    w.near_hotspot_share = j.at("near_hotspot_share");
    w.no_hotspots = j.at("no_hotspots");
    const auto features = j.at("features").get<std::vector<double>>();
    for (std::size_t i = 0; i + kNodeFeatureCount <= features.size(); i += kNodeFeatureCount) {
      NodeFeatures f;
      std::copy_n(features.begin() + static_cast<std::ptrdiff_t>(i), kNodeFeatureCount, f.values.begin());
      w.features.push_back(f);
    }
  }

  if (j.contains("model")) w.model = model_from_json(j.at("model").get<std::string>());
  if (j.contains("evaluation")) {
    const auto& e = j.at("evaluation");
    Evaluation ev;
    ev.test_indices = e.at("test_indices").get<std::vector<std::size_t>>();
    ev.test_predictions = e.at("test_predictions").get<std::vector<std::uint8_t>>();
    const auto& c = e.at("confusion");
    ev.confusion = {c.at(0), c.at(1), c.at(2), c.at(3)};
    ev.g_mean = e.at("g_mean");
    ev.shuffled_g_mean = e.at("shuffled_g_mean");
    ev.train_size = e.at("train_size");
    ev.balanced_train_size = e.at("balanced_train_size");
    ev.background = e.at("background").get<std::vector<double>>();
    w.evaluation = std::move(ev);
  }
  if (j.contains("grid")) w.grid = grid_from(j.at("grid"));
  if (j.contains("correlation")) {
    const auto& c = j.at("correlation");
    CorrelationReport r;
    r.full.matrix = matrix_from(c.at("full"));
    r.full.constant_features = c.at("constant").get<std::vector<std::size_t>>();
    r.reduced.matrix = matrix_from(c.at("reduced"));
    r.reduced.singleton_groups = c.at("singleton").get<std::vector<std::size_t>>();
    r.assignment = c.at("assignment").get<std::vector<std::size_t>>();
    r.rows = c.at("rows");
    w.correlation = std::move(r);
  }
  if (j.contains("shapley")) w.shapley = shapley_from(j.at("shapley"));
  return w;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]))
         << (8 * i);
  }
  return v;
}

constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8;

}  // namespace

std::string serialize_workspace(const Workspace& w) {
  const auto cbor = json::to_cbor(to_json(w));
  const std::string payload(cbor.begin(), cbor.end());
  std::string out(kMagic, 4);
  put_u32(out, kWorkspaceVersion);
  put_u64(out, payload.size());
  put_u64(out, fnv1a(payload));
  out += payload;
  return out;
}

Workspace deserialize_workspace(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::corrupt_workspace, "not an urbanlens workspace file");
  }
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorCode::corrupt_workspace, "workspace file is truncated (incomplete header)");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kWorkspaceVersion) {
    throw Error(ErrorCode::version_mismatch,
                "workspace format version " + std::to_string(version) +
                    " cannot be loaded by this build (expected " +
                    std::to_string(kWorkspaceVersion) + "); re-run the pipeline to migrate");
  }
  const auto size = get_le(bytes, 8, 8);
  const auto checksum = get_le(bytes, 16, 8);
  if (bytes.size() - kHeaderSize != size) {
    throw Error(ErrorCode::corrupt_workspace,
                "workspace file is truncated or padded: expected " + std::to_string(size) +
                    " payload bytes, found " + std::to_string(bytes.size() - kHeaderSize));
  }
  const std::string payload = bytes.substr(kHeaderSize);
  if (fnv1a(payload) != checksum) {
    throw Error(ErrorCode::corrupt_workspace, "workspace checksum mismatch");
  }
  try {
    return from_json(json::from_cbor(payload));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::corrupt_workspace, std::string("malformed workspace: ") + e.what());
  }
}

void save_workspace(const Workspace& w, const std::filesystem::path& path) {
  const auto bytes = serialize_workspace(w);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Workspace load_workspace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::prerequisite,
                "workspace " + path.string() + " not found; run `urbanlens ingest` first");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_workspace(buf.str());
}

}  // namespace urbanlens
