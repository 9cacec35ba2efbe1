#include "urbanlens/service.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "urbanlens/error.hpp"
#include "urbanlens/temporal_lens.hpp"

namespace urbanlens {

using nlohmann::json;

namespace {

/// Error surfaced to API clients.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::string parameter;
};

ApiResponse error_response(const ApiError& e) {
  json j = {{"error", {{"code", e.code}, {"message", e.message}}}};
  if (!e.parameter.empty()) j["error"]["parameter"] = e.parameter;
  return {e.status, j.dump()};
}

ApiError from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::prerequisite: return {409, "stage_missing", e.what(), ""};
    case ErrorCode::unsupported_layer: return {422, "unsupported_layer", e.what(), "layer"};
    case ErrorCode::not_found: return {404, "not_found", e.what(), ""};
    case ErrorCode::invalid_argument: return {400, "invalid_parameter", e.what(), ""};
    default: return {500, to_string(e.code()), e.what(), ""};
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

double parse_number(const std::string& text, const std::string& param) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ApiError{400, "invalid_parameter", "parameter '" + param + "' must be a number", param};
  }
  return v;
}

const std::string& require_param(const ApiRequest& r, const std::string& name) {
  const auto it = r.query.find(name);
  if (it == r.query.end()) {
    throw ApiError{400, "missing_parameter", "parameter '" + name + "' is required", name};
  }
  return it->second;
}

std::optional<GeoBox> parse_bbox(const ApiRequest& r) {
  const auto it = r.query.find("bbox");
  if (it == r.query.end()) return std::nullopt;
  std::vector<double> v;
  std::stringstream ss(it->second);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(parse_number(part, "bbox"));
  if (v.size() != 4 || v[0] > v[2] || v[1] > v[3]) {
    throw ApiError{400, "invalid_parameter",
                   "bbox must be lon1,lat1,lon2,lat2 with lon1<=lon2 and lat1<=lat2", "bbox"};
  }
  return GeoBox{v[0], v[1], v[2], v[3]};
}

LayerId parse_layer(const std::string& text, const std::string& param) {
  const double v = parse_number(text, param);
  const auto id = v == std::floor(v) ? layer_from_int(static_cast<int>(v)) : std::nullopt;
  if (!id) throw ApiError{404, "layer_not_found", "no layer with id '" + text + "'", param};
  return *id;
}

json point(const GeoPoint& p) { return {{"lat", p.lat}, {"lon", p.lon}}; }

json rings(const std::vector<Polygon>& parts) {
  json out = json::array();
  for (const auto& poly : parts) {
    json rs = json::array();
    for (const auto& ring : poly.rings) {
      json r = json::array();
      for (const auto& p : ring) r.push_back({p.lon, p.lat});
      rs.push_back(std::move(r));
    }
    out.push_back(std::move(rs));
  }
  return out;
}

GeoBox parts_box(const std::vector<Polygon>& parts) {
  std::vector<GeoPoint> all;
  for (const auto& poly : parts) {
    for (const auto& ring : poly.rings) all.insert(all.end(), ring.begin(), ring.end());
  }
  return GeoBox::around(all);
}

json reduced_matrix_json(const SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    rows.push_back(std::vector<double>(m.values.begin() + static_cast<std::ptrdiff_t>(i * m.n),
                                       m.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.n)));
  }
  return rows;
}

}  // namespace

Api::Api(std::shared_ptr<const Workspace> workspace, IndexConfig index)
    : workspace_(std::move(workspace)) {
  const auto& w = *workspace_;
  if (!w.has(Stage::built)) return;
  const auto& proj = w.graph.projection();
  const auto make = [&](LayerId id, std::vector<QuadTree::Item> items) {
    indexes_.emplace(id, QuadTree(std::move(items), proj.origin(), index));
  };
  std::vector<QuadTree::Item> items;
  for (std::size_t i = 0; i < w.crimes.size(); ++i) {
    items.push_back({proj(w.crimes[i].location), static_cast<ItemId>(i)});
  }
  make(LayerId::crime, std::move(items));
  items = {};
  for (std::size_t i = 0; i < w.stations.size(); ++i) {
    items.push_back({proj(w.stations[i].location), static_cast<ItemId>(i)});
  }
  make(LayerId::weather, std::move(items));
  items = {};
  for (std::size_t i = 0; i < w.facilities.size(); ++i) {
    items.push_back({proj(w.facilities[i].location), static_cast<ItemId>(i)});
  }
  make(LayerId::transport, std::move(items));
  items = {};
  for (NodeId n = 0; n < w.graph.node_count(); ++n) items.push_back({w.graph.planar()[n], n});
  make(LayerId::graph, std::move(items));
  items = {};
  for (NodeId n : w.hotspot_nodes()) items.push_back({w.graph.planar()[n], n});
  make(LayerId::hotspots, std::move(items));
  items = {};
  for (std::size_t i = 0; i < w.trips.size(); ++i) {
    items.push_back({w.graph.planar()[w.trips[i].origin], static_cast<ItemId>(i)});
  }
  make(LayerId::trips, std::move(items));
}

const QuadTree* Api::lens_index(LayerId layer) const {
  const auto it = indexes_.find(layer);
  return it == indexes_.end() ? nullptr : &it->second;
}

namespace {

class Handler {
 public:
  Handler(const Api& api, const Workspace& w) : api_(api), w_(w) {}

  json health() const {
    return {{"status", "ok"},
            {"version", kVersion},
            {"workspace_version", kWorkspaceVersion},
            {"stage", w_.stage > 0 ? to_string(static_cast<Stage>(w_.stage)) : "none"}};
  }

  std::size_t record_count(LayerId id) const {
    switch (id) {
      case LayerId::crime: return w_.crimes.size();
      case LayerId::trips: return w_.trips.size();
      case LayerId::weather: return w_.stations.size();
      case LayerId::transport: return w_.facilities.size();
      case LayerId::favelas: return w_.favelas.size();
      case LayerId::socioeconomic: return w_.tracts.size();
      case LayerId::graph: return w_.graph.node_count();
      case LayerId::hotspots: return w_.hotspot_nodes().size();
      case LayerId::prediction: return w_.grid ? w_.grid->cells() : 0;
    }
    return 0;
  }

  json layers() const {
    json out = json::array();
    for (const auto& info : kLayers) {
      const int id = static_cast<int>(info.id);
      out.push_back({{"id", id},
                     {"name", info.name},
                     {"geometry", to_string(info.geometry)},
                     {"count", record_count(info.id)},
                     {"key", std::to_string(id)},
                     {"icon", info.icon},
                     {"timestamped", info.timestamped}});
    }
    return out;
  }

  json features(LayerId id, const std::optional<GeoBox>& bbox) const {
    const auto inside = [&](const GeoPoint& p) { return !bbox || bbox->contains(p); };
    json items = json::array();
    switch (id) {
      case LayerId::crime:
        for (std::size_t i = 0; i < w_.crimes.size(); ++i) {
          const auto& c = w_.crimes[i];
          if (!inside(c.location)) continue;
          items.push_back({{"id", i}, {"lat", c.location.lat}, {"lon", c.location.lon},
                           {"type", to_string(c.type)}, {"time", c.time.to_string()}});
        }
        break;
      case LayerId::trips:
        require(Stage::trips);
        for (std::size_t i = 0; i < w_.trips.size(); ++i) {
          const auto& t = w_.trips[i];
          const auto& o = w_.graph.nodes()[t.origin];
          const auto& d = w_.graph.nodes()[t.destination];
          if (!inside(o) && !inside(d)) continue;
          items.push_back({{"id", i}, {"origin", point(o)}, {"destination", point(d)},
                           {"label", to_string(t.label)}, {"period", to_string(t.period)},
                           {"weekday", weekday_name(t.weekday)}, {"month", t.month}});
        }
        break;
      case LayerId::weather:
        for (std::size_t i = 0; i < w_.stations.size(); ++i) {
          const auto& s = w_.stations[i];
          if (!inside(s.location)) continue;
          items.push_back({{"id", i}, {"station_id", s.id}, {"name", s.name},
                           {"lat", s.location.lat}, {"lon", s.location.lon},
                           {"months", s.monthly.size()}});
        }
        break;
      case LayerId::transport:
        for (std::size_t i = 0; i < w_.facilities.size(); ++i) {
          const auto& f = w_.facilities[i];
          if (!inside(f.location)) continue;
          items.push_back({{"id", i}, {"lat", f.location.lat}, {"lon", f.location.lon},
                           {"category", to_string(f.category)}});
        }
        break;
      case LayerId::favelas:
        for (std::size_t i = 0; i < w_.favelas.size(); ++i) {
          const auto& f = w_.favelas[i];
          if (bbox && !bbox->intersects(parts_box(f.parts))) continue;
          items.push_back({{"id", i}, {"name", f.name}, {"polygons", rings(f.parts)}});
        }
        break;
      case LayerId::socioeconomic:
        for (std::size_t i = 0; i < w_.tracts.size(); ++i) {
          const auto& t = w_.tracts[i];
          if (bbox && !bbox->intersects(parts_box(t.parts))) continue;
          json props = {{"population", t.population}};
          for (std::size_t k = 0; k < kCensusIndicators; ++k) {
            props[std::string(kCensusIndicatorNames[k])] = t.indicators[k];
          }
          items.push_back({{"id", i}, {"code", t.code}, {"properties", props},
                           {"polygons", rings(t.parts)}});
        }
        break;
      case LayerId::graph:
        return graph_nodes(bbox);
      case LayerId::hotspots:
        require(Stage::built);
        for (NodeId n : w_.hotspot_nodes()) {
          const auto& p = w_.graph.nodes()[n];
          if (!inside(p)) continue;
          const auto& h = w_.hotspots[n];
          items.push_back({{"id", n}, {"lat", p.lat}, {"lon", p.lon},
                           {"stationary_active", h.stationary_active}, {"count", h.count}});
        }
        break;
      case LayerId::prediction: {
        require(Stage::trained);
        const auto& g = *w_.grid;
        for (std::size_t c = 0; c < g.cells(); ++c) {
          const auto cell = grid_cell(c);
          const GeoBox box{cell["bbox"][0], cell["bbox"][1], cell["bbox"][2], cell["bbox"][3]};
          if (bbox && !bbox->intersects(box)) continue;
          items.push_back(cell);
        }
        break;
      }
    }
    const auto& info = layer_info(id);
    return {{"layer", static_cast<int>(id)},
            {"geometry", to_string(info.geometry)},
            {"features", std::move(items)}};
  }

  json graph_nodes(const std::optional<GeoBox>& bbox) const {
    require(Stage::built);
    json items = json::array();
    for (NodeId n = 0; n < w_.graph.node_count(); ++n) {
      const auto& p = w_.graph.nodes()[n];
      if (bbox && !bbox->contains(p)) continue;
      items.push_back({{"id", n}, {"lat", p.lat}, {"lon", p.lon},
                       {"class", to_string(w_.classes[n])}, {"degree", w_.graph.degree(n)}});
    }
    return {{"layer", static_cast<int>(LayerId::graph)},
            {"geometry", "point"},
            {"features", std::move(items)}};
  }

  json lens(const ApiRequest& r) const {
    const auto layer = parse_layer(require_param(r, "layer"), "layer");
    const double lon = parse_number(require_param(r, "lon"), "lon");
    const double lat = parse_number(require_param(r, "lat"), "lat");
    const double k = parse_number(require_param(r, "k"), "k");
    if (k < 0 || k != std::floor(k)) {
      throw ApiError{400, "invalid_parameter", "k must be a non-negative integer", "k"};
    }
    const GeoPoint cursor{lat, lon};
    if (!cursor.valid()) throw ApiError{400, "invalid_parameter", "cursor out of range", "lat"};
    if (layer_info(layer).geometry == GeometryKind::polygon) {
      throw ApiError{422, "unsupported_layer",
                     std::string("layer '") + std::string(layer_info(layer).name) +
                         "' has polygon geometry; the spatial lens needs points",
                     "layer"};
    }
    require(Stage::built);
    if (layer == LayerId::trips) require(Stage::trips);
    const auto* index = api_.lens_index(layer);
    const auto result = urbanlens::lens(*index, cursor, static_cast<std::size_t>(k));
    return {{"layer", static_cast<int>(layer)},
            {"k", static_cast<std::size_t>(k)},
            {"radius_m", result.radius},
            {"members", result.members}};
  }

  TemporalHistogram histogram(LayerId layer, Granularity g) const {
    switch (layer) {
      case LayerId::crime: {
        std::vector<Timestamp> ts;
        ts.reserve(w_.crimes.size());
        for (const auto& c : w_.crimes) ts.push_back(c.time);
        return make_histogram(ts, g);
      }
      case LayerId::trips: {
        require(Stage::trips);
        if (g == Granularity::hour) {
          throw ApiError{400, "invalid_parameter",
                         "trips carry a period of day, not an hour; use month or weekday",
                         "granularity"};
        }
        std::vector<std::uint64_t> counts(bin_count(g), 0);
        for (const auto& t : w_.trips) {
          ++counts[static_cast<std::size_t>(g == Granularity::month ? t.month - 1 : t.weekday)];
        }
        return histogram_from_counts(std::move(counts));
      }
      case LayerId::weather: {
        if (g != Granularity::month) {
          throw ApiError{400, "invalid_parameter", "weather records are monthly", "granularity"};
        }
        std::vector<std::uint64_t> counts(12, 0);
        for (const auto& s : w_.stations) {
          for (const auto& [m, _] : s.monthly) ++counts[static_cast<std::size_t>(m % 100 - 1)];
        }
        return histogram_from_counts(std::move(counts));
      }
      default:
        throw ApiError{422, "untimestamped_layer",
                       std::string("layer '") + std::string(layer_info(layer).name) +
                           "' has no timestamps",
                       "layer"};
    }
  }

  json histogram_json(LayerId layer, Granularity g) const {
    const auto h = histogram(layer, g);
    std::vector<std::string> labels;
    for (auto l : bin_labels(g)) labels.emplace_back(l);
    return {{"layer", static_cast<int>(layer)},
            {"granularity", to_string(g)},
            {"labels", labels},
            {"counts", h.counts},
            {"cumulative", h.cumulative},
            {"total", h.total()}};
  }

  json window(const std::string& body) const {
    json req;
    try {
      req = json::parse(body);
    } catch (const json::exception&) {
      throw ApiError{400, "invalid_body", "request body must be JSON", "body"};
    }
    if (!req.is_object()) throw ApiError{400, "invalid_body", "request body must be an object", "body"};
    TemporalHistogram h;
    try {
      if (req.contains("counts")) {
        h = histogram_from_counts(req.at("counts").get<std::vector<std::uint64_t>>());
      } else {
        const auto& layer_field = req.at("layer");
        const auto layer = parse_layer(layer_field.is_string() ? layer_field.get<std::string>()
                                                               : layer_field.dump(),
                                       "layer");
        const auto g = parse_granularity(req.value("granularity", std::string("month")));
        h = histogram(layer, g);
      }
    } catch (const json::exception& e) {
      throw ApiError{400, "invalid_body", std::string("histogram reference: ") + e.what(), "layer"};
    }
    TargetMode mode;
    double value = 0.0;
    try {
      mode = parse_target_mode(req.value("mode", std::string("count")));
      value = req.at("value").get<double>();
    } catch (const json::exception&) {
      throw ApiError{400, "invalid_body", "'value' must be a number", "value"};
    }
    const auto target = resolve_target(h, mode, value);

    TemporalWindow w;
    const auto current = req.find("current");
    if (current == req.end() || current->is_null()) {
      w = initial_window(h, target);
    } else {
      try {
        w.lo = current->at("lo").get<std::size_t>();
        w.hi = current->at("hi").get<std::size_t>();
        const auto dir = current->value("direction", std::string("forward"));
        if (dir != "forward" && dir != "backward") throw std::invalid_argument("direction");
        w.direction = dir == "forward" ? Direction::forward : Direction::backward;
        w.target = target;
      } catch (const std::exception&) {
        throw ApiError{400, "invalid_body", "'current' must be {lo, hi, direction}", "current"};
      }
      w = step(h, w);
    }
    return {{"lo", w.lo},
            {"hi", w.hi},
            {"direction", to_string(w.direction)},
            {"target", w.target},
            {"count", h.count(w.lo, w.hi)},
            {"total", h.total()}};
  }

  json grid_cell(std::size_t c) const {
    const auto& g = *w_.grid;
    const auto box = g.cell_box(c);
    const auto lo = w_.graph.projection().inverse({box.min_x, box.min_y});
    const auto hi = w_.graph.projection().inverse({box.max_x, box.max_y});
    return {{"cell", c},
            {"ix", c % g.nx},
            {"iy", c / g.nx},
            {"bbox", {lo.lon, lo.lat, hi.lon, hi.lat}},
            {"success", g.success[c]},
            {"failure", g.failure[c]}};
  }

  json grid() const {
    require(Stage::trained);
    const auto& g = *w_.grid;
    json cells = json::array();
    for (std::size_t c = 0; c < g.cells(); ++c) cells.push_back(grid_cell(c));
    const auto& e = *w_.evaluation;
    return {{"cell_m", g.cell_m},
            {"nx", g.nx},
            {"ny", g.ny},
            {"evaluated_trips", e.test_indices.size()},
            {"g_mean", e.g_mean},
            {"confusion", {{"tp", e.confusion.tp}, {"fn", e.confusion.fn},
                           {"tn", e.confusion.tn}, {"fp", e.confusion.fp}}},
            {"cells", std::move(cells)}};
  }

  json correlation() const {
    require(Stage::analyzed);
    const auto& c = *w_.correlation;
    std::vector<std::string> layers(kThematicLayerNames.begin(), kThematicLayerNames.end());
    return {{"layers", layers},
            {"reduced", reduced_matrix_json(c.reduced.matrix)},
            {"features", trip_feature_names()},
            {"feature_layers", c.assignment},
            {"full", reduced_matrix_json(c.full.matrix)},
            {"constant_features", c.full.constant_features},
            {"singleton_layers", c.reduced.singleton_groups},
            {"rows", c.rows}};
  }

  json shapley() const {
    require(Stage::analyzed);
    const auto& s = *w_.shapley;
    const auto names = trip_feature_names();
    const auto assignment = trip_feature_layers();
    json features = json::array();
    for (std::size_t i = 0; i < s.mean_abs.size(); ++i) {
      features.push_back({{"name", names[i]},
                          {"layer", kThematicLayerNames[assignment[i]]},
                          {"mean_abs", s.mean_abs[i]},
                          {"percent", s.percent[i]}});
    }
    json layers = json::array();
    for (std::size_t g = 0; g < s.layer_sum.size(); ++g) {
      layers.push_back({{"name", kThematicLayerNames[g]},
                        {"sum", s.layer_sum[g]},
                        {"percent", s.layer_percent[g]}});
    }
    return {{"features", std::move(features)},
            {"layers", std::move(layers)},
            {"sample_size", s.sample_size},
            {"method", s.method == ShapleyMethod::exact ? "exact" : "monte_carlo"},
            {"permutations", s.permutations}};
  }

 private:
  void require(Stage s) const {
    if (!w_.has(s)) {
      throw ApiError{409, "stage_missing",
                     std::string("pipeline stage '") + to_string(s) +
                         "' has not run; run `urbanlens " + command_for(s) +
                         " --config <file>` and restart the server",
                     ""};
    }
  }

  const Api& api_;
  const Workspace& w_;
};

}  // namespace

ApiResponse Api::handle(const ApiRequest& request) const {
  try {
    const Handler h(*this, *workspace_);
    const auto parts = split_path(request.path);
    const bool get = request.method == "GET";
    const auto ok = [](const json& j) { return ApiResponse{200, j.dump()}; };
    if (parts.size() >= 2 && parts[0] == "api") {
      const auto& root = parts[1];
      if (get && parts.size() == 2 && root == "health") return ok(h.health());
      if (get && parts.size() == 2 && root == "layers") return ok(h.layers());
      if (get && parts.size() == 4 && root == "layers" && parts[3] == "features") {
        const auto layer = parse_layer(parts[2], "id");
        return ok(h.features(layer, parse_bbox(request)));
      }
      if (get && parts.size() == 3 && root == "lens" && parts[2] == "spatial") return ok(h.lens(request));
      if (get && parts.size() == 4 && root == "temporal" && parts[3] == "histogram") {
        const auto layer = parse_layer(parts[2], "layer");
        const auto it = request.query.find("granularity");
        Granularity g = Granularity::month;
        if (it != request.query.end()) {
          try {
            g = parse_granularity(it->second);
          } catch (const Error& e) {
            throw ApiError{400, "invalid_parameter", e.what(), "granularity"};
          }
        }
        return ok(h.histogram_json(layer, g));
      }
      if (request.method == "POST" && parts.size() == 3 && root == "temporal" && parts[2] == "window") {
        return ok(h.window(request.body));
      }
      if (get && parts.size() == 3 && root == "prediction" && parts[2] == "grid") return ok(h.grid());
      if (get && parts.size() == 3 && root == "analytics" && parts[2] == "correlation") {
        return ok(h.correlation());
      }
      if (get && parts.size() == 3 && root == "analytics" && parts[2] == "shapley") {
        return ok(h.shapley());
      }
      if (get && parts.size() == 3 && root == "graph" && parts[2] == "nodes") {
        return ok(h.graph_nodes(parse_bbox(request)));
      }
    }
    return error_response({404, "not_found", request.method + " " + request.path + " is not an endpoint", ""});
  } catch (const ApiError& e) {
    return error_response(e);
  } catch (const Error& e) {
    return error_response(from_error(e));
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what(), ""});
  }
}

struct HttpServer::Impl {
  std::shared_ptr<const Api> api;
  ServerConfig config;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(std::shared_ptr<const Api> api, ServerConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->api = std::move(api);
  impl_->config = std::move(config);
  auto& server = impl_->server;
  const auto cors = impl_->config.cors_origin;
  const auto* api_ptr = impl_->api.get();
  const auto dispatch = [api_ptr, cors](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    const auto out = api_ptr->handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    if (!cors.empty()) res.set_header("Access-Control-Allow-Origin", cors);
  };
  server.Get(R"(/api/.*)", dispatch);
  server.Post(R"(/api/.*)", dispatch);
  server.Options(R"(/api/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    if (!cors.empty()) res.set_header("Access-Control-Allow-Origin", cors);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start() {
  auto& server = impl_->server;
  int port = impl_->config.port;
  if (port == 0) {
    port = server.bind_to_any_port(impl_->config.host);
  } else if (!server.bind_to_port(impl_->config.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::io, "cannot bind " + impl_->config.host + ":" +
                                   std::to_string(impl_->config.port));
  }
  impl_->thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  return port;
}

void HttpServer::listen() {
  if (!impl_->server.listen(impl_->config.host, impl_->config.port)) {
    throw Error(ErrorCode::io, "cannot listen on " + impl_->config.host + ":" +
                                   std::to_string(impl_->config.port));
  }
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace urbanlens
