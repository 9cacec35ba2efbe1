#include "urbanlens/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "urbanlens/error.hpp"

namespace urbanlens {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r': break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default: field += c; any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && last[-1] == ' ') --last;
  if (first == last) return std::nullopt;
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

class CsvTable {
 public:
  CsvTable(const std::filesystem::path& path, std::vector<std::string> required) : path_(path) {
    rows_ = parse_csv(read_file(path));
    if (rows_.empty()) throw Error(ErrorCode::ingest, path.string() + ": missing header row");
    for (std::size_t i = 0; i < rows_[0].size(); ++i) columns_[rows_[0][i]] = i;
    for (const auto& col : required) {
      if (!columns_.contains(col)) {
        throw Error(ErrorCode::ingest, path.string() + ": missing column '" + col + "'");
      }
    }
  }

  bool has(const std::string& col) const { return columns_.contains(col); }
  std::size_t column(const std::string& col) const { return columns_.at(col); }
  std::size_t data_rows() const { return rows_.size() - 1; }

  /// Calls fn(row, row_number); fn returns an error message to reject the row.
  Warnings each(double max_bad_fraction,
                const std::function<std::optional<std::string>(const std::vector<std::string>&,
                                                               std::size_t)>& fn) const {
    Warnings warnings;
    std::vector<std::string> errors;
    for (std::size_t r = 1; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      std::optional<std::string> err;
      if (row.size() != rows_[0].size()) {
        err = "expected " + std::to_string(rows_[0].size()) + " fields, found " +
              std::to_string(row.size());
      } else {
        err = fn(row, r);
      }
      if (err) errors.push_back("row " + std::to_string(r) + ": " + *err);
    }
    if (data_rows() == 0) warnings.push_back(path_.string() + ": no data rows");
    if (!errors.empty()) {
      const double share = static_cast<double>(errors.size()) / static_cast<double>(data_rows());
      if (share > max_bad_fraction) {
        std::string msg = path_.string() + ": " + std::to_string(errors.size()) + " of " +
                          std::to_string(data_rows()) + " rows rejected";
        for (std::size_t i = 0; i < errors.size() && i < 5; ++i) msg += "; " + errors[i];
        throw Error(ErrorCode::ingest, msg);
      }
      for (const auto& e : errors) warnings.push_back(path_.string() + ": skipped " + e);
    }
    return warnings;
  }

 private:
  std::filesystem::path path_;
  std::vector<std::vector<std::string>> rows_;
  std::unordered_map<std::string, std::size_t> columns_;
};

std::optional<std::string> read_location(const std::vector<std::string>& row, std::size_t lat_col,
                                         std::size_t lon_col, GeoPoint& out) {
  const auto lat = parse_double(row[lat_col]);
  const auto lon = parse_double(row[lon_col]);
  if (!lat || !lon) return "unparseable coordinate";
  out = {*lat, *lon};
  if (!out.valid()) return "coordinate out of range (" + row[lat_col] + ", " + row[lon_col] + ")";
  return std::nullopt;
}

void append(Warnings* sink, const Warnings& w) {
  if (sink) sink->insert(sink->end(), w.begin(), w.end());
}

}  // namespace

PointsCsv load_points_csv(const std::filesystem::path& path, const PointsCsvSchema& schema) {
  std::vector<std::string> required{schema.lat_column, schema.lon_column};
  if (schema.time_column) required.push_back(*schema.time_column);
  if (schema.category_column) required.push_back(*schema.category_column);
  const CsvTable table(path, required);
  const auto lat = table.column(schema.lat_column);
  const auto lon = table.column(schema.lon_column);

  PointsCsv out;
  out.warnings = table.each(
      schema.max_bad_fraction,
      [&](const auto& row, std::size_t r) -> std::optional<std::string> {
        PointRow p;
        p.row = r;
        if (auto err = read_location(row, lat, lon, p.location)) return err;
        if (schema.time_column) {
          const auto& text = row[table.column(*schema.time_column)];
          p.time = parse_timestamp(text);
          if (!p.time) return "unparseable timestamp '" + text + "'";
        }
        if (schema.category_column) {
          p.category = row[table.column(*schema.category_column)];
          if (!schema.allowed_categories.empty() &&
              std::find(schema.allowed_categories.begin(), schema.allowed_categories.end(),
                        p.category) == schema.allowed_categories.end()) {
            return "unknown category '" + p.category + "'";
          }
        }
        out.rows.push_back(std::move(p));
        return std::nullopt;
      });
  out.rejected = table.data_rows() - out.rows.size();
  return out;
}

std::vector<CrimeEvent> load_crimes_csv(const std::filesystem::path& path,
                                        double max_bad_fraction, Warnings* warnings) {
  PointsCsvSchema schema;
  schema.time_column = "datetime";
  schema.category_column = "crime_type";
  schema.allowed_categories = {"vehicle_theft", "phone_theft"};
  schema.max_bad_fraction = max_bad_fraction;
  auto csv = load_points_csv(path, schema);
  append(warnings, csv.warnings);
  std::vector<CrimeEvent> out;
  out.reserve(csv.rows.size());
  for (const auto& r : csv.rows) out.push_back({r.location, *r.time, *parse_crime_type(r.category)});
  return out;
}

std::vector<Facility> load_transport_csv(const std::filesystem::path& path,
                                         double max_bad_fraction, Warnings* warnings) {
  PointsCsvSchema schema;
  schema.category_column = "category";
  schema.allowed_categories = {"bus_stop", "terminal", "subway", "train"};
  schema.max_bad_fraction = max_bad_fraction;
  auto csv = load_points_csv(path, schema);
  append(warnings, csv.warnings);
  std::vector<Facility> out;
  out.reserve(csv.rows.size());
  for (const auto& r : csv.rows) out.push_back({r.location, *parse_transport_category(r.category)});
  return out;
}

std::vector<WeatherStation> load_stations_csv(const std::filesystem::path& path) {
  const CsvTable table(path, {"station_id", "name", "lat", "lon"});
  std::vector<WeatherStation> out;
  table.each(0.0, [&](const auto& row, std::size_t) -> std::optional<std::string> {
    WeatherStation s;
    s.id = row[table.column("station_id")];
    s.name = row[table.column("name")];
    if (auto err = read_location(row, table.column("lat"), table.column("lon"), s.location)) {
      return err;
    }
    for (const auto& existing : out) {
      if (existing.id == s.id) return "duplicate station id '" + s.id + "'";
    }
    out.push_back(std::move(s));
    return std::nullopt;
  });
  return out;
}

void load_weather_csv(const std::filesystem::path& path, std::vector<WeatherStation>& stations,
                      double max_bad_fraction, Warnings* warnings) {
  const CsvTable table(path, {"station_id", "date", "tmax_c", "tmin_c", "precip_mm"});
  append(warnings, table.each(max_bad_fraction, [&](const auto& row, std::size_t)
                                                    -> std::optional<std::string> {
    const auto& id = row[table.column("station_id")];
    auto it = std::find_if(stations.begin(), stations.end(),
                           [&](const WeatherStation& s) { return s.id == id; });
    if (it == stations.end()) return "unknown station '" + id + "'";
    const auto& date = row[table.column("date")];
    const auto ts = date.size() == 7 ? parse_timestamp(date) : std::nullopt;
    if (!ts) return "date must be YYYY-MM, got '" + date + "'";
    const auto tmax = parse_double(row[table.column("tmax_c")]);
    const auto tmin = parse_double(row[table.column("tmin_c")]);
    const auto precip = parse_double(row[table.column("precip_mm")]);
    if (!tmax || !tmin || !precip) return "unparseable climate value";
    it->monthly[year_month(*ts)] = {*tmax, *tmin, *precip};
    return std::nullopt;
  }));
}

std::vector<TripRecord> load_trips_csv(const std::filesystem::path& path, const StreetGraph& g,
                                       double max_bad_fraction, Warnings* warnings) {
  const CsvTable table(path, {"origin_lat", "origin_lon", "dest_lat", "dest_lon", "period",
                              "weekday", "month", "label"});
  std::vector<TripRecord> out;
  append(warnings, table.each(max_bad_fraction, [&](const auto& row, std::size_t)
                                                    -> std::optional<std::string> {
    GeoPoint o;
    GeoPoint d;
    if (auto err = read_location(row, table.column("origin_lat"), table.column("origin_lon"), o)) {
      return "origin " + *err;
    }
    if (auto err = read_location(row, table.column("dest_lat"), table.column("dest_lon"), d)) {
      return "destination " + *err;
    }
    const auto period = parse_period(row[table.column("period")]);
    const auto weekday = parse_weekday(row[table.column("weekday")]);
    const auto month = parse_double(row[table.column("month")]);
    const auto label = parse_trip_label(row[table.column("label")]);
    if (!period) return "unknown period '" + row[table.column("period")] + "'";
    if (!weekday) return "unknown weekday '" + row[table.column("weekday")] + "'";
    if (!month || *month < 1 || *month > 12 || *month != std::floor(*month)) {
      return "month must be 1..12";
    }
    if (!label) return "unknown label '" + row[table.column("label")] + "'";
    out.push_back({nearest_corner(g, o), nearest_corner(g, d), *period, *weekday,
                   static_cast<int>(*month), *label});
    return std::nullopt;
  }));
  return out;
}

std::string trips_to_csv(const StreetGraph& g, const std::vector<TripRecord>& trips) {
  std::ostringstream out;
  out.precision(17);
  out << "origin_lat,origin_lon,dest_lat,dest_lon,period,weekday,month,label\n";
  for (const auto& t : trips) {
    const auto& o = g.nodes()[t.origin];
    const auto& d = g.nodes()[t.destination];
    out << o.lat << ',' << o.lon << ',' << d.lat << ',' << d.lon << ',' << to_string(t.period)
        << ',' << weekday_name(t.weekday) << ',' << t.month << ',' << to_string(t.label) << '\n';
  }
  return out.str();
}

namespace {

json parse_geojson(const std::filesystem::path& path) {
  try {
    auto j = json::parse(read_file(path));
    if (!j.is_object() || j.value("type", "") != "FeatureCollection" ||
        !j.contains("features") || !j["features"].is_array()) {
      throw Error(ErrorCode::ingest, path.string() + ": expected a GeoJSON FeatureCollection");
    }
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ingest, path.string() + ": invalid JSON: " + e.what());
  }
}

GeoPoint position(const json& p) {
  if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
    throw std::invalid_argument("invalid position");
  }
  GeoPoint g{p[1].get<double>(), p[0].get<double>()};
  if (!g.valid()) throw std::invalid_argument("coordinate out of range");
  return g;
}

Ring ring_from(const json& coords) {
  if (!coords.is_array() || coords.empty()) throw std::invalid_argument("empty ring");
  Ring ring;
  for (const auto& p : coords) ring.push_back(position(p));
  if (ring.front() != ring.back()) throw std::invalid_argument("unclosed ring");
  ring.pop_back();
  Ring distinct;
  for (const auto& p : ring) {
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  }
  if (distinct.size() < 3) throw std::invalid_argument("ring has fewer than 3 distinct vertices");
  return ring;
}

Polygon polygon_from(const json& coords) {
  if (!coords.is_array() || coords.empty()) throw std::invalid_argument("polygon without rings");
  Polygon poly;
  for (const auto& r : coords) poly.rings.push_back(ring_from(r));
  return poly;
}

}  // namespace

std::vector<PolygonFeature> load_polygons_geojson(const std::filesystem::path& path) {
  const auto doc = parse_geojson(path);
  std::vector<PolygonFeature> out;
  std::size_t index = 0;
  for (const auto& f : doc["features"]) {
    const std::string where = path.string() + ": feature " + std::to_string(index);
    try {
      const auto& geom = f.at("geometry");
      const auto type = geom.at("type").get<std::string>();
      PolygonFeature pf;
      if (type == "Polygon") {
        pf.parts.push_back(polygon_from(geom.at("coordinates")));
      } else if (type == "MultiPolygon") {
        for (const auto& p : geom.at("coordinates")) pf.parts.push_back(polygon_from(p));
        if (pf.parts.empty()) throw std::invalid_argument("empty MultiPolygon");
      } else {
        throw std::invalid_argument("unsupported geometry type '" + type + "'");
      }
      if (f.contains("properties") && f["properties"].is_object()) {
        for (const auto& [k, v] : f["properties"].items()) {
          if (v.is_number()) pf.numbers[k] = v.get<double>();
          else if (v.is_string()) pf.strings[k] = v.get<std::string>();
        }
      }
      out.push_back(std::move(pf));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ingest, where + ": " + e.what());
    }
    ++index;
  }
  return out;
}

std::vector<FavelaArea> load_favelas_geojson(const std::filesystem::path& path) {
  std::vector<FavelaArea> out;
  for (auto& f : load_polygons_geojson(path)) {
    FavelaArea area;
    if (const auto it = f.strings.find("name"); it != f.strings.end()) area.name = it->second;
    area.parts = std::move(f.parts);
    out.push_back(std::move(area));
  }
  return out;
}

std::vector<CensusTract> load_tracts_geojson(const std::filesystem::path& path) {
  auto features = load_polygons_geojson(path);
  std::vector<CensusTract> out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    auto& f = features[i];
    const auto need = [&](std::string_view key) {
      const auto it = f.numbers.find(std::string(key));
      if (it == f.numbers.end()) {
        throw Error(ErrorCode::ingest, path.string() + ": feature " + std::to_string(i) +
                                           ": missing numeric property '" + std::string(key) + "'");
      }
      return it->second;
    };
    CensusTract t;
    t.population = need("population");
    if (t.population < 0) {
      throw Error(ErrorCode::ingest,
                  path.string() + ": feature " + std::to_string(i) + ": negative population");
    }
    for (std::size_t k = 0; k < kCensusIndicators; ++k) t.indicators[k] = need(kCensusIndicatorNames[k]);
    if (const auto it = f.strings.find("code"); it != f.strings.end()) t.code = it->second;
    else t.code = std::to_string(i);
    t.parts = std::move(f.parts);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Polyline> load_streets_geojson(const std::filesystem::path& path, Warnings* warnings) {
  const auto doc = parse_geojson(path);
  std::vector<Polyline> out;
  std::size_t index = 0;
  const auto add_line = [&](const json& coords) {
    Polyline line;
    for (const auto& p : coords) line.push_back(position(p));
    if (line.size() < 2) {
      if (warnings) {
        warnings->push_back(path.string() + ": feature " + std::to_string(index) +
                            ": dropped single-vertex line");
      }
      return;
    }
    out.push_back(std::move(line));
  };
  for (const auto& f : doc["features"]) {
    try {
      const auto& geom = f.at("geometry");
      const auto type = geom.at("type").get<std::string>();
      if (type == "LineString") {
        add_line(geom.at("coordinates"));
      } else if (type == "MultiLineString") {
        for (const auto& l : geom.at("coordinates")) add_line(l);
      } else if (warnings) {
        warnings->push_back(path.string() + ": feature " + std::to_string(index) +
                            ": ignored non-line geometry '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ingest,
                  path.string() + ": feature " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  if (out.empty()) throw Error(ErrorCode::ingest, path.string() + ": no LineString features");
  return out;
}

}  // namespace urbanlens
