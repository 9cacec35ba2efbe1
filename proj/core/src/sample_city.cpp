#include "urbanlens/sample_city.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "urbanlens/error.hpp"
#include "urbanlens/random.hpp"

namespace urbanlens {

using nlohmann::json;

namespace {

struct Cluster {
  ProjectedPoint center;
  double sigma_m;
};

// Commercial centres: busy by day, few residents.
const std::array<Cluster, 3> kClusters{{
    {{-1200.0, 900.0}, 90.0},
    {{1100.0, 600.0}, 90.0},
    {{200.0, -1300.0}, 90.0},
}};

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

Polygon square(const Projection& proj, double x0, double y0, double x1, double y1) {
  Ring r{proj.inverse({x0, y0}), proj.inverse({x1, y0}), proj.inverse({x1, y1}),
         proj.inverse({x0, y1})};
  return Polygon{{std::move(r)}};
}

Polygon blob(const Projection& proj, const ProjectedPoint& c, double radius, Rng& rng) {
  Ring r;
  constexpr int kVertices = 9;
  for (int i = 0; i < kVertices; ++i) {
    const double a = 2.0 * std::numbers::pi * i / kVertices;
    const double rr = radius * (0.75 + 0.5 * rng.uniform());
    r.push_back(proj.inverse({c.x + rr * std::cos(a), c.y + rr * std::sin(a)}));
  }
  return Polygon{{std::move(r)}};
}

Timestamp random_time(int year, int month, Rng& rng) {
  // Evenings are busier.
  static const std::array<double, 24> hour_weights{
      2, 1, 1, 1, 1, 2, 3, 4, 5, 5, 5, 5, 6, 6, 6, 6, 7, 8, 9, 9, 8, 6, 4, 3};
  static const WeightedSampler hours(hour_weights);
  Timestamp t;
  t.year = year;
  t.month = month;
  t.day = static_cast<int>(rng.below(28)) + 1;
  t.hour = static_cast<int>(hours(rng));
  t.minute = static_cast<int>(rng.below(60));
  return t;
}

json ring_json(const Ring& ring) {
  json out = json::array();
  for (const auto& p : ring) out.push_back({p.lon, p.lat});
  out.push_back({ring.front().lon, ring.front().lat});
  return out;
}

json polygon_json(const std::vector<Polygon>& parts) {
  json coords = json::array();
  for (const auto& poly : parts) {
    json rings = json::array();
    for (const auto& r : poly.rings) rings.push_back(ring_json(r));
    coords.push_back(std::move(rings));
  }
  if (coords.size() == 1) return {{"type", "Polygon"}, {"coordinates", coords[0]}};
  return {{"type", "MultiPolygon"}, {"coordinates", coords}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
}

std::string coord(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(7) << v;
  return s.str();
}

std::string number(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

}  // namespace

SampleCity make_sample_city(const SampleCityOptions& o) {
  if (o.grid_size < 2 || o.spacing_m <= 0.0 || o.tracts_per_side < 1) {
    throw Error(ErrorCode::invalid_argument, "sample city needs at least a 2x2 grid");
  }
  SampleCity city;
  Rng rng(o.seed);
  const Projection proj(o.center);
  const double half = (o.grid_size - 1) * o.spacing_m / 2.0;
  const auto at = [&](int i, int j) {
    return ProjectedPoint{-half + i * o.spacing_m, -half + j * o.spacing_m};
  };

  for (int j = 0; j < o.grid_size; ++j) {
    Polyline row, col;
    for (int i = 0; i < o.grid_size; ++i) {
      row.push_back(proj.inverse(at(i, j)));
      col.push_back(proj.inverse(at(j, i)));
    }
    city.streets.push_back(std::move(row));
    city.streets.push_back(std::move(col));
  }
  for (int s = 0; s < o.spurs; ++s) {
    const int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.grid_size - 2)));
    const int j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.grid_size - 2)));
    const auto base = at(i, j);
    // Diagonal cul-de-sacs never overlap the grid streets.
    const double len = 0.3 * o.spacing_m;
    const double dx = (rng.below(2) ? 1.0 : -1.0) * len;
    const double dy = (rng.below(2) ? 1.0 : -1.0) * len;
    city.streets.push_back({proj.inverse(base), proj.inverse({base.x + dx, base.y + dy})});
  }

  for (int month = 1; month <= 12; ++month) {
    for (std::size_t k = 0; k < o.background_crimes_per_month; ++k) {
      const ProjectedPoint p{-half + 2.0 * half * rng.uniform(), -half + 2.0 * half * rng.uniform()};
      const auto type = rng.below(2) ? CrimeType::phone_theft : CrimeType::vehicle_theft;
      city.crimes.push_back({proj.inverse(p), random_time(o.year, month, rng), type});
    }
    for (std::size_t c = 0; c < kClusters.size(); ++c) {
      const auto& cl = kClusters[c];
      const std::size_t n = o.cluster_crimes_per_month + rng.below(o.cluster_crimes_per_month / 3 + 1);
      for (std::size_t k = 0; k < n; ++k) {
        const ProjectedPoint p{clamp(rng.normal(cl.center.x, cl.sigma_m), -half, half),
                               clamp(rng.normal(cl.center.y, cl.sigma_m), -half, half)};
        const auto type = rng.uniform() < (c == 1 ? 0.3 : 0.7) ? CrimeType::phone_theft
                                                                : CrimeType::vehicle_theft;
        city.crimes.push_back({proj.inverse(p), random_time(o.year, month, rng), type});
      }
    }
  }

  const double tract_side = (2.0 * half + o.spacing_m) / o.tracts_per_side;
  const double t0 = -half - o.spacing_m / 2.0;
  for (int tj = 0; tj < o.tracts_per_side; ++tj) {
    for (int ti = 0; ti < o.tracts_per_side; ++ti) {
      const double x0 = t0 + ti * tract_side;
      const double y0 = t0 + tj * tract_side;
      const ProjectedPoint c{x0 + tract_side / 2.0, y0 + tract_side / 2.0};
      double near_cluster = 1e9;
      for (const auto& cl : kClusters) near_cluster = std::min(near_cluster, distance(c, cl.center));
      const double r = std::hypot(c.x, c.y);
      CensusTract t;
      t.code = "3550308" + std::to_string(1000 + tj * o.tracts_per_side + ti);
      t.parts.push_back(square(proj, x0, y0, x0 + tract_side, y0 + tract_side));
      const double density = (near_cluster < 700.0 ? 0.3 : 1.0) * (0.7 + 0.6 * rng.uniform());
      t.population = std::round(density * 4000.0);
      const double income = 1800.0 + 6500.0 * std::exp(-r * r / (2.0 * 1500.0 * 1500.0)) +
                            rng.normal(0.0, 300.0);
      auto& v = t.indicators;
      v[0] = std::max(600.0, income);
      v[1] = std::max(800.0, 1.35 * income + rng.normal(0.0, 400.0));
      v[2] = clamp(16.0 - income / 700.0 + rng.normal(0.0, 1.0), 1.0, 30.0);
      v[3] = clamp(0.88 + income / 100000.0 + rng.normal(0.0, 0.01), 0.7, 1.0);
      v[4] = clamp(30.0 - income / 500.0 + rng.normal(0.0, 1.5), 10.0, 40.0);
      v[6] = clamp(6.0 + income / 900.0 + rng.normal(0.0, 1.0), 2.0, 25.0);
      v[5] = 100.0 - v[4] - v[6];
      city.tracts.push_back(std::move(t));
    }
  }

  const std::array<ProjectedPoint, 5> favela_sites{
      {{-1800.0, -1700.0}, {-1550.0, 1850.0}, {1900.0, -1500.0}, {1750.0, 1800.0}, {-300.0, 1900.0}}};
  for (std::size_t f = 0; f < favela_sites.size(); ++f) {
    FavelaArea area;
    area.name = "Comunidade " + std::to_string(f + 1);
    area.parts.push_back(blob(proj, favela_sites[f], 140.0, rng));
    if (f == 0) area.parts.push_back(blob(proj, {favela_sites[f].x + 350.0, favela_sites[f].y}, 80.0, rng));
    city.favelas.push_back(std::move(area));
  }

  const auto random_node = [&] {
    return at(static_cast<int>(rng.below(static_cast<std::uint64_t>(o.grid_size))),
              static_cast<int>(rng.below(static_cast<std::uint64_t>(o.grid_size))));
  };
  for (int k = 0; k < 350; ++k) {
    auto p = random_node();
    p.x += 12.0;
    city.facilities.push_back({proj.inverse(p), TransportCategory::bus_stop});
  }
  for (const auto& cl : kClusters) {
    city.facilities.push_back({proj.inverse({cl.center.x + 40.0, cl.center.y}), TransportCategory::terminal});
  }
  city.facilities.push_back({proj.inverse({-1900.0, 0.0}), TransportCategory::terminal});
  city.facilities.push_back({proj.inverse({0.0, 50.0}), TransportCategory::terminal});
  for (int k = 0; k < 10; ++k) {
    const double s = -half + (k + 0.5) * (2.0 * half / 10.0);
    city.facilities.push_back({proj.inverse({s, 0.6 * s + 150.0}), TransportCategory::subway});
  }
  for (int k = 0; k < 8; ++k) {
    const double s = -half + (k + 0.5) * (2.0 * half / 8.0);
    city.facilities.push_back({proj.inverse({-1750.0, s}), TransportCategory::train});
  }

  struct StationSite {
    const char* id;
    const char* name;
    ProjectedPoint location;
    double warm;
    double wet;
  };
  const std::array<StationSite, 3> sites{{
      {"A755", "Barueri", {-half - 300.0, 200.0}, -0.8, 0.9},
      {"A771", "Interlagos", {300.0, -half - 300.0}, -1.5, 1.2},
      {"A701", "Mirante", {0.0, half + 300.0}, 0.6, 0.8},
  }};
  for (const auto& s : sites) {
    WeatherStation st;
    st.id = s.id;
    st.name = s.name;
    st.location = proj.inverse(s.location);
    for (int month = 1; month <= 12; ++month) {
      const double season = std::cos(2.0 * std::numbers::pi * (month - 1) / 12.0);
      Climate c;
      c.tmax_c = 25.5 + 4.0 * season + s.warm + rng.normal(0.0, 0.4);
      c.tmin_c = 15.0 + 4.0 * season + s.warm + rng.normal(0.0, 0.4);
      c.precip_mm = std::max(0.0, s.wet * (140.0 + 110.0 * season) + rng.normal(0.0, 10.0));
      st.monthly.emplace(o.year * 100 + month, c);
    }
    city.stations.push_back(std::move(st));
  }
  return city;
}

void write_sample_city(const SampleCity& city, const std::filesystem::path& dir,
                       std::size_t trip_count) {
  std::filesystem::create_directories(dir);

  json streets = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (const auto& line : city.streets) {
    json coords = json::array();
    for (const auto& p : line) coords.push_back({p.lon, p.lat});
    streets["features"].push_back({{"type", "Feature"},
                                   {"properties", json::object()},
                                   {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
  }
  write_text(dir / "streets.geojson", streets.dump());

  std::string crimes = "lat,lon,datetime,crime_type\n";
  for (const auto& c : city.crimes) {
    crimes += coord(c.location.lat) + "," + coord(c.location.lon) + "," + c.time.to_string() +
              "," + to_string(c.type) + "\n";
  }
  write_text(dir / "crimes.csv", crimes);

  std::string transport = "lat,lon,category\n";
  for (const auto& f : city.facilities) {
    transport += coord(f.location.lat) + "," + coord(f.location.lon) + "," +
                 to_string(f.category) + "\n";
  }
  write_text(dir / "transport.csv", transport);

  json favelas = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (const auto& f : city.favelas) {
    favelas["features"].push_back({{"type", "Feature"},
                                   {"properties", {{"name", f.name}}},
                                   {"geometry", polygon_json(f.parts)}});
  }
  write_text(dir / "favelas.geojson", favelas.dump());

  json tracts = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (const auto& t : city.tracts) {
    json props = {{"code", t.code}, {"population", t.population}};
    for (std::size_t k = 0; k < kCensusIndicators; ++k) {
      props[std::string(kCensusIndicatorNames[k])] = t.indicators[k];
    }
    tracts["features"].push_back(
        {{"type", "Feature"}, {"properties", props}, {"geometry", polygon_json(t.parts)}});
  }
  write_text(dir / "tracts.geojson", tracts.dump());

  std::string stations = "station_id,name,lat,lon\n";
  std::string weather = "station_id,date,tmax_c,tmin_c,precip_mm\n";
  for (const auto& s : city.stations) {
    stations += s.id + "," + s.name + "," + coord(s.location.lat) + "," + coord(s.location.lon) + "\n";
    for (const auto& [ym, c] : s.monthly) {
      std::ostringstream date;
      date << ym / 100 << "-" << std::setw(2) << std::setfill('0') << ym % 100;
      weather += s.id + "," + date.str() + "," + number(c.tmax_c) + "," + number(c.tmin_c) + "," +
                 number(c.precip_mm) + "\n";
    }
  }
  write_text(dir / "stations.csv", stations);
  write_text(dir / "weather.csv", weather);

  json config = {
      {"workspace", "workspace.ulw"},
      {"export_dir", "export"},
      {"inputs",
       {{"streets", "streets.geojson"},
        {"crimes", "crimes.csv"},
        {"transport", "transport.csv"},
        {"favelas", "favelas.geojson"},
        {"tracts", "tracts.geojson"},
        {"stations", "stations.csv"},
        {"weather", "weather.csv"}}},
      {"trips", {{"count", trip_count}, {"seed", 20200101}}},
      {"evaluation", {{"holdout_fraction", 0.2}, {"split_seed", 42}, {"undersample_seed", 43}}},
      {"grid", {{"cell_m", 500.0}}},
      {"analytics", {{"shapley_samples", 1000}, {"shapley_permutations", 20}, {"seed", 44}}},
      {"server", {{"host", "127.0.0.1"}, {"port", 8080}}},
  };
  write_text(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace urbanlens
