#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urbanlens/layers.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

/// Splits CSV text into rows of fields. Handles quoted fields, doubled
/// quotes and CRLF line endings.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct PointsCsvSchema {
  std::string lat_column = "lat";
  std::string lon_column = "lon";
  std::optional<std::string> time_column;
  std::optional<std::string> category_column;
  /// When non-empty, categories outside this list reject the row.
  std::vector<std::string> allowed_categories;
  /// Loading aborts when more than this share of rows is rejected.
  double max_bad_fraction = 0.01;
};

struct PointRow {
  GeoPoint location;
  std::optional<Timestamp> time;
  std::string category;
  std::size_t row = 0;  // 1-based data row number (header excluded)
};

struct PointsCsv {
  std::vector<PointRow> rows;
  Warnings warnings;
  std::size_t rejected = 0;
};

/// Throws Error(ingest) for a missing header or column, or when too many
/// rows are bad; the message names the offending rows.
PointsCsv load_points_csv(const std::filesystem::path& path, const PointsCsvSchema& schema);

/// CSV: lat,lon,datetime,crime_type  (crime_type in {vehicle_theft, phone_theft})
std::vector<CrimeEvent> load_crimes_csv(const std::filesystem::path& path,
                                        double max_bad_fraction = 0.01,
                                        Warnings* warnings = nullptr);
/// CSV: lat,lon,category  (category in {bus_stop, terminal, subway, train})
std::vector<Facility> load_transport_csv(const std::filesystem::path& path,
                                         double max_bad_fraction = 0.01,
                                         Warnings* warnings = nullptr);
/// CSV: station_id,name,lat,lon
std::vector<WeatherStation> load_stations_csv(const std::filesystem::path& path);
/// CSV: station_id,date,tmax_c,tmin_c,precip_mm  (date is YYYY-MM)
void load_weather_csv(const std::filesystem::path& path, std::vector<WeatherStation>& stations,
                      double max_bad_fraction = 0.01, Warnings* warnings = nullptr);

/// CSV: origin_lat,origin_lon,dest_lat,dest_lon,period,weekday,month,label
/// Endpoints snap to their nearest corner.
std::vector<TripRecord> load_trips_csv(const std::filesystem::path& path, const StreetGraph& g,
                                       double max_bad_fraction = 0.01,
                                       Warnings* warnings = nullptr);
std::string trips_to_csv(const StreetGraph& g, const std::vector<TripRecord>& trips);

struct PolygonFeature {
  std::vector<Polygon> parts;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;
};

/// FeatureCollection of Polygon / MultiPolygon features. Rings must be
/// closed with at least three distinct vertices; errors name the feature index.
std::vector<PolygonFeature> load_polygons_geojson(const std::filesystem::path& path);
std::vector<FavelaArea> load_favelas_geojson(const std::filesystem::path& path);
/// Requires numeric properties "population" and the seven census indicators.
std::vector<CensusTract> load_tracts_geojson(const std::filesystem::path& path);
/// LineString / MultiLineString features; single-vertex lines are dropped
/// with a warning. Throws when no usable line remains.
std::vector<Polyline> load_streets_geojson(const std::filesystem::path& path,
                                           Warnings* warnings = nullptr);

std::string read_file(const std::filesystem::path& path);

}  // namespace urbanlens
