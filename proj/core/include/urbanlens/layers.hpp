#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "urbanlens/geo.hpp"
#include "urbanlens/timestamp.hpp"

namespace urbanlens {

using NodeId = std::uint32_t;

/// Non-fatal notes from loaders and pipeline stages.
using Warnings = std::vector<std::string>;

/// The nine toggleable map layers, numbered as their toggle keys.
enum class LayerId : int {
  crime = 1,
  trips = 2,
  weather = 3,
  transport = 4,
  favelas = 5,
  socioeconomic = 6,
  graph = 7,
  hotspots = 8,
  prediction = 9,
};

enum class GeometryKind { point, arc, polygon };

struct LayerInfo {
  LayerId id;
  std::string_view name;
  GeometryKind geometry;
  std::string_view icon;
  bool timestamped;
};

inline constexpr std::array<LayerInfo, 9> kLayers{{
    {LayerId::crime, "Crime", GeometryKind::point, "handcuffs", true},
    {LayerId::trips, "Taxi Trips", GeometryKind::arc, "taxi", true},
    {LayerId::weather, "Weather", GeometryKind::point, "cloud-rain", true},
    {LayerId::transport, "Public Transportation", GeometryKind::point, "bus", false},
    {LayerId::favelas, "Favelas", GeometryKind::polygon, "house", false},
    {LayerId::socioeconomic, "Socioeconomic", GeometryKind::polygon, "users", false},
    {LayerId::graph, "Graph", GeometryKind::point, "share-nodes", false},
    {LayerId::hotspots, "Hotspots", GeometryKind::point, "fire", false},
    {LayerId::prediction, "Prediction", GeometryKind::polygon, "grid", false},
}};

const LayerInfo& layer_info(LayerId id);
std::optional<LayerId> layer_from_int(int id);
const char* to_string(GeometryKind kind);

enum class CrimeType : std::uint8_t { vehicle_theft, phone_theft };
const char* to_string(CrimeType t);
std::optional<CrimeType> parse_crime_type(std::string_view s);

struct CrimeEvent {
  GeoPoint location;
  Timestamp time;
  CrimeType type = CrimeType::vehicle_theft;
};

enum class TransportCategory : std::uint8_t { bus_stop, terminal, subway, train };
inline constexpr std::size_t kTransportCategories = 4;
const char* to_string(TransportCategory c);
std::optional<TransportCategory> parse_transport_category(std::string_view s);

struct Facility {
  GeoPoint location;
  TransportCategory category = TransportCategory::bus_stop;
};

/// Informal settlement area; one record may have several polygon parts.
struct FavelaArea {
  std::string name;
  std::vector<Polygon> parts;
};

inline constexpr std::size_t kCensusIndicators = 7;
/// GeoJSON property names of the census indicators, in feature order.
inline constexpr std::array<std::string_view, kCensusIndicators> kCensusIndicatorNames{
    "income",         "householder_income", "unemployment", "literacy_7_15",
    "pct_under_18",   "pct_18_65",          "pct_over_65"};

using CensusValues = std::array<double, kCensusIndicators>;

struct CensusTract {
  std::string code;
  std::vector<Polygon> parts;
  double population = 0.0;
  CensusValues indicators{};
};

struct Climate {
  double tmax_c = 0.0;
  double tmin_c = 0.0;
  double precip_mm = 0.0;

  friend bool operator==(const Climate&, const Climate&) = default;
};

/// year * 100 + month, e.g. 202003.
using YearMonth = int;
inline YearMonth year_month(const Timestamp& t) { return t.year * 100 + t.month; }

struct WeatherStation {
  std::string id;
  std::string name;
  GeoPoint location;
  std::map<YearMonth, Climate> monthly;
};

enum class Period : std::uint8_t { morning, afternoon, night, dawn };
const char* to_string(Period p);
std::optional<Period> parse_period(std::string_view s);

/// 0 = Monday ... 6 = Sunday.
const char* weekday_name(int weekday);
std::optional<int> parse_weekday(std::string_view s);

enum class TripLabel : std::uint8_t { regular, occurrence };
const char* to_string(TripLabel l);
std::optional<TripLabel> parse_trip_label(std::string_view s);

struct TripRecord {
  NodeId origin = 0;
  NodeId destination = 0;
  Period period = Period::morning;
  int weekday = 0;
  int month = 1;
  TripLabel label = TripLabel::regular;

  friend bool operator==(const TripRecord&, const TripRecord&) = default;
};

}  // namespace urbanlens
