#include "urbanlens/layers.hpp"

#include "urbanlens/error.hpp"

namespace urbanlens {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::config: return "config_error";
    case ErrorCode::ingest: return "ingest_error";
    case ErrorCode::missing_layer: return "missing_layer";
    case ErrorCode::prerequisite: return "stage_missing";
    case ErrorCode::version_mismatch: return "version_mismatch";
    case ErrorCode::corrupt_workspace: return "corrupt_workspace";
    case ErrorCode::unsupported_layer: return "unsupported_layer";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::io: return "io_error";
  }
  return "unknown";
}

const LayerInfo& layer_info(LayerId id) { return kLayers[static_cast<std::size_t>(id) - 1]; }

std::optional<LayerId> layer_from_int(int id) {
  if (id < 1 || id > 9) return std::nullopt;
  return static_cast<LayerId>(id);
}

const char* to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::point: return "point";
    case GeometryKind::arc: return "arc";
    case GeometryKind::polygon: return "polygon";
  }
  return "?";
}

const char* to_string(CrimeType t) {
  return t == CrimeType::vehicle_theft ? "vehicle_theft" : "phone_theft";
}

std::optional<CrimeType> parse_crime_type(std::string_view s) {
  if (s == "vehicle_theft") return CrimeType::vehicle_theft;
  if (s == "phone_theft") return CrimeType::phone_theft;
  return std::nullopt;
}

const char* to_string(TransportCategory c) {
  switch (c) {
    case TransportCategory::bus_stop: return "bus_stop";
    case TransportCategory::terminal: return "terminal";
    case TransportCategory::subway: return "subway";
    case TransportCategory::train: return "train";
  }
  return "?";
}

std::optional<TransportCategory> parse_transport_category(std::string_view s) {
  if (s == "bus_stop") return TransportCategory::bus_stop;
  if (s == "terminal") return TransportCategory::terminal;
  if (s == "subway") return TransportCategory::subway;
  if (s == "train") return TransportCategory::train;
  return std::nullopt;
}

const char* to_string(Period p) {
  switch (p) {
    case Period::morning: return "morning";
    case Period::afternoon: return "afternoon";
    case Period::night: return "night";
    case Period::dawn: return "dawn";
  }
  return "?";
}

std::optional<Period> parse_period(std::string_view s) {
  if (s == "morning") return Period::morning;
  if (s == "afternoon") return Period::afternoon;
  if (s == "night") return Period::night;
  if (s == "dawn") return Period::dawn;
  return std::nullopt;
}

namespace {
constexpr const char* kWeekdays[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
}

const char* weekday_name(int weekday) {
  return weekday >= 0 && weekday < 7 ? kWeekdays[weekday] : "?";
}

std::optional<int> parse_weekday(std::string_view s) {
  for (int i = 0; i < 7; ++i) {
    if (s == kWeekdays[i]) return i;
  }
  return std::nullopt;
}

const char* to_string(TripLabel l) { return l == TripLabel::regular ? "regular" : "occurrence"; }

std::optional<TripLabel> parse_trip_label(std::string_view s) {
  if (s == "regular") return TripLabel::regular;
  if (s == "occurrence") return TripLabel::occurrence;
  return std::nullopt;
}

}  // namespace urbanlens
