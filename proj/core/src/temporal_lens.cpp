#include "urbanlens/temporal_lens.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "urbanlens/error.hpp"

namespace urbanlens {

const char* to_string(Granularity g) {
  switch (g) {
    case Granularity::month: return "month";
    case Granularity::weekday: return "weekday";
    case Granularity::hour: return "hour";
  }
  return "?";
}

Granularity parse_granularity(std::string_view name) {
  if (name == "month") return Granularity::month;
  if (name == "weekday") return Granularity::weekday;
  if (name == "hour") return Granularity::hour;
  throw Error(ErrorCode::invalid_argument, "unknown granularity '" + std::string(name) + "'");
}

std::size_t bin_count(Granularity g) {
  switch (g) {
    case Granularity::month: return 12;
    case Granularity::weekday: return 7;
    case Granularity::hour: return 24;
  }
  return 0;
}

std::vector<std::string_view> bin_labels(Granularity g) {
  static constexpr std::string_view months[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  static constexpr std::string_view days[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
  static constexpr std::string_view hours[] = {"00", "01", "02", "03", "04", "05", "06", "07",
                                               "08", "09", "10", "11", "12", "13", "14", "15",
                                               "16", "17", "18", "19", "20", "21", "22", "23"};
  switch (g) {
    case Granularity::month: return {std::begin(months), std::end(months)};
    case Granularity::weekday: return {std::begin(days), std::end(days)};
    case Granularity::hour: return {std::begin(hours), std::end(hours)};
  }
  return {};
}

std::uint64_t TemporalHistogram::count(std::size_t lo, std::size_t hi) const {
  if (lo > hi) return 0;
  return cumulative[hi] - (lo == 0 ? 0 : cumulative[lo - 1]);
}

TemporalHistogram histogram_from_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) throw Error(ErrorCode::invalid_argument, "histogram needs at least one bin");
  TemporalHistogram h;
  h.counts = std::move(counts);
  h.cumulative.resize(h.counts.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    running += h.counts[i];
    h.cumulative[i] = running;
  }
  return h;
}

TemporalHistogram make_histogram(std::span<const Timestamp> timestamps, Granularity granularity) {
  std::vector<std::uint64_t> counts(bin_count(granularity), 0);
  for (const auto& ts : timestamps) {
    switch (granularity) {
      case Granularity::month: ++counts[static_cast<std::size_t>(ts.month - 1)]; break;
      case Granularity::weekday: ++counts[static_cast<std::size_t>(ts.weekday())]; break;
      case Granularity::hour: ++counts[static_cast<std::size_t>(ts.hour)]; break;
    }
  }
  return histogram_from_counts(std::move(counts));
}

TargetMode parse_target_mode(std::string_view name) {
  if (name == "count") return TargetMode::count;
  if (name == "density") return TargetMode::density;
  throw Error(ErrorCode::invalid_argument, "unknown window mode '" + std::string(name) + "'");
}

std::uint64_t resolve_target(const TemporalHistogram& h, TargetMode mode, double value) {
  if (mode == TargetMode::count) {
    if (!(value >= 0.0) || value != std::floor(value)) {
      throw Error(ErrorCode::invalid_argument, "count target must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(value);
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "density must lie in [0, 1]");
  }
  const double exact = value * static_cast<double>(h.total());
  // Products like 0.1 * 30 land a hair above the integer; do not round those up.
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) < 1e-9) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(exact));
}

const char* to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

TemporalWindow initial_window(const TemporalHistogram& h, std::uint64_t target) {
  const std::uint64_t need = std::min(target, h.total());
  TemporalWindow w;
  w.target = target;
  const auto it = std::lower_bound(h.cumulative.begin(), h.cumulative.end(), need);
  w.hi = static_cast<std::size_t>(it - h.cumulative.begin());
  w.hi = std::min(w.hi, h.bins() - 1);
  return w;
}

namespace {

void advance_forward(const TemporalHistogram& h, TemporalWindow& w, std::uint64_t need) {
  ++w.hi;
  while (w.lo < w.hi && h.count(w.lo + 1, w.hi) >= need) ++w.lo;
}

void advance_backward(const TemporalHistogram& h, TemporalWindow& w, std::uint64_t need) {
  --w.lo;
  while (w.lo < w.hi && h.count(w.lo, w.hi - 1) >= need) --w.hi;
}

}  // namespace

TemporalWindow step(const TemporalHistogram& h, const TemporalWindow& current) {
  TemporalWindow w = current;
  const std::size_t last = h.bins() - 1;
  if (w.hi > last || w.lo > w.hi) throw Error(ErrorCode::invalid_argument, "window out of range");
  const std::uint64_t need = std::min(w.target, h.total());

  if (w.direction == Direction::forward) {
    if (w.hi < last) {
      advance_forward(h, w, need);
      return w;
    }
    w.direction = Direction::backward;
    if (w.lo > 0) advance_backward(h, w, need);
    return w;
  }
  if (w.lo > 0) {
    advance_backward(h, w, need);
    return w;
  }
  w.direction = Direction::forward;
  if (w.hi < last) advance_forward(h, w, need);
  return w;
}

}  // namespace urbanlens
