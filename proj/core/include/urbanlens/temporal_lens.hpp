#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "urbanlens/timestamp.hpp"

namespace urbanlens {

enum class Granularity { month, weekday, hour };

const char* to_string(Granularity g);
/// Throws Error(invalid_argument) for unknown names.
Granularity parse_granularity(std::string_view name);
std::size_t bin_count(Granularity g);

/// Fixed-layout histogram with prefix sums.
struct TemporalHistogram {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> cumulative;

  std::size_t bins() const { return counts.size(); }
  std::uint64_t total() const { return cumulative.empty() ? 0 : cumulative.back(); }
  /// Occurrences in bins [lo, hi], inclusive.
  std::uint64_t count(std::size_t lo, std::size_t hi) const;
};

/// Builds from raw per-bin counts. Throws on an empty count vector.
TemporalHistogram histogram_from_counts(std::vector<std::uint64_t> counts);
TemporalHistogram make_histogram(std::span<const Timestamp> timestamps, Granularity granularity);

/// Bin labels: "Jan".."Dec", "Mon".."Sun" or "00".."23".
std::vector<std::string_view> bin_labels(Granularity g);

enum class TargetMode { count, density };
TargetMode parse_target_mode(std::string_view name);

/// Count mode returns value as-is; density mode returns ceil(value * total).
std::uint64_t resolve_target(const TemporalHistogram& h, TargetMode mode, double value);

enum class Direction { forward, backward };
const char* to_string(Direction d);

struct TemporalWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
  Direction direction = Direction::forward;
  std::uint64_t target = 0;

  friend bool operator==(const TemporalWindow&, const TemporalWindow&) = default;
};

/// Smallest prefix [0, hi] holding at least min(target, total) occurrences.
TemporalWindow initial_window(const TemporalHistogram& h, std::uint64_t target);

/// One animation frame. The advancing edge moves by one bin, then the
/// trailing edge drops bins while the window still holds the target. At the
/// end of the histogram the direction flips and the mirrored move is applied
/// in the same call, so no frame is skipped at the boundary.
TemporalWindow step(const TemporalHistogram& h, const TemporalWindow& w);

}  // namespace urbanlens
