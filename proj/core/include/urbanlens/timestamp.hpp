#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace urbanlens {

/// Civil date-time without a time zone. Missing fields default to the
/// start of the period (a "YYYY-MM" string yields day 1, 00:00:00).
struct Timestamp {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;

  /// 0 = Monday ... 6 = Sunday.
  int weekday() const;
  std::string to_string() const;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// Accepts "YYYY-MM", "YYYY-MM-DD", "YYYY-MM-DD HH:MM[:SS]" and the ISO 'T'
/// separator. Returns nullopt for anything else or an impossible date.
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace urbanlens
