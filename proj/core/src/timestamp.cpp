#include "urbanlens/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace urbanlens {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  const char* last = first + len;
  for (const char* c = first; c != last; ++c) {
    if (*c < '0' || *c > '9') return false;
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

}  // namespace

int Timestamp::weekday() const {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  const std::chrono::weekday wd{std::chrono::sys_days{ymd}};
  return static_cast<int>(wd.iso_encoding()) - 1;
}

std::string Timestamp::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", year, month, day, hour, minute,
                second);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  Timestamp ts;
  if (!read_int(text, 0, 4, ts.year) || text.size() < 7 || text[4] != '-' ||
      !read_int(text, 5, 2, ts.month)) {
    return std::nullopt;
  }
  std::size_t pos = 7;
  if (text.size() > pos) {
    if (text[pos] != '-' || !read_int(text, pos + 1, 2, ts.day)) return std::nullopt;
    pos += 3;
  }
  if (text.size() > pos) {
    if ((text[pos] != ' ' && text[pos] != 'T') || !read_int(text, pos + 1, 2, ts.hour) ||
        text.size() < pos + 6 || text[pos + 3] != ':' || !read_int(text, pos + 4, 2, ts.minute)) {
      return std::nullopt;
    }
    pos += 6;
    if (text.size() > pos && text[pos] == ':') {
      if (!read_int(text, pos + 1, 2, ts.second)) return std::nullopt;
      pos += 3;
    }
    if (pos < text.size() && text.substr(pos) != "Z") return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{ts.year},
                                        std::chrono::month{static_cast<unsigned>(ts.month)},
                                        std::chrono::day{static_cast<unsigned>(ts.day)}};
  if (!ymd.ok() || ts.hour > 23 || ts.minute > 59 || ts.second > 60) return std::nullopt;
  return ts;
}

}  // namespace urbanlens
