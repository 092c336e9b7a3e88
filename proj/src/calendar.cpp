#include "svibt/calendar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace svibt {

namespace {

int parse_int_strict(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed date field: " + std::string(s));
  }
  return v;
}

const std::array<std::string, 7> kWeekdayNames = {
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};

}  // namespace

Date parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw std::invalid_argument("malformed date: " + std::string(iso));
  }
  const int y = parse_int_strict(iso.substr(0, 4));
  const int m = parse_int_strict(iso.substr(5, 2));
  const int d = parse_int_strict(iso.substr(8, 2));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    throw std::invalid_argument("invalid calendar date: " + std::string(iso));
  }
  return Date{ymd};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

Weekday weekday_of(Date d) { return Weekday{d}; }

Date prev_weekday_at_or_before(Date d, Weekday w) {
  const auto back = weekday_of(d) - w;  // 0..6 days
  return d - back;
}

Date week_start(Date d) { return prev_weekday_at_or_before(d, std::chrono::Monday); }

Weekday parse_weekday(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  for (unsigned i = 0; i < kWeekdayNames.size(); ++i) {
    std::string cand = kWeekdayNames[i];
    std::transform(cand.begin(), cand.end(), cand.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (cand == lower) return Weekday{std::chrono::Monday + std::chrono::days{i}};
  }
  throw std::invalid_argument("unknown weekday: " + std::string(name));
}

std::string weekday_name(Weekday w) { return kWeekdayNames[iso_index(w) - 1]; }

unsigned iso_index(Weekday w) { return w.iso_encoding(); }

}  // namespace svibt
