#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace svibt {

// Calendar dates are day-resolution time points; weekly series label each
// observation by its week-ending date.
using Date = std::chrono::sys_days;
using Weekday = std::chrono::weekday;

inline constexpr std::chrono::days kWeek{7};

/// Parse an ISO-8601 date (YYYY-MM-DD). Throws std::invalid_argument on
/// malformed or non-existent dates.
Date parse_date(std::string_view iso);

/// Format as YYYY-MM-DD.
std::string format_date(Date d);

Weekday weekday_of(Date d);

/// Latest date <= d that falls on weekday w.
Date prev_weekday_at_or_before(Date d, Weekday w);

/// The Monday that starts d's ISO week.
Date week_start(Date d);

/// Parse a weekday name ("Monday".."Sunday", case-insensitive).
/// Throws std::invalid_argument on anything else.
Weekday parse_weekday(std::string_view name);

std::string weekday_name(Weekday w);

/// ISO encoding: Monday=1 .. Sunday=7.
unsigned iso_index(Weekday w);

}  // namespace svibt
