#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svibt/calendar.hpp"

namespace svibt {

struct WeeklyPoint {
  Date week_end;
  double value;
};

/// One real-valued weekly observation stream on a contiguous 7-day grid.
/// Invariants, enforced at construction:
///   - week_ends strictly increasing, spaced by exactly 7 days
///   - no holes inside the covered span
///   - all values finite
class WeeklySeries {
 public:
  WeeklySeries() = default;
  WeeklySeries(std::string id, std::vector<WeeklyPoint> points);

  const std::string& id() const { return id_; }
  const std::vector<WeeklyPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  Date week(std::size_t i) const { return points_[i].week_end; }
  double value(std::size_t i) const { return points_[i].value; }
  Date first_week() const { return points_.front().week_end; }
  Date last_week() const { return points_.back().week_end; }

  /// Index of a week-ending date, using the grid arithmetic the invariant
  /// guarantees. Nullopt when off-grid or outside the span.
  std::optional<std::size_t> index_of(Date week_end) const;

  std::vector<double> values() const;

  WeeklySeries with_id(std::string new_id) const;

 private:
  std::string id_;
  std::vector<WeeklyPoint> points_;
};

struct DailyPoint {
  Date date;
  double close;
};

/// Daily closes for one asset: strictly increasing dates, strictly positive
/// closes. Inputs are assumed dividend/split adjusted.
class DailyPriceSeries {
 public:
  DailyPriceSeries() = default;
  DailyPriceSeries(std::string asset, std::vector<DailyPoint> points);

  const std::string& asset() const { return asset_; }
  const std::vector<DailyPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Last close at or before d, restricted to dates >= floor. Nullopt when
  /// no close exists in [floor, d].
  std::optional<DailyPoint> last_close_in(Date floor, Date d) const;

 private:
  std::string asset_;
  std::vector<DailyPoint> points_;
};

struct GapWeek {
  Date week_end;
  std::string reason;
};

struct WeeklyReturnResult {
  WeeklySeries returns;
  std::vector<GapWeek> gaps;
};

/// Weekly returns close(exit)/close(entry) - 1 with the requested weekday
/// resolving to the last close at or before it within the same week.
/// entry_day must precede exit_day in ISO order; entry_day == exit_day means
/// full-week mode (exit is the same weekday one week later). Output weeks are
/// labelled by the requested (nominal) exit date, keeping the 7-day grid.
/// Weeks with no close in [week start, requested day] on either leg are
/// dropped into the gap report; if that leaves the resolvable weeks
/// non-contiguous, the longest run is kept and the rest reported.
WeeklyReturnResult weekly_return(const DailyPriceSeries& prices, Weekday entry_day,
                                 Weekday exit_day);

/// Trailing mean over weeks t-1..t-k (strictly past values). Outputs run from
/// the (k+1)-th input week through one week past the last input week; the
/// first k weeks are warmup and produce nothing.
WeeklySeries rolling_mean(const WeeklySeries& s, int k);

/// As rolling_mean, with the median (midpoint of the two central order
/// statistics for even k).
WeeklySeries rolling_median(const WeeklySeries& s, int k);

/// Restrict both series to their common week_ends. Throws "disjoint spans"
/// when the intersection is empty (including mismatched weekday grids).
std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b);

/// Parse CSV with header `date,close` (extra columns ignored).
DailyPriceSeries parse_price_csv(std::string_view bytes, std::string asset);

/// Parse CSV with header `week_end,value`.
WeeklySeries parse_weekly_csv(std::string_view bytes, std::string id);

std::string weekly_csv(const WeeklySeries& s);

}  // namespace svibt
