#include "svibt/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "svibt/csv.hpp"

namespace svibt {

WeeklySeries::WeeklySeries(std::string id, std::vector<WeeklyPoint> points)
    : id_(std::move(id)), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].value)) {
      throw std::invalid_argument("non-finite value in series '" + id_ + "' at " +
                                  format_date(points_[i].week_end));
    }
    if (i > 0 && points_[i].week_end - points_[i - 1].week_end != kWeek) {
      throw std::invalid_argument("irregular spacing in series '" + id_ + "' at " +
                                  format_date(points_[i].week_end));
    }
  }
}

std::optional<std::size_t> WeeklySeries::index_of(Date week_end) const {
  if (empty() || week_end < first_week() || week_end > last_week()) return std::nullopt;
  const auto delta = week_end - first_week();
  if (delta % kWeek != std::chrono::days{0}) return std::nullopt;
  return std::size_t(delta / kWeek);
}

std::vector<double> WeeklySeries::values() const {
  std::vector<double> v;
  v.reserve(points_.size());
  for (const auto& p : points_) v.push_back(p.value);
  return v;
}

WeeklySeries WeeklySeries::with_id(std::string new_id) const {
  WeeklySeries out;
  out.id_ = std::move(new_id);
  out.points_ = points_;
  return out;
}

DailyPriceSeries::DailyPriceSeries(std::string asset, std::vector<DailyPoint> points)
    : asset_(std::move(asset)), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].close > 0.0) || !std::isfinite(points_[i].close)) {
      throw std::invalid_argument("invalid price in '" + asset_ + "' at " +
                                  format_date(points_[i].date));
    }
    if (i > 0 && points_[i].date <= points_[i - 1].date) {
      throw std::invalid_argument("dates not strictly increasing in '" + asset_ + "' at " +
                                  format_date(points_[i].date));
    }
  }
}

std::optional<DailyPoint> DailyPriceSeries::last_close_in(Date floor, Date d) const {
  // first point with date > d, then step back
  auto it = std::upper_bound(points_.begin(), points_.end(), d,
                             [](Date lhs, const DailyPoint& p) { return lhs < p.date; });
  if (it == points_.begin()) return std::nullopt;
  --it;
  if (it->date < floor) return std::nullopt;
  return *it;
}

WeeklyReturnResult weekly_return(const DailyPriceSeries& prices, Weekday entry_day,
                                 Weekday exit_day) {
  if (prices.empty()) throw std::invalid_argument("empty series");
  const unsigned entry_iso = iso_index(entry_day);
  const unsigned exit_iso = iso_index(exit_day);
  if (entry_iso > exit_iso) {
    throw std::invalid_argument("entry day must precede exit day within the week");
  }
  const bool full_week = entry_iso == exit_iso;
  const auto entry_offset = full_week ? kWeek : std::chrono::days{exit_iso - entry_iso};

  const Date first_date = prices.points().front().date;
  const Date last_date = prices.points().back().date;

  // Candidate nominal exit dates: the exit weekday's 7-day grid, restricted
  // to weeks whose entry and exit windows both touch the data span. With a
  // close on every weekday this enumerates exactly the fully covered weeks.
  const auto next_at_or_after = [](Date d, Weekday w) {
    return prev_weekday_at_or_before(d + std::chrono::days{6}, w);
  };
  const Date exit_lo = next_at_or_after(first_date + entry_offset, exit_day);
  const Date exit_hi =
      prev_weekday_at_or_before(last_date + (std::chrono::days{iso_index(exit_day)} -
                                             std::chrono::days{1}),
                                exit_day);

  struct Resolved {
    Date week_end;
    double ret;
  };
  std::vector<Resolved> resolved;
  std::vector<GapWeek> gaps;

  for (Date e = exit_lo; e <= exit_hi; e += kWeek) {
    const Date q_entry = e - entry_offset;
    const auto entry_close = prices.last_close_in(week_start(q_entry), q_entry);
    const auto exit_close = prices.last_close_in(week_start(e), e);
    if (!entry_close && !exit_close) {
      gaps.push_back({e, "no entry or exit close"});
      continue;
    }
    if (!entry_close) {
      gaps.push_back({e, "no entry close"});
      continue;
    }
    if (!exit_close) {
      gaps.push_back({e, "no exit close"});
      continue;
    }
    resolved.push_back({e, exit_close->close / entry_close->close - 1.0});
  }

  // Keep the longest contiguous run (ties -> the later run); everything else
  // goes to the gap report so nothing is lost silently.
  std::size_t best_begin = 0, best_len = 0;
  std::size_t run_begin = 0;
  for (std::size_t i = 0; i <= resolved.size(); ++i) {
    const bool run_ends =
        i == resolved.size() ||
        (i > run_begin && resolved[i].week_end - resolved[i - 1].week_end != kWeek);
    if (run_ends) {
      const std::size_t len = i - run_begin;
      if (len >= best_len) {
        best_len = len;
        best_begin = run_begin;
      }
      run_begin = i;
    }
  }
  std::vector<WeeklyPoint> points;
  points.reserve(best_len);
  for (std::size_t i = 0; i < resolved.size(); ++i) {
    if (i >= best_begin && i < best_begin + best_len) {
      points.push_back({resolved[i].week_end, resolved[i].ret});
    } else {
      gaps.push_back({resolved[i].week_end, "isolated by interior gap"});
    }
  }
  std::sort(gaps.begin(), gaps.end(),
            [](const GapWeek& a, const GapWeek& b) { return a.week_end < b.week_end; });

  return {WeeklySeries(prices.asset(), std::move(points)), std::move(gaps)};
}

namespace {

WeeklySeries rolling_apply(const WeeklySeries& s, int k, const char* suffix,
                           double (*window_fn)(const double*, int)) {
  if (k < 1) throw std::invalid_argument("window length must be >= 1");
  const int n = int(s.size());
  if (k > n) throw std::runtime_error("insufficient history");

  const auto vals = s.values();
  std::vector<WeeklyPoint> out;
  out.reserve(std::size_t(n - k + 1));
  // Output at week t covers values t-1..t-k; the final point sits one week
  // past the input (the one-step-ahead window is fully known).
  for (int t = k; t <= n; ++t) {
    const Date w = (t < n) ? s.week(std::size_t(t)) : s.last_week() + kWeek;
    out.push_back({w, window_fn(vals.data() + (t - k), k)});
  }
  return WeeklySeries(s.id() + suffix, std::move(out));
}

double window_mean(const double* v, int k) {
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += v[i];
  return sum / k;
}

double window_median(const double* v, int k) {
  std::vector<double> w(v, v + k);
  const int mid = k / 2;
  std::nth_element(w.begin(), w.begin() + mid, w.end());
  const double upper = w[std::size_t(mid)];
  if (k % 2 == 1) return upper;
  const double lower = *std::max_element(w.begin(), w.begin() + mid);
  return (lower + upper) / 2.0;
}

}  // namespace

WeeklySeries rolling_mean(const WeeklySeries& s, int k) {
  return rolling_apply(s, k, ".mean", window_mean);
}

WeeklySeries rolling_median(const WeeklySeries& s, int k) {
  return rolling_apply(s, k, ".median", window_median);
}

std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b) {
  if (a.empty() || b.empty()) throw std::runtime_error("disjoint spans");
  const Date lo = std::max(a.first_week(), b.first_week());
  const Date hi = std::min(a.last_week(), b.last_week());
  if (lo > hi || (b.first_week() - a.first_week()) % kWeek != std::chrono::days{0}) {
    throw std::runtime_error("disjoint spans");
  }
  auto slice = [&](const WeeklySeries& s) {
    const std::size_t i0 = *s.index_of(lo);
    const std::size_t i1 = *s.index_of(hi);
    std::vector<WeeklyPoint> pts(s.points().begin() + std::ptrdiff_t(i0),
                                 s.points().begin() + std::ptrdiff_t(i1) + 1);
    return WeeklySeries(s.id(), std::move(pts));
  };
  return {slice(a), slice(b)};
}

DailyPriceSeries parse_price_csv(std::string_view bytes, std::string asset) {
  const CsvTable table = parse_csv(bytes);
  const int date_col = table.column("date");
  const int close_col = table.column("close");
  if (date_col < 0 || close_col < 0) {
    throw std::runtime_error("price CSV must have 'date' and 'close' columns");
  }
  std::vector<DailyPoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (int(row.size()) <= std::max(date_col, close_col)) {
      throw std::runtime_error("short row in price CSV");
    }
    double close = 0.0;
    try {
      close = std::stod(row[std::size_t(close_col)]);
    } catch (const std::exception&) {
      throw std::runtime_error("invalid price: '" + row[std::size_t(close_col)] + "'");
    }
    if (!(close > 0.0)) throw std::invalid_argument("invalid price");
    points.push_back({parse_date(row[std::size_t(date_col)]), close});
  }
  return DailyPriceSeries(std::move(asset), std::move(points));
}

WeeklySeries parse_weekly_csv(std::string_view bytes, std::string id) {
  const CsvTable table = parse_csv(bytes);
  const int week_col = table.column("week_end");
  const int value_col = table.column("value");
  if (week_col < 0 || value_col < 0) {
    throw std::runtime_error("weekly CSV must have 'week_end' and 'value' columns");
  }
  std::vector<WeeklyPoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (int(row.size()) <= std::max(week_col, value_col)) {
      throw std::runtime_error("short row in weekly CSV");
    }
    double v = 0.0;
    try {
      v = std::stod(row[std::size_t(value_col)]);
    } catch (const std::exception&) {
      throw std::runtime_error("invalid value: '" + row[std::size_t(value_col)] + "'");
    }
    points.push_back({parse_date(row[std::size_t(week_col)]), v});
  }
  return WeeklySeries(std::move(id), std::move(points));
}

std::string weekly_csv(const WeeklySeries& s) {
  std::string out = "week_end,value\n";
  for (const auto& p : s.points()) {
    out += format_date(p.week_end);
    out += ',';
    out += format_double(p.value);
    out += '\n';
  }
  return out;
}

}  // namespace svibt
