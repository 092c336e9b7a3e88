#include "svibt/strategies.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "svibt/backtest.hpp"
#include "svibt/parallel.hpp"
#include "svibt/stats.hpp"

namespace svibt {

PositionSeries::PositionSeries(std::string asset, std::vector<PositionPoint> points)
    : asset_(std::move(asset)), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double w = points_[i].weight;
    if (!std::isfinite(w) || w < -1.0 || w > 1.0) {
      throw std::invalid_argument("position weight outside [-1, 1] for '" + asset_ + "'");
    }
    if (i > 0 && points_[i].decision_week <= points_[i - 1].decision_week) {
      throw std::invalid_argument("decision weeks not strictly increasing for '" + asset_ + "'");
    }
  }
}

PositionSeries PositionSeries::relabeled(std::string asset) const {
  return PositionSeries(std::move(asset), points_);
}

PositionSeries preis_signal(const WeeklySeries& svi, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int n = int(svi.size());
  if (n <= k) throw std::runtime_error("insufficient history");

  std::vector<PositionPoint> out;
  out.reserve(std::size_t(n - k));
  for (int t = k; t < n; ++t) {
    // k * (svi(t) - mean of the k prior weeks), as a sum of differences:
    // each term is exactly zero when the values are bitwise equal, so
    // constant stretches give an exact tie.
    double delta_sum = 0.0;
    for (int i = t - k; i < t; ++i) {
      delta_sum += svi.value(std::size_t(t)) - svi.value(std::size_t(i));
    }
    double weight = 0.0;
    if (delta_sum > 0.0) weight = -1.0;
    else if (delta_sum < 0.0) weight = 1.0;
    out.push_back({svi.week(std::size_t(t)), weight});
  }
  return PositionSeries(svi.id(), std::move(out));
}

double preis_backtest_tstat(const WeeklySeries& svi, const WeeklySeries& asset_returns, int k,
                            double cost_bps) {
  PositionSeries raw = preis_signal(svi, k).relabeled(asset_returns.id());
  PositionSeries priced = trim_to_priced(raw, asset_returns);
  if (priced.size() < 2) return 0.0;
  const BacktestLedger ledger = run_backtest({{asset_returns.id(), priced}},
                                             {{asset_returns.id(), asset_returns}}, cost_bps);
  const PerfStats stats = perf_stats(ledger.net_returns());
  return stats.tstat.value_or(0.0);
}

std::vector<KScanPoint> k_scan(const WeeklySeries& svi, const WeeklySeries& asset_returns,
                               int k_lo, int k_hi, double cost_bps, int threads) {
  if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("bad k range");
  const std::size_t count = std::size_t(k_hi - k_lo + 1);
  std::vector<KScanPoint> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const int k = k_lo + int(i);
    out[i] = {k, preis_backtest_tstat(svi, asset_returns, k, cost_bps)};
  });
  return out;
}

PositionSeries ensemble_positions(const std::vector<PositionSeries>& signals) {
  if (signals.empty()) throw std::invalid_argument("empty signal list");
  const std::string& asset = signals.front().asset();
  for (const auto& s : signals) {
    if (s.asset() != asset) throw std::invalid_argument("mixed assets in ensemble");
    if (s.empty()) throw std::runtime_error("disjoint spans");
  }

  // Accumulate per week in signal order (deterministic summation), then keep
  // the weeks every signal covers.
  std::map<Date, std::pair<double, std::size_t>> acc;
  for (const auto& s : signals) {
    for (const auto& p : s.points()) {
      auto& slot = acc[p.decision_week];
      slot.first += p.weight;
      slot.second += 1;
    }
  }
  std::vector<PositionPoint> out;
  for (const auto& [week, slot] : acc) {
    if (slot.second != signals.size()) continue;
    double mean = slot.first / double(signals.size());
    // exact arithmetic keeps |mean| <= 1; clamp guards rounding at the edge
    mean = std::min(1.0, std::max(-1.0, mean));
    out.push_back({week, mean});
  }
  if (out.empty()) throw std::runtime_error("disjoint spans");
  return PositionSeries(asset, std::move(out));
}

}  // namespace svibt
