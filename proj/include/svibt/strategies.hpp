#pragma once

#include <string>
#include <vector>

#include "svibt/series.hpp"

namespace svibt {

struct PositionPoint {
  Date decision_week;
  double weight;  // in [-1, +1]
};

/// Per-week portfolio weight for one asset. A weight decided at week t
/// applies to the return realized over the following week's holding window.
class PositionSeries {
 public:
  PositionSeries() = default;
  PositionSeries(std::string asset, std::vector<PositionPoint> points);

  const std::string& asset() const { return asset_; }
  const std::vector<PositionPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  PositionSeries relabeled(std::string asset) const;

 private:
  std::string asset_;
  std::vector<PositionPoint> points_;
};

/// The Preis rule: short next week when the current SVI sits above its k-week
/// trailing moving average, long when below, flat on an exact tie. The
/// moving average covers weeks t-1..t-k, so a decision never contains its own
/// observation. The sign test is computed as sign of sum_{i=1..k}
/// (svi(t) - svi(t-i)), which is exact on integer-valued and constant inputs.
PositionSeries preis_signal(const WeeklySeries& svi, int k);

struct KScanPoint {
  int k;
  double tstat;
};

/// Backtest the Preis strategy for every k in [k_lo, k_hi] against one
/// asset's weekly returns and report the performance t-stat per k. Flat or
/// zero-volatility return streams report t = 0.
std::vector<KScanPoint> k_scan(const WeeklySeries& svi, const WeeklySeries& asset_returns,
                               int k_lo, int k_hi, double cost_bps, int threads = 0);

/// Equal-weight mean of component positions on their common decision weeks
/// (weeks where any component is still in warmup are dropped). All inputs
/// must carry the same asset label.
PositionSeries ensemble_positions(const std::vector<PositionSeries>& signals);

/// preis_signal -> single-asset backtest -> performance t-stat. Shared by
/// k_scan and the null-keyword calibration.
double preis_backtest_tstat(const WeeklySeries& svi, const WeeklySeries& asset_returns, int k,
                            double cost_bps);

}  // namespace svibt
