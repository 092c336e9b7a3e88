#pragma once

#include <map>
#include <string>
#include <vector>

#include "svibt/series.hpp"
#include "svibt/strategies.hpp"

namespace svibt {

struct LedgerRow {
  Date week_end;           // decision week
  double gross_return = 0.0;
  double cost = 0.0;       // >= 0
  double net_return = 0.0; // gross - cost
  double net_exposure = 0.0;
  double gross_exposure = 0.0;
  int n_stocks = 0;        // assets with nonzero weight
  double cumulated = 0.0;  // running sum of net returns
};

struct BacktestLedger {
  std::vector<LedgerRow> rows;

  std::vector<double> net_returns() const;
};

/// Portfolio accounting for one position map. The weight of asset a at
/// decision week t is position_a(t) / N(t), N(t) = number of assets with a
/// nonzero position that week (equal weight across active names; N = 0 means
/// a flat week). The decision at week t earns the asset's return over the
/// following week; costs charge cost_bps per unit of |weight change|, with
/// initial weights zero. Throws "unpriced position" when a nonzero position
/// has no return for its holding week.
BacktestLedger run_backtest(const std::map<std::string, PositionSeries>& positions,
                            const std::map<std::string, WeeklySeries>& returns,
                            double cost_bps);

/// Cumulated net returns by decision week (arithmetic sum).
WeeklySeries equity_curve(const BacktestLedger& ledger);

/// Ledger CSV, plot-ready:
/// week_end,gross_return,cost,net_return,net_exposure,gross_exposure,n_stocks,cumulated
std::string ledger_csv(const BacktestLedger& ledger);

/// Drop trailing decision weeks whose next-week holding return is not covered
/// by the return series; such decisions cannot be evaluated. Only the tail
/// can be affected.
PositionSeries trim_to_priced(const PositionSeries& positions, const WeeklySeries& returns);

}  // namespace svibt
