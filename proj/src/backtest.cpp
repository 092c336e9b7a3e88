#include "svibt/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "svibt/csv.hpp"

namespace svibt {

std::vector<double> BacktestLedger::net_returns() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.net_return);
  return out;
}

BacktestLedger run_backtest(const std::map<std::string, PositionSeries>& positions,
                            const std::map<std::string, WeeklySeries>& returns,
                            double cost_bps) {
  if (cost_bps < 0.0) throw std::invalid_argument("cost_bps must be >= 0");
  for (const auto& [asset, pos] : positions) {
    if (pos.asset() != asset) throw std::invalid_argument("position map key/label mismatch");
  }

  std::set<Date> week_set;
  for (const auto& [asset, pos] : positions) {
    for (const auto& p : pos.points()) week_set.insert(p.decision_week);
  }

  BacktestLedger ledger;
  std::map<std::string, double> prev_weight;
  double cumulated = 0.0;
  const double cost_rate = cost_bps / 1e4;

  for (const Date week : week_set) {
    // assets active this week, in map (sorted-key) order
    std::vector<std::pair<std::string, double>> pos_now;
    int active = 0;
    for (const auto& [asset, pos] : positions) {
      const auto& pts = pos.points();
      auto it = std::lower_bound(
          pts.begin(), pts.end(), week,
          [](const PositionPoint& p, Date d) { return p.decision_week < d; });
      const double w = (it != pts.end() && it->decision_week == week) ? it->weight : 0.0;
      pos_now.emplace_back(asset, w);
      if (w != 0.0) ++active;
    }

    LedgerRow row;
    row.week_end = week;
    double turnover = 0.0;
    for (auto& [asset, p] : pos_now) {
      const double weight = active > 0 ? p / double(active) : 0.0;
      if (weight != 0.0) {
        const auto& ret = returns.at(asset);
        const auto idx = ret.index_of(week + kWeek);
        if (!idx) throw std::runtime_error("unpriced position: " + asset + " decided " +
                                           format_date(week));
        row.gross_return += weight * ret.value(*idx);
        row.net_exposure += weight;
        row.gross_exposure += std::fabs(weight);
        ++row.n_stocks;
      }
      turnover += std::fabs(weight - prev_weight[asset]);
      prev_weight[asset] = weight;
    }
    row.cost = cost_rate * turnover;
    row.net_return = row.gross_return - row.cost;
    cumulated += row.net_return;
    row.cumulated = cumulated;
    ledger.rows.push_back(row);
  }
  return ledger;
}

WeeklySeries equity_curve(const BacktestLedger& ledger) {
  std::vector<WeeklyPoint> points;
  points.reserve(ledger.rows.size());
  for (const auto& r : ledger.rows) points.push_back({r.week_end, r.cumulated});
  return WeeklySeries("cumulated", std::move(points));
}

std::string ledger_csv(const BacktestLedger& ledger) {
  std::string out =
      "week_end,gross_return,cost,net_return,net_exposure,gross_exposure,n_stocks,cumulated\n";
  for (const auto& r : ledger.rows) {
    out += format_date(r.week_end);
    out += ',';
    out += format_double(r.gross_return);
    out += ',';
    out += format_double(r.cost);
    out += ',';
    out += format_double(r.net_return);
    out += ',';
    out += format_double(r.net_exposure);
    out += ',';
    out += format_double(r.gross_exposure);
    out += ',';
    out += std::to_string(r.n_stocks);
    out += ',';
    out += format_double(r.cumulated);
    out += '\n';
  }
  return out;
}

PositionSeries trim_to_priced(const PositionSeries& positions, const WeeklySeries& returns) {
  std::vector<PositionPoint> kept = positions.points();
  while (!kept.empty() && !returns.index_of(kept.back().decision_week + kWeek)) {
    kept.pop_back();
  }
  return PositionSeries(positions.asset(), std::move(kept));
}

}  // namespace svibt
