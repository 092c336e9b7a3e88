#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svibt/series.hpp"

namespace svibt {

/// Summary statistics of a weekly return stream: sample mean/sd (n-1
/// denominator), t-stat = (mean/sd)*sqrt(n), and the zero-interest annualized
/// information ratio (mean/sd)*sqrt(52). Undefined when vol is zero; reported
/// as absent rather than infinite.
struct PerfStats {
  int n_weeks = 0;
  double mean_weekly_bps = 0.0;
  double vol_weekly_bps = 0.0;
  std::optional<double> tstat;
  std::optional<double> ir_annualized;
};

/// Returns are in plain return units (1 bp = 1e-4). Requires n >= 2.
PerfStats perf_stats(const std::vector<double>& weekly_returns);
PerfStats perf_stats(const WeeklySeries& weekly_returns);

/// Two-sided Wilcoxon rank-sum p-value. Exact by enumeration (midranks for
/// ties) when the pooled size is <= 12: p = P(|W - E[W]| >= |w_obs - E[W]|)
/// over all assignments of pooled ranks to the first sample. Larger samples
/// use the normal approximation with tie and continuity corrections.
double wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b);

struct KeywordTstat {
  std::string keyword;
  double tstat = 0.0;
};

struct NullCalibration {
  std::vector<KeywordTstat> tstats;     // input order
  double exceed_fraction = 0.0;         // fraction with |t| > threshold
  std::vector<KeywordTstat> top3;       // best positive, descending
  std::vector<KeywordTstat> bottom3;    // best negative, ascending
};

/// Run the k-week Preis strategy on every keyword series against one asset's
/// weekly returns and collect the t-stat distribution. The keyword series are
/// deliberately finance-irrelevant; the exceed fraction estimates the false
/// discovery rate of the threshold. Requires at least 20 series.
NullCalibration null_calibration(const std::vector<WeeklySeries>& keyword_series,
                                 const WeeklySeries& asset_returns, int k, double cost_bps,
                                 double threshold, int threads = 0);

}  // namespace svibt
