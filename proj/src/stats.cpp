#include "svibt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "svibt/parallel.hpp"
#include "svibt/strategies.hpp"

namespace svibt {

PerfStats perf_stats(const std::vector<double>& weekly_returns) {
  const std::size_t n = weekly_returns.size();
  if (n < 2) throw std::invalid_argument("need at least 2 weekly returns");
  double sum = 0.0;
  for (double r : weekly_returns) sum += r;
  const double mean = sum / double(n);
  double ss = 0.0;
  for (double r : weekly_returns) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / double(n - 1));

  PerfStats out;
  out.n_weeks = int(n);
  out.mean_weekly_bps = mean * 1e4;
  out.vol_weekly_bps = sd * 1e4;
  if (sd > 0.0) {
    out.tstat = mean / sd * std::sqrt(double(n));
    out.ir_annualized = mean / sd * std::sqrt(52.0);
  }
  return out;
}

PerfStats perf_stats(const WeeklySeries& weekly_returns) {
  return perf_stats(weekly_returns.values());
}

namespace {

// Pooled midranks, doubled so ties at .5 stay integral.
std::vector<std::int64_t> doubled_midranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> rank2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // midrank of positions i..j (1-based ranks): (i+1 + j+1) / 2, doubled
    const std::int64_t doubled = std::int64_t(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) rank2[order[t]] = doubled;
    i = j + 1;
  }
  return rank2;
}

double exact_two_sided_p(const std::vector<std::int64_t>& rank2, std::size_t na,
                         std::int64_t w2_obs) {
  const std::size_t n = rank2.size();
  const std::int64_t total = [&] {
    std::int64_t s = 0;
    for (auto r : rank2) s += r;
    return s;
  }();
  // E[W] doubled: na * (n + 1), exact under midranks since they always sum
  // to n(n+1)/2.
  const std::int64_t e2 = std::int64_t(na) * std::int64_t(n + 1);
  const std::int64_t dev = std::llabs(w2_obs - e2);

  // dp[k][s] = number of size-k subsets of the pooled ranks with doubled sum s.
  std::vector<std::vector<double>> dp(na + 1, std::vector<double>(std::size_t(total) + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t item = 0; item < n; ++item) {
    const std::int64_t r = rank2[item];
    for (std::size_t k = std::min(item + 1, na); k >= 1; --k) {
      for (std::int64_t s = total; s >= r; --s) {
        dp[k][std::size_t(s)] += dp[k - 1][std::size_t(s - r)];
      }
    }
  }
  double extreme = 0.0, all = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const double c = dp[na][std::size_t(s)];
    if (c == 0.0) continue;
    all += c;
    if (std::llabs(s - e2) >= dev) extreme += c;
  }
  return extreme / all;
}

double normal_two_sided_p(const std::vector<std::int64_t>& rank2, std::size_t na,
                          std::int64_t w2_obs) {
  const std::size_t n = rank2.size();
  const std::size_t nb = n - na;
  const double w = double(w2_obs) / 2.0;
  const double e = double(na) * double(n + 1) / 2.0;

  // tie correction: sum over tie groups of (t^3 - t)
  double tie_sum = 0.0;
  {
    std::vector<std::int64_t> sorted = rank2;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = double(j - i + 1);
      tie_sum += t * t * t - t;
      i = j + 1;
    }
  }
  const double var = double(na) * double(nb) / 12.0 *
                     (double(n + 1) - tie_sum / (double(n) * double(n - 1)));
  if (var <= 0.0) return 1.0;  // all observations tied
  double z = 0.0;
  if (w > e) {
    z = (w - e - 0.5) / std::sqrt(var);
  } else if (w < e) {
    z = (w - e + 0.5) / std::sqrt(var);
  }
  const double p = std::erfc(std::fabs(z) / std::sqrt(2.0));
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace

double wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto rank2 = doubled_midranks(pooled);
  std::int64_t w2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w2 += rank2[i];

  if (a.size() + b.size() <= 12) return exact_two_sided_p(rank2, a.size(), w2);
  return normal_two_sided_p(rank2, a.size(), w2);
}

NullCalibration null_calibration(const std::vector<WeeklySeries>& keyword_series,
                                 const WeeklySeries& asset_returns, int k, double cost_bps,
                                 double threshold, int threads) {
  if (keyword_series.size() < 20) {
    throw std::invalid_argument("need at least 20 keyword series");
  }
  NullCalibration out;
  out.tstats.resize(keyword_series.size());
  parallel_for(keyword_series.size(), threads, [&](std::size_t i) {
    out.tstats[i] = {keyword_series[i].id(),
                     preis_backtest_tstat(keyword_series[i], asset_returns, k, cost_bps)};
  });

  std::size_t exceed = 0;
  for (const auto& kt : out.tstats) {
    if (std::fabs(kt.tstat) > threshold) ++exceed;
  }
  out.exceed_fraction = double(exceed) / double(out.tstats.size());

  std::vector<KeywordTstat> sorted = out.tstats;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const KeywordTstat& x, const KeywordTstat& y) { return x.tstat > y.tstat; });
  const std::size_t top_n = std::min<std::size_t>(3, sorted.size());
  out.top3.assign(sorted.begin(), sorted.begin() + std::ptrdiff_t(top_n));
  out.bottom3.assign(sorted.end() - std::ptrdiff_t(top_n), sorted.end());
  std::reverse(out.bottom3.begin(), out.bottom3.end());
  return out;
}

}  // namespace svibt
