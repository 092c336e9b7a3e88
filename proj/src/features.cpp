#include "svibt/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "svibt/csv.hpp"

namespace svibt {

FeatureMode parse_feature_mode(const std::string& name) {
  if (name == "returns_only") return FeatureMode::returns_only;
  if (name == "gt_only") return FeatureMode::gt_only;
  if (name == "both") return FeatureMode::both;
  throw std::invalid_argument("unknown feature mode: " + name);
}

std::string feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::returns_only: return "returns_only";
    case FeatureMode::gt_only: return "gt_only";
    case FeatureMode::both: return "both";
  }
  throw std::logic_error("bad feature mode");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ColumnPlan {
  std::string name;
  bool from_svi;
  int lag;
};

std::vector<ColumnPlan> plan_columns(const FeatureSpec& spec) {
  std::vector<ColumnPlan> cols;
  const std::string prefix = spec.binary ? "bin_" : "";
  if (spec.mode != FeatureMode::gt_only) {
    for (int l = 1; l <= spec.lags; ++l) {
      cols.push_back({prefix + "ret_lag" + std::to_string(l), false, l});
    }
  }
  if (spec.mode != FeatureMode::returns_only) {
    for (int l = 1; l <= spec.lags; ++l) {
      cols.push_back({prefix + "svi_rel_lag" + std::to_string(l), true, l});
    }
  }
  return cols;
}

double raw_cell(const std::vector<double>& ret_vals, const std::vector<double>& svi_vals,
                const ColumnPlan& col, int t) {
  if (!col.from_svi) {
    const int i = t - col.lag;
    if (i < 0) return kNaN;
    return ret_vals[std::size_t(i)];
  }
  const int i = t - col.lag;
  const int j = i - 1;
  if (j < 0) return kNaN;
  const double denom = svi_vals[std::size_t(j)];
  if (denom == 0.0) return kNaN;
  const double r = svi_vals[std::size_t(i)] / denom - 1.0;
  return std::isfinite(r) ? r : kNaN;
}

double trailing_median(const std::vector<double>& series, int t, int m) {
  // median of series[t-m .. t-1]; NaN when the window is incomplete
  if (t - m < 0) return kNaN;
  std::vector<double> window;
  window.reserve(std::size_t(m));
  for (int i = t - m; i < t; ++i) {
    const double v = series[std::size_t(i)];
    if (std::isnan(v)) return kNaN;
    window.push_back(v);
  }
  const int mid = m / 2;
  std::nth_element(window.begin(), window.begin() + mid, window.end());
  const double upper = window[std::size_t(mid)];
  if (m % 2 == 1) return upper;
  const double lower = *std::max_element(window.begin(), window.begin() + mid);
  return (lower + upper) / 2.0;
}

/// Final feature values on the weekly grid, NaN marking "not computable".
/// Looks strictly backwards, so any prefix of the inputs reproduces its cells
/// bit for bit — that is what the leakage audit leans on.
std::vector<std::vector<double>> feature_grid(const std::vector<double>& ret_vals,
                                              const std::vector<double>& svi_vals,
                                              const std::vector<ColumnPlan>& cols,
                                              const FeatureSpec& spec) {
  const int n = int(ret_vals.size());
  std::vector<std::vector<double>> grid(cols.size(), std::vector<double>(std::size_t(n), kNaN));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> raw(std::size_t(n), kNaN);
    for (int t = 0; t < n; ++t) raw[std::size_t(t)] = raw_cell(ret_vals, svi_vals, cols[c], t);
    if (!spec.binary) {
      grid[c] = std::move(raw);
      continue;
    }
    for (int t = 0; t < n; ++t) {
      const double v = raw[std::size_t(t)];
      if (std::isnan(v)) continue;
      const double med = trailing_median(raw, t, spec.median_window);
      if (std::isnan(med)) continue;
      grid[c][std::size_t(t)] = v > med ? 1.0 : 0.0;
    }
  }
  return grid;
}

void validate_spec(const FeatureSpec& spec) {
  if (spec.lags < 1) throw std::invalid_argument("lags must be >= 1");
  if (spec.binary && spec.median_window < 2) {
    throw std::invalid_argument("median window must be >= 2");
  }
}

}  // namespace

FeatureMatrix build_features(const WeeklySeries& returns, const WeeklySeries* svi,
                             const FeatureSpec& spec) {
  validate_spec(spec);
  if (spec.mode != FeatureMode::returns_only && svi == nullptr) {
    throw std::invalid_argument("svi required for feature mode " + feature_mode_name(spec.mode));
  }

  WeeklySeries ret_grid = returns;
  std::vector<double> svi_vals;
  if (svi != nullptr && spec.mode != FeatureMode::returns_only) {
    auto [ar, as] = align(returns, *svi);
    ret_grid = std::move(ar);
    svi_vals = as.values();
  }
  const std::vector<double> ret_vals = ret_grid.values();
  const int n = int(ret_vals.size());

  const auto cols = plan_columns(spec);
  const auto grid = feature_grid(ret_vals, svi_vals, cols, spec);

  FeatureMatrix fm;
  fm.asset = returns.id();
  fm.spec = spec;
  for (const auto& c : cols) fm.columns.push_back(c.name);

  for (int t = 0; t + 1 < n; ++t) {
    std::vector<double> row;
    row.reserve(cols.size());
    bool complete = true;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double v = grid[c][std::size_t(t)];
      if (std::isnan(v)) {
        complete = false;
        break;
      }
      row.push_back(v);
    }
    if (!complete) continue;
    fm.decision_weeks.push_back(ret_grid.week(std::size_t(t)));
    fm.rows.push_back(std::move(row));
    fm.targets.push_back(ret_vals[std::size_t(t) + 1]);
  }
  if (fm.rows.empty()) throw std::runtime_error("insufficient history");
  return fm;
}

namespace {

ColumnPlan parse_column_name(const std::string& name, const FeatureSpec& spec) {
  std::string rest = name;
  const std::string bin_prefix = "bin_";
  const bool binary = rest.rfind(bin_prefix, 0) == 0;
  if (binary != spec.binary) throw std::invalid_argument("column name disagrees with spec: " + name);
  if (binary) rest = rest.substr(bin_prefix.size());
  for (const char* family : {"ret_lag", "svi_rel_lag"}) {
    const std::string f = family;
    if (rest.rfind(f, 0) == 0) {
      const int lag = std::stoi(rest.substr(f.size()));
      return {name, f == "svi_rel_lag", lag};
    }
  }
  throw std::invalid_argument("unparseable feature column: " + name);
}

}  // namespace

std::vector<LeakageViolation> leakage_audit(const FeatureMatrix& fm,
                                            const WeeklySeries& returns,
                                            const WeeklySeries* svi) {
  std::vector<LeakageViolation> violations;
  if (fm.n_rows() == 0) return violations;

  std::vector<ColumnPlan> cols;
  cols.reserve(fm.columns.size());
  for (const auto& name : fm.columns) cols.push_back(parse_column_name(name, fm.spec));

  WeeklySeries ret_grid = returns;
  std::vector<double> svi_full;
  if (svi != nullptr && fm.spec.mode != FeatureMode::returns_only) {
    auto [ar, as] = align(returns, *svi);
    ret_grid = std::move(ar);
    svi_full = as.values();
  }
  const std::vector<double> ret_full = ret_grid.values();

  for (std::size_t i = 0; i < fm.n_rows(); ++i) {
    const Date week = fm.decision_weeks[i];
    const auto gi = ret_grid.index_of(week);
    if (!gi) {
      violations.push_back({week, "<row not on input grid>", 0.0, 0.0});
      continue;
    }
    // truncate both inputs at the decision week and recompute the row
    const std::vector<double> ret_trunc(ret_full.begin(),
                                        ret_full.begin() + std::ptrdiff_t(*gi) + 1);
    std::vector<double> svi_trunc;
    if (!svi_full.empty()) {
      svi_trunc.assign(svi_full.begin(), svi_full.begin() + std::ptrdiff_t(*gi) + 1);
    }
    const auto grid = feature_grid(ret_trunc, svi_trunc, cols, fm.spec);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double recomputed = grid[c][*gi];
      const double built = fm.rows[i][c];
      if (!(recomputed == built)) {
        violations.push_back({week, fm.columns[c], built, recomputed});
      }
    }
  }
  return violations;
}

std::string feature_csv(const FeatureMatrix& fm) {
  std::string out = "decision_week";
  for (const auto& c : fm.columns) {
    out += ',';
    out += c;
  }
  out += ",target\n";
  for (std::size_t i = 0; i < fm.n_rows(); ++i) {
    out += format_date(fm.decision_weeks[i]);
    for (double v : fm.rows[i]) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(fm.targets[i]);
    out += '\n';
  }
  return out;
}

}  // namespace svibt
