#pragma once

#include <string>
#include <vector>

#include "svibt/series.hpp"

namespace svibt {

enum class FeatureMode { returns_only, gt_only, both };

FeatureMode parse_feature_mode(const std::string& name);
std::string feature_mode_name(FeatureMode mode);

struct FeatureSpec {
  FeatureMode mode = FeatureMode::returns_only;
  int lags = 4;
  bool binary = false;
  int median_window = 26;
};

/// Learner input rows ordered by decision week. Every feature at row t is
/// computable from data at weeks <= t; rows with any unavailable feature are
/// dropped, never imputed. Column names carry their family and lag
/// (ret_lag3, svi_rel_lag2, bin_ret_lag1, ...) so the leakage audit can parse
/// them back.
struct FeatureMatrix {
  std::string asset;
  FeatureSpec spec;
  std::vector<std::string> columns;
  std::vector<Date> decision_weeks;
  std::vector<std::vector<double>> rows;   // rows[i][j], i indexed like decision_weeks
  std::vector<double> targets;             // next holding-window return

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return columns.size(); }
};

/// Build features from weekly returns and (optionally) a stitched SVI series.
/// Return features are the L lagged weekly returns r(t-l); SVI features are
/// lagged relative changes s(t-l)/s(t-l-1) - 1, scale-free by construction.
/// With spec.binary set, each feature column is reduced to 1 if the raw value
/// exceeds its own trailing median over the previous median_window weeks,
/// else 0 (ties -> 0). The target is the return over the week following the
/// decision week. Pass svi = nullptr for returns_only.
FeatureMatrix build_features(const WeeklySeries& returns, const WeeklySeries* svi,
                             const FeatureSpec& spec);

struct LeakageViolation {
  Date week;
  std::string column;
  double built = 0.0;
  double recomputed = 0.0;
};

/// Recompute every feature cell from the raw inputs truncated at its row's
/// decision week and compare bitwise; any mismatch means information beyond
/// week t leaked into row t. An empty report is the pass condition.
std::vector<LeakageViolation> leakage_audit(const FeatureMatrix& fm,
                                            const WeeklySeries& returns,
                                            const WeeklySeries* svi);

/// Feature matrix as CSV (decision_week, features..., target) for external
/// audits.
std::string feature_csv(const FeatureMatrix& fm);

}  // namespace svibt
