#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svibt/features.hpp"
#include "svibt/strategies.hpp"

namespace svibt {

struct WalkForwardConfig {
  int calibration_weeks = 26;   // trailing in-sample window (about 6 months)
  int retrain_every = 1;        // weeks between refits; last model reused in between
  int ensemble_size = 100;
  int tree_depth = 2;
  double subsample_fraction = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Walk the matrix forward: for every decision week at or past the
/// calibration start, fit a bagged ensemble of depth-limited regression trees
/// on the trailing calibration_weeks rows (features -> sign of target), all
/// strictly before the decision week, and take the mean of the per-tree sign
/// votes as the position. Trees split only at empirical order statistics of
/// each feature, so positions are unchanged by any strictly increasing
/// per-feature transform. All randomness is derived statelessly from
/// (seed, asset, week, tree), making results byte-identical for any thread
/// count.
PositionSeries walk_forward(const FeatureMatrix& fm, const WalkForwardConfig& cfg);

struct LookaheadMismatch {
  Date week;
  double full_value = 0.0;
  double truncated_value = 0.0;
};

using PositionFn = std::function<PositionSeries(const FeatureMatrix&, const WalkForwardConfig&)>;

/// Positions for decision weeks before horizon_cut must be bitwise identical
/// whether or not rows at and after the cut exist. Any mismatch is evidence
/// of lookahead. position_fn defaults to walk_forward; pass a candidate
/// pipeline to audit it.
std::vector<LookaheadMismatch> anti_lookahead_check(const FeatureMatrix& fm,
                                                    const WalkForwardConfig& cfg,
                                                    Date horizon_cut,
                                                    const PositionFn& position_fn = {});

/// Rows strictly before the cut week.
FeatureMatrix truncate_before(const FeatureMatrix& fm, Date cut);

/// Stateless counter RNG (splitmix64 finalizer): one key, one counter, no
/// shared state between workers.
struct CounterRng {
  std::uint64_t key;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t k) : key(k) {}
  std::uint64_t next();
  std::size_t next_below(std::size_t n);
};

std::uint64_t derive_key(std::uint64_t seed, const std::string& asset, std::uint64_t week_index,
                         std::uint64_t tree_index);

}  // namespace svibt
