#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "svibt/learner.hpp"

namespace svibt {

/// Carries every detail collected during fail-fast validation; the CLI turns
/// each entry into one machine-readable stderr line.
struct ConfigError : std::runtime_error {
  std::vector<std::string> details;

  explicit ConfigError(const std::string& msg, std::vector<std::string> d = {})
      : std::runtime_error(msg), details(std::move(d)) {}
};

struct RunConfig {
  std::vector<std::string> universe;
  std::string price_dir;
  std::string svi_dir;
  std::vector<std::string> keyword_sets;
  std::string mode = "learner";          // preis_single | preis_ensemble | learner
  std::string feature_mode = "all";      // returns_only | gt_only | both | all
  bool binary = false;
  int k = 10;                            // preis_single / null calibration
  int k_lo = 1, k_hi = 100;              // preis_ensemble scan range
  double cost_bps = 2.0;
  std::string entry_day = "Monday";
  std::string exit_day = "Friday";
  double threshold = 1.96;
  int lags = 4;
  int median_window = 26;
  int min_overlap = 8;
  std::string keyword;                   // k-scan / stitch target
  WalkForwardConfig walk_forward;
  std::string output_dir = "out";
  int threads = 0;

  void validate_values() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

/// Filesystem-safe keyword slug: ASCII-lowercased, runs of non-alphanumerics
/// collapsed to single underscores.
std::string slugify(const std::string& keyword);

}  // namespace svibt
