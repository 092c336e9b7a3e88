#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "svibt/series.hpp"

namespace svibt {

/// One Google-Trends-style export window: weekly integers in [0, 100],
/// max-normalized so at least one value is 100. A window with no 100 is
/// accepted but flagged as a possible sub-export (has_max = false).
struct RawSviWindow {
  std::string keyword;
  std::vector<Date> weeks;  // strictly increasing, exactly 7 days apart
  std::vector<int> values;  // each in [0, 100]
  bool has_max = true;

  Date start() const { return weeks.front(); }
  Date end() const { return weeks.back(); }
  std::size_t size() const { return weeks.size(); }
};

/// Parse and validate an SVI window from CSV with header `week_end,value`.
RawSviWindow parse_svi_csv(std::string_view bytes, std::string keyword);

/// One long SVI series reconstructed from overlapping windows. The level is
/// defined only up to a global positive scale; anything downstream must be
/// scale-free.
struct StitchedSvi {
  std::string keyword;
  WeeklySeries series;
  int windows_used = 0;
  double overlap_fit_error = 0.0;   // rms relative mismatch on overlaps after scaling
  std::vector<double> scales;       // per window, sorted by start; scales[0] = 1
};

/// Chain windows by least squares on the linear values of each consecutive
/// overlap, excluding overlap weeks where either side is below 1 (integer
/// rounding makes those relative errors unbounded). Overlapping output weeks
/// combine the scaled windows with inverse-variance weights (window noise
/// grows with its scale). Input order does not matter; windows are sorted by
/// start internally.
StitchedSvi stitch_windows(std::vector<RawSviWindow> windows, int min_overlap = 8);

struct KeywordSet {
  std::string name;
  std::vector<std::string> keywords;  // unique, first occurrence wins
};

/// Load a bundled keyword set (ailments, classic_cars, arcade_games,
/// preis_finance) or a user file with one keyword per line. Bundled files
/// are looked up in SVIBT_KEYWORD_DIR (overridable by the environment
/// variable of the same name).
KeywordSet load_keyword_set(const std::string& name_or_path);

const std::vector<std::string>& bundled_keyword_set_names();

}  // namespace svibt
