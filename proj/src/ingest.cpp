#include "svibt/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "svibt/csv.hpp"

namespace svibt {

RawSviWindow parse_svi_csv(std::string_view bytes, std::string keyword) {
  const CsvTable table = parse_csv(bytes);
  const int week_col = table.column("week_end");
  const int value_col = table.column("value");
  if (week_col < 0 || value_col < 0) {
    throw std::runtime_error("SVI CSV must have 'week_end' and 'value' columns");
  }
  RawSviWindow w;
  w.keyword = std::move(keyword);
  for (const auto& row : table.rows) {
    if (int(row.size()) <= std::max(week_col, value_col)) {
      throw std::runtime_error("short row in SVI CSV");
    }
    const Date d = parse_date(row[std::size_t(week_col)]);
    const std::string& field = row[std::size_t(value_col)];
    std::size_t consumed = 0;
    int v = 0;
    try {
      v = std::stoi(field, &consumed);
    } catch (const std::exception&) {
      throw std::runtime_error("non-integer SVI value: '" + field + "'");
    }
    if (consumed != field.size()) {
      throw std::runtime_error("non-integer SVI value: '" + field + "'");
    }
    if (v < 0 || v > 100) throw std::runtime_error("out-of-range SVI");
    if (!w.weeks.empty() && d - w.weeks.back() != kWeek) {
      throw std::runtime_error("irregular spacing");
    }
    w.weeks.push_back(d);
    w.values.push_back(v);
  }
  if (w.weeks.empty()) throw std::runtime_error("empty SVI window");
  w.has_max = std::find(w.values.begin(), w.values.end(), 100) != w.values.end();
  return w;
}

namespace {

void validate_window(const RawSviWindow& w) {
  if (w.weeks.empty() || w.weeks.size() != w.values.size()) {
    throw std::invalid_argument("malformed SVI window");
  }
  for (std::size_t i = 0; i < w.weeks.size(); ++i) {
    if (w.values[i] < 0 || w.values[i] > 100) throw std::runtime_error("out-of-range SVI");
    if (i > 0 && w.weeks[i] - w.weeks[i - 1] != kWeek) {
      throw std::runtime_error("irregular spacing");
    }
  }
}

}  // namespace

StitchedSvi stitch_windows(std::vector<RawSviWindow> windows, int min_overlap) {
  if (windows.empty()) throw std::invalid_argument("no windows to stitch");
  if (min_overlap < 1) throw std::invalid_argument("min_overlap must be >= 1");
  for (const auto& w : windows) {
    validate_window(w);
    if (w.keyword != windows.front().keyword) {
      throw std::invalid_argument("windows belong to different keywords");
    }
  }
  std::sort(windows.begin(), windows.end(), [](const RawSviWindow& a, const RawSviWindow& b) {
    return a.start() != b.start() ? a.start() < b.start() : a.end() < b.end();
  });
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if ((windows[i].start() - windows.front().start()) % kWeek != std::chrono::days{0}) {
      throw std::runtime_error("windows not on a common weekly grid");
    }
  }

  const std::size_t m = windows.size();
  std::vector<double> scales(m, 1.0);
  double sq_rel_sum = 0.0;
  std::size_t rel_count = 0;

  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& a = windows[i];
    const auto& b = windows[i + 1];
    const Date lo = std::max(a.start(), b.start());
    const Date hi = std::min(a.end(), b.end());
    const long overlap_weeks = lo > hi ? 0 : (hi - lo) / kWeek + 1;
    if (overlap_weeks < min_overlap) throw std::runtime_error("insufficient overlap");

    // Least squares for the next scale over the overlap, restricted to weeks
    // where both integers are >= 1: values rounded down to 0 carry no usable
    // ratio information.
    double num = 0.0, den = 0.0;
    for (Date d = lo; d <= hi; d += kWeek) {
      const auto ia = std::size_t((d - a.start()) / kWeek);
      const auto ib = std::size_t((d - b.start()) / kWeek);
      const int va = a.values[ia];
      const int vb = b.values[ib];
      if (va < 1 || vb < 1) continue;
      num += double(va) * double(vb);
      den += double(vb) * double(vb);
    }
    if (den == 0.0) throw std::runtime_error("degenerate overlap");
    scales[i + 1] = scales[i] * (num / den);

    for (Date d = lo; d <= hi; d += kWeek) {
      const auto ia = std::size_t((d - a.start()) / kWeek);
      const auto ib = std::size_t((d - b.start()) / kWeek);
      const int va = a.values[ia];
      const int vb = b.values[ib];
      if (va < 1 || vb < 1) continue;
      const double xa = scales[i] * va;
      const double xb = scales[i + 1] * vb;
      const double rel = (xa - xb) / (0.5 * (xa + xb));
      sq_rel_sum += rel * rel;
      ++rel_count;
    }
  }

  const Date span_lo = windows.front().start();
  Date span_hi = windows.front().end();
  for (const auto& w : windows) span_hi = std::max(span_hi, w.end());

  std::vector<WeeklyPoint> points;
  points.reserve(std::size_t((span_hi - span_lo) / kWeek) + 1);
  for (Date d = span_lo; d <= span_hi; d += kWeek) {
    double weighted_sum = 0.0, weight_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& w = windows[i];
      if (d < w.start() || d > w.end()) continue;
      const auto idx = std::size_t((d - w.start()) / kWeek);
      const double weight = 1.0 / (scales[i] * scales[i]);
      weighted_sum += weight * (scales[i] * w.values[idx]);
      weight_sum += weight;
    }
    if (weight_sum == 0.0) throw std::runtime_error("uncovered week inside stitched span");
    points.push_back({d, weighted_sum / weight_sum});
  }

  StitchedSvi out;
  out.keyword = windows.front().keyword;
  out.series = WeeklySeries(out.keyword, std::move(points));
  out.windows_used = int(m);
  out.overlap_fit_error = rel_count == 0 ? 0.0 : std::sqrt(sq_rel_sum / double(rel_count));
  out.scales = std::move(scales);
  return out;
}

namespace {

std::string keyword_dir() {
  if (const char* env = std::getenv("SVIBT_KEYWORD_DIR")) return env;
#ifdef SVIBT_KEYWORD_DIR
  return SVIBT_KEYWORD_DIR;
#else
  return "data/keywords";
#endif
}

KeywordSet parse_keyword_file(const std::string& name, const std::string& path) {
  const std::string text = read_file(path);
  KeywordSet set;
  set.name = name;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line =
        (nl == std::string::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = (nl == std::string::npos) ? text.size() : nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    // Appendix lists repeat a handful of entries verbatim; keep the first.
    if (std::find(set.keywords.begin(), set.keywords.end(), line) == set.keywords.end()) {
      set.keywords.push_back(std::move(line));
    }
  }
  if (set.keywords.empty()) throw std::runtime_error("empty keyword set: " + path);
  return set;
}

}  // namespace

const std::vector<std::string>& bundled_keyword_set_names() {
  static const std::vector<std::string> names = {"ailments", "classic_cars", "arcade_games",
                                                 "preis_finance"};
  return names;
}

KeywordSet load_keyword_set(const std::string& name_or_path) {
  const auto& bundled = bundled_keyword_set_names();
  if (std::find(bundled.begin(), bundled.end(), name_or_path) != bundled.end()) {
    const std::string path = keyword_dir() + "/" + name_or_path + ".txt";
    return parse_keyword_file(name_or_path, path);
  }
  if (std::filesystem::exists(name_or_path)) {
    return parse_keyword_file(std::filesystem::path(name_or_path).stem().string(),
                              name_or_path);
  }
  throw std::runtime_error("unknown keyword set: " + name_or_path);
}

}  // namespace svibt
