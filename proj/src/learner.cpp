#include "svibt/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace svibt {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int sign_of(double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; }

int sign_of(std::int64_t v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

// Depth-limited regression tree on integer targets in {-1, 0, +1}. Split
// thresholds are data values (empirical order statistics) and split quality
// is compared in exact integer arithmetic, so tree structure depends only on
// the feature orderings, never on their numeric scale.
struct TreeNode {
  int feature = -1;      // -1 marks a leaf
  double threshold = 0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int sign = 0;          // leaf vote
};

struct Tree {
  std::vector<TreeNode> nodes;

  int predict_sign(const std::vector<double>& row) const {
    int at = 0;
    while (nodes[std::size_t(at)].feature >= 0) {
      const TreeNode& nd = nodes[std::size_t(at)];
      at = row[std::size_t(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[std::size_t(at)].sign;
  }
};

struct TreeBuilder {
  const FeatureMatrix& fm;
  const std::vector<int>& y;
  int max_depth;
  Tree tree;

  int build(std::vector<std::size_t>& members, int depth) {
    std::int64_t sum = 0;
    for (std::size_t r : members) sum += y[r];
    const std::int64_t n = std::int64_t(members.size());

    bool pure = true;
    for (std::size_t r : members) {
      if (y[r] != y[members.front()]) {
        pure = false;
        break;
      }
    }

    if (depth >= max_depth || n < 2 || pure) return emit_leaf(sum);

    // Best split: maximize S_L^2/n_L + S_R^2/n_R (equivalent to minimizing
    // SSE). Candidates are every boundary between distinct sorted values of
    // each feature; comparisons cross-multiply in int64.
    int best_feature = -1;
    std::size_t best_pos = 0;
    std::int64_t best_num = 0, best_den = 1;
    bool have_best = false;
    std::vector<std::size_t> order(members);

    for (std::size_t f = 0; f < fm.n_cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = fm.rows[a][f], vb = fm.rows[b][f];
        return va != vb ? va < vb : a < b;
      });
      std::int64_t left_sum = 0;
      for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        left_sum += y[order[p]];
        if (fm.rows[order[p]][f] == fm.rows[order[p + 1]][f]) continue;
        const std::int64_t nl = std::int64_t(p + 1);
        const std::int64_t nr = n - nl;
        const std::int64_t sl = left_sum;
        const std::int64_t sr = sum - left_sum;
        const std::int64_t num = sl * sl * nr + sr * sr * nl;
        const std::int64_t den = nl * nr;
        // must strictly beat the unsplit node: num/den > S^2/n
        if (num * n <= sum * sum * den) continue;
        if (!have_best || num * best_den > best_num * den) {
          have_best = true;
          best_feature = int(f);
          best_pos = p;
          best_num = num;
          best_den = den;
        }
      }
    }
    if (!have_best) return emit_leaf(sum);

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = fm.rows[a][std::size_t(best_feature)];
      const double vb = fm.rows[b][std::size_t(best_feature)];
      return va != vb ? va < vb : a < b;
    });
    std::vector<std::size_t> left_members(order.begin(),
                                          order.begin() + std::ptrdiff_t(best_pos) + 1);
    std::vector<std::size_t> right_members(order.begin() + std::ptrdiff_t(best_pos) + 1,
                                           order.end());

    const int node_index = int(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[std::size_t(node_index)].feature = best_feature;
    tree.nodes[std::size_t(node_index)].threshold =
        fm.rows[left_members.back()][std::size_t(best_feature)];
    const int left_index = build(left_members, depth + 1);
    const int right_index = build(right_members, depth + 1);
    tree.nodes[std::size_t(node_index)].left = left_index;
    tree.nodes[std::size_t(node_index)].right = right_index;
    return node_index;
  }

  int emit_leaf(std::int64_t sum) {
    const int node_index = int(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[std::size_t(node_index)].sign = sign_of(sum);
    return node_index;
  }
};

Tree fit_tree(const FeatureMatrix& fm, const std::vector<int>& y,
              const std::vector<std::size_t>& sample, int max_depth) {
  TreeBuilder builder{fm, y, max_depth, {}};
  std::vector<std::size_t> members(sample);
  builder.build(members, 0);
  return std::move(builder.tree);
}

}  // namespace

std::uint64_t CounterRng::next() { return mix64(key ^ mix64(counter++)); }

std::size_t CounterRng::next_below(std::size_t n) {
  return std::size_t((static_cast<unsigned __int128>(next()) * n) >> 64);
}

std::uint64_t derive_key(std::uint64_t seed, const std::string& asset, std::uint64_t week_index,
                         std::uint64_t tree_index) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ fnv1a(asset));
  k = mix64(k ^ week_index);
  k = mix64(k ^ tree_index);
  return k;
}

void WalkForwardConfig::validate() const {
  if (calibration_weeks < 10) throw std::invalid_argument("calibration_weeks must be >= 10");
  if (retrain_every < 1) throw std::invalid_argument("retrain_every must be >= 1");
  if (ensemble_size < 1) throw std::invalid_argument("ensemble_size must be >= 1");
  if (tree_depth < 1) throw std::invalid_argument("tree_depth must be >= 1");
  if (!(subsample_fraction > 0.0) || subsample_fraction > 1.0) {
    throw std::invalid_argument("subsample_fraction must be in (0, 1]");
  }
}

PositionSeries walk_forward(const FeatureMatrix& fm, const WalkForwardConfig& cfg) {
  cfg.validate();
  const int n = int(fm.n_rows());
  const int cal = cfg.calibration_weeks;
  if (n < cal + 1) throw std::runtime_error("insufficient rows");

  std::vector<int> y(fm.targets.size());
  for (std::size_t i = 0; i < fm.targets.size(); ++i) y[i] = sign_of(fm.targets[i]);

  const std::size_t draws =
      std::max<std::size_t>(1, std::size_t(std::floor(cfg.subsample_fraction * cal)));

  std::vector<Tree> model;
  std::vector<PositionPoint> points;
  points.reserve(std::size_t(n - cal));

  for (int t = cal; t < n; ++t) {
    if ((t - cal) % cfg.retrain_every == 0) {
      model.clear();
      model.reserve(std::size_t(cfg.ensemble_size));
      for (int e = 0; e < cfg.ensemble_size; ++e) {
        CounterRng rng(derive_key(cfg.seed, fm.asset, std::uint64_t(t), std::uint64_t(e)));
        std::vector<std::size_t> sample(draws);
        for (auto& s : sample) {
          s = std::size_t(t - cal) + rng.next_below(std::size_t(cal));
        }
        model.push_back(fit_tree(fm, y, sample, cfg.tree_depth));
      }
    }
    std::int64_t vote_sum = 0;
    for (const Tree& tree : model) vote_sum += tree.predict_sign(fm.rows[std::size_t(t)]);
    double position = double(vote_sum) / double(cfg.ensemble_size);
    position = std::min(1.0, std::max(-1.0, position));
    points.push_back({fm.decision_weeks[std::size_t(t)], position});
  }
  return PositionSeries(fm.asset, std::move(points));
}

FeatureMatrix truncate_before(const FeatureMatrix& fm, Date cut) {
  FeatureMatrix out;
  out.asset = fm.asset;
  out.spec = fm.spec;
  out.columns = fm.columns;
  for (std::size_t i = 0; i < fm.n_rows(); ++i) {
    if (fm.decision_weeks[i] >= cut) break;
    out.decision_weeks.push_back(fm.decision_weeks[i]);
    out.rows.push_back(fm.rows[i]);
    out.targets.push_back(fm.targets[i]);
  }
  return out;
}

std::vector<LookaheadMismatch> anti_lookahead_check(const FeatureMatrix& fm,
                                                    const WalkForwardConfig& cfg,
                                                    Date horizon_cut,
                                                    const PositionFn& position_fn) {
  const PositionFn& fn = position_fn
                             ? position_fn
                             : PositionFn([](const FeatureMatrix& m, const WalkForwardConfig& c) {
                                 return walk_forward(m, c);
                               });
  std::vector<LookaheadMismatch> mismatches;
  const FeatureMatrix trunc = truncate_before(fm, horizon_cut);
  if (int(trunc.n_rows()) < cfg.calibration_weeks + 1) return mismatches;  // vacuous

  const PositionSeries full = fn(fm, cfg);
  const PositionSeries cut = fn(trunc, cfg);

  for (const auto& p : cut.points()) {
    const auto& fp = full.points();
    auto it = std::lower_bound(fp.begin(), fp.end(), p.decision_week,
                               [](const PositionPoint& q, Date d) { return q.decision_week < d; });
    if (it == fp.end() || it->decision_week != p.decision_week) {
      mismatches.push_back({p.decision_week, std::nan(""), p.weight});
    } else if (it->weight != p.weight) {
      mismatches.push_back({p.decision_week, it->weight, p.weight});
    }
  }
  return mismatches;
}

}  // namespace svibt
