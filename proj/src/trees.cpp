#include "meso/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "meso/error.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

int majority(double w0, double w1) { return w1 >= w0 ? 1 : 0; }

double entropy_bits(double c0, double c1) {
  double n = c0 + c1;
  if (n <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {c0, c1}) {
    if (c > 0.0) {
      double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double gini(double c0, double c1) {
  double n = c0 + c1;
  if (n <= 0.0) return 0.0;
  double p0 = c0 / n, p1 = c1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

int Stump::predict(const Dataset& d, std::size_t row) const {
  double v = d.cell(row, feature);
  bool side_a;
  if (is_numeric) {
    side_a = !Dataset::is_missing(v) && v <= threshold;
  } else {
    side_a = !Dataset::is_missing(v) &&
             in_subset[static_cast<std::size_t>(v)] != 0;
  }
  return side_a ? class_a : class_b;
}

Stump stump_train(const Dataset& d, std::span<const double> weights) {
  std::size_t n = d.n_rows();
  if (weights.size() != n) throw Error("stump: weight vector length mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw Error("stump: invalid weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-6)
    throw Error("stump: weights must sum to 1");

  auto predictors = d.predictor_indices();
  if (predictors.empty()) throw Error("stump: dataset has no predictors");

  double w_class[2] = {0.0, 0.0};
  for (std::size_t r = 0; r < n; ++r) w_class[d.label(r)] += weights[r];

  // seed with the constant majority classifier so degenerate data still
  // yields a valid stump
  Stump best;
  best.feature = predictors.front();
  best.is_numeric = true;
  best.threshold = -kInf;
  best.class_a = best.class_b = majority(w_class[0], w_class[1]);
  best.weighted_error = best.class_a == 1 ? w_class[0] : w_class[1];

  for (std::size_t f : predictors) {
    const auto& spec = d.attr(f);
    if (spec.kind == AttrKind::Numeric) {
      std::vector<std::size_t> order;
      order.reserve(n);
      for (std::size_t r = 0; r < n; ++r)
        if (!Dataset::is_missing(d.cell(r, f))) order.push_back(r);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.cell(a, f) < d.cell(b, f);
      });

      // missing rows are not accumulated into side A, so their weight
      // (already inside w_class) stays on side B
      double a_w[2] = {0.0, 0.0};
      for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t r = order[i];
        a_w[d.label(r)] += weights[r];
        if (i + 1 < order.size() &&
            d.cell(order[i + 1], f) == d.cell(r, f))
          continue;  // only cut between distinct values
        if (i + 1 == order.size()) break;
        double thr = 0.5 * (d.cell(r, f) + d.cell(order[i + 1], f));
        double b_w[2] = {w_class[0] - a_w[0], w_class[1] - a_w[1]};
        int ca = majority(a_w[0], a_w[1]);
        int cb = majority(b_w[0], b_w[1]);
        double err = (ca == 1 ? a_w[0] : a_w[1]) + (cb == 1 ? b_w[0] : b_w[1]);
        if (err < best.weighted_error) {
          best.feature = f;
          best.is_numeric = true;
          best.threshold = thr;
          best.in_subset.clear();
          best.class_a = ca;
          best.class_b = cb;
          best.weighted_error = err;
        }
      }
    } else {
      std::size_t n_cat = spec.categories.size();
      std::vector<double> cat_w(n_cat * 2, 0.0);
      double miss_w[2] = {0.0, 0.0};
      for (std::size_t r = 0; r < n; ++r) {
        double v = d.cell(r, f);
        if (Dataset::is_missing(v))
          miss_w[d.label(r)] += weights[r];
        else
          cat_w[static_cast<std::size_t>(v) * 2 + d.label(r)] += weights[r];
      }
      // each category independently takes its weighted majority class,
      // which is the optimal subset for binary labels
      std::vector<std::uint8_t> subset(n_cat, 0);
      double err = 0.0;
      for (std::size_t c = 0; c < n_cat; ++c) {
        int cls = majority(cat_w[c * 2 + 0], cat_w[c * 2 + 1]);
        subset[c] = cls == 1 ? 1 : 0;
        err += cls == 1 ? cat_w[c * 2 + 0] : cat_w[c * 2 + 1];
      }
      int cls_miss = majority(miss_w[0], miss_w[1]);
      err += cls_miss == 1 ? miss_w[0] : miss_w[1];
      if (err < best.weighted_error) {
        best.feature = f;
        best.is_numeric = false;
        best.threshold = 0.0;
        best.in_subset = subset;
        best.class_a = 1;
        best.class_b = 0;
        best.weighted_error = err;
      }
    }
  }
  return best;
}

double BoostEnsemble::vote(const Dataset& d, std::size_t row) const {
  double v = 0.0;
  for (const auto& r : rounds)
    v += r.alpha * (r.stump.predict(d, row) == 1 ? 1.0 : -1.0);
  return v;
}

int BoostEnsemble::predict(const Dataset& d, std::size_t row) const {
  if (fallback) return fallback_prior_pos >= 0.5 ? 1 : 0;
  return vote(d, row) >= 0.0 ? 1 : 0;
}

BoostEnsemble adaboost_m1_train(const Dataset& d, int rounds) {
  if (rounds < 1) throw Error("adaboost: rounds must be >= 1");
  std::size_t n = d.n_rows();
  if (n == 0) throw Error("adaboost: empty training set");

  BoostEnsemble ensemble;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));

  for (int t = 0; t < rounds; ++t) {
    Stump stump = stump_train(d, w);
    double eps = stump.weighted_error;
    if (eps >= 0.5) {
      if (ensemble.rounds.empty()) {
        auto counts = d.class_counts();
        double prior = static_cast<double>(counts[1]) / static_cast<double>(n);
        ensemble.fallback = true;
        ensemble.fallback_prior_pos = std::clamp(prior, 1e-6, 1.0 - 1e-6);
        ensemble.warning = "first stump no better than chance; prior model";
      }
      break;
    }
    double eps_clamped = std::max(eps, 1e-12);
    double alpha = 0.5 * std::log((1.0 - eps_clamped) / eps_clamped);
    ensemble.rounds.push_back({std::move(stump), alpha, eps});

    if (eps < 1e-12) break;  // perfect stump, kept

    const Stump& h = ensemble.rounds.back().stump;
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      bool correct = h.predict(d, r) == d.label(r);
      w[r] *= std::exp(correct ? -alpha : alpha);
      sum += w[r];
    }
    for (double& v : w) v /= sum;
  }
  return ensemble;
}

double boost_exponential_error(const BoostEnsemble& e, const Dataset& d,
                               std::size_t rounds) {
  std::size_t n = d.n_rows();
  if (n == 0) throw Error("boost error: empty dataset");
  rounds = std::min(rounds, e.rounds.size());
  double sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double vote = 0.0;
    for (std::size_t t = 0; t < rounds; ++t)
      vote += e.rounds[t].alpha *
              (e.rounds[t].stump.predict(d, r) == 1 ? 1.0 : -1.0);
    double y = d.label(r) == 1 ? 1.0 : -1.0;
    sum += std::exp(-y * vote);
  }
  return sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// random forest

namespace {

struct TreeBuilder {
  const Dataset& d;
  const std::vector<std::size_t>& predictors;
  int mtry;
  std::size_t min_node;
  rng::Engine& eng;
  std::vector<TreeNode>& nodes;
  std::vector<std::uint8_t>& used;

  int build(std::vector<std::size_t>& rows) {
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t r : rows) (d.label(r) == 1 ? c1 : c0) += 1.0;

    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[id].leaf_class = majority(c0, c1);
    if (c0 == 0.0 || c1 == 0.0 || rows.size() < min_node) return id;

    // sample the feature subset for this node
    std::vector<std::size_t> pool = predictors;
    std::size_t take = std::min<std::size_t>(mtry, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::size_t j = i + rng::uniform_index(eng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }

    double parent = gini(c0, c1);
    double best_score = parent - 1e-12;
    std::size_t best_feature = 0;
    bool best_numeric = true;
    double best_threshold = 0.0;
    std::vector<std::uint8_t> best_subset;
    bool found = false;

    for (std::size_t fi = 0; fi < take; ++fi) {
      std::size_t f = pool[fi];
      if (d.attr(f).kind == AttrKind::Numeric) {
        std::vector<std::size_t> order = rows;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          double va = d.cell(a, f), vb = d.cell(b, f);
          if (Dataset::is_missing(va)) va = -kInf;
          if (Dataset::is_missing(vb)) vb = -kInf;
          return va < vb;
        });
        double a0 = 0.0, a1 = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
          (d.label(order[i]) == 1 ? a1 : a0) += 1.0;
          double v = d.cell(order[i], f);
          double vn = d.cell(order[i + 1], f);
          if (Dataset::is_missing(v) || Dataset::is_missing(vn) || v == vn)
            continue;
          double na = a0 + a1, nb = c0 + c1 - na;
          double score = (na * gini(a0, a1) + nb * gini(c0 - a0, c1 - a1)) /
                         (c0 + c1);
          if (score < best_score) {
            best_score = score;
            best_feature = f;
            best_numeric = true;
            best_threshold = 0.5 * (v + vn);
            best_subset.clear();
            found = true;
          }
        }
      } else {
        std::size_t n_cat = d.attr(f).categories.size();
        std::vector<double> cw(n_cat * 2, 0.0);
        for (std::size_t r : rows) {
          double v = d.cell(r, f);
          if (!Dataset::is_missing(v))
            cw[static_cast<std::size_t>(v) * 2 + d.label(r)] += 1.0;
        }
        std::vector<std::size_t> present;
        for (std::size_t c = 0; c < n_cat; ++c)
          if (cw[c * 2] + cw[c * 2 + 1] > 0.0) present.push_back(c);
        if (present.size() < 2) continue;
        std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
          double pa = cw[a * 2 + 1] / (cw[a * 2] + cw[a * 2 + 1]);
          double pb = cw[b * 2 + 1] / (cw[b * 2] + cw[b * 2 + 1]);
          if (pa != pb) return pa < pb;
          return a < b;
        });
        // prefix cuts of the positive-rate ordering are optimal for gini
        double a0 = 0.0, a1 = 0.0;
        std::vector<std::uint8_t> subset(n_cat, 0);
        for (std::size_t j = 0; j + 1 < present.size(); ++j) {
          a0 += cw[present[j] * 2];
          a1 += cw[present[j] * 2 + 1];
          subset[present[j]] = 1;
          double na = a0 + a1, nb = c0 + c1 - na;
          double score = (na * gini(a0, a1) + nb * gini(c0 - a0, c1 - a1)) /
                         (c0 + c1);
          if (score < best_score) {
            best_score = score;
            best_feature = f;
            best_numeric = false;
            best_subset = subset;
            found = true;
          }
        }
      }
    }

    if (!found) return id;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      double v = d.cell(r, best_feature);
      bool go_left;
      if (Dataset::is_missing(v))
        go_left = false;
      else if (best_numeric)
        go_left = v <= best_threshold;
      else
        go_left = best_subset[static_cast<std::size_t>(v)] != 0;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return id;

    used[best_feature] = 1;
    rows.clear();
    rows.shrink_to_fit();
    int left = build(left_rows);
    int right = build(right_rows);
    nodes[id].feature = static_cast<int>(best_feature);
    nodes[id].numeric_split = best_numeric;
    nodes[id].threshold = best_threshold;
    nodes[id].in_subset = std::move(best_subset);
    nodes[id].left = left;
    nodes[id].right = right;
    return id;
  }
};

int tree_walk(const std::vector<TreeNode>& nodes, const Dataset& d,
              std::size_t row, int override_feature, double override_value) {
  int id = 0;
  while (nodes[id].feature >= 0) {
    const TreeNode& node = nodes[id];
    double v = node.feature == override_feature ? override_value
                                                : d.cell(row, node.feature);
    bool go_left;
    if (Dataset::is_missing(v))
      go_left = false;
    else if (node.numeric_split)
      go_left = v <= node.threshold;
    else
      go_left = node.in_subset[static_cast<std::size_t>(v)] != 0;
    id = go_left ? node.left : node.right;
  }
  return nodes[id].leaf_class;
}

}  // namespace

int RandomTree::predict(const Dataset& d, std::size_t row) const {
  return tree_walk(nodes, d, row, -1, 0.0);
}

int RandomTree::predict_with_override(const Dataset& d, std::size_t row,
                                      std::size_t feature, double value) const {
  return tree_walk(nodes, d, row, static_cast<int>(feature), value);
}

Forest forest_train(const Dataset& d, const ForestConfig& cfg) {
  if (cfg.trees < 1) throw Error("forest: tree count must be >= 1");
  std::size_t n = d.n_rows();
  if (n == 0) throw Error("forest: empty training set");
  auto predictors = d.predictor_indices();
  if (predictors.empty()) throw Error("forest: dataset has no predictors");

  int mtry = cfg.features_per_split;
  if (mtry <= 0)
    mtry = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(predictors.size()))));

  Forest forest;
  forest.config = cfg;
  forest.config.features_per_split = mtry;
  forest.n_columns = d.n_attrs();

  for (int b = 0; b < cfg.trees; ++b) {
    auto eng = rng::make_engine(rng::derive(cfg.seed, static_cast<std::uint64_t>(b)));
    RandomTree tree;
    tree.bootstrap.reserve(n);
    std::vector<std::uint8_t> in_bag(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = rng::uniform_index(eng, n);
      tree.bootstrap.push_back(r);
      in_bag[r] = 1;
    }
    for (std::size_t r = 0; r < n; ++r)
      if (!in_bag[r]) tree.oob.push_back(r);

    tree.feature_used.assign(d.n_attrs(), 0);
    std::vector<std::size_t> rows = tree.bootstrap;
    TreeBuilder builder{d, predictors, mtry, cfg.min_node_size, eng,
                        tree.nodes, tree.feature_used};
    builder.build(rows);
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

double tree_permutation_importance(const RandomTree& tree, const Dataset& d,
                                   std::size_t feature,
                                   std::span<const std::size_t> permutation) {
  if (tree.feature_used[feature] == 0) return 0.0;
  if (tree.oob.empty()) return 0.0;
  if (permutation.size() != tree.oob.size())
    throw Error("importance: permutation length must match OOB size");

  std::size_t correct = 0, correct_perm = 0;
  for (std::size_t i = 0; i < tree.oob.size(); ++i) {
    std::size_t row = tree.oob[i];
    int truth = d.label(row);
    if (tree.predict(d, row) == truth) ++correct;
    double perm_value = d.cell(tree.oob[permutation[i]], feature);
    if (tree.predict_with_override(d, row, feature, perm_value) == truth)
      ++correct_perm;
  }
  double n = static_cast<double>(tree.oob.size());
  return (static_cast<double>(correct) - static_cast<double>(correct_perm)) / n;
}

std::vector<double> forest_importance(const Forest& forest, const Dataset& d,
                                      std::uint64_t seed) {
  std::size_t n_trees = forest.trees.size();
  if (n_trees < 2)
    throw Error("importance: need at least 2 trees for a standard error");
  std::size_t n_cols = d.n_attrs();

  std::vector<std::vector<double>> imp(n_cols, std::vector<double>(n_trees, 0.0));
  for (std::size_t b = 0; b < n_trees; ++b) {
    const RandomTree& tree = forest.trees[b];
    if (tree.oob.empty()) continue;
    for (std::size_t f = 0; f < n_cols; ++f) {
      if (tree.feature_used[f] == 0) continue;
      auto eng = rng::make_engine(rng::derive(seed, b * n_cols + f));
      auto perm = rng::permutation(tree.oob.size(), eng);
      imp[f][b] = tree_permutation_importance(tree, d, f, perm);
    }
  }

  std::vector<double> z(n_cols, 0.0);
  for (std::size_t f = 0; f < n_cols; ++f) {
    double mean = std::accumulate(imp[f].begin(), imp[f].end(), 0.0) /
                  static_cast<double>(n_trees);
    double ss = 0.0;
    for (double v : imp[f]) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(n_trees - 1));
    if (sd == 0.0) {
      z[f] = mean == 0.0 ? 0.0 : (mean > 0 ? kInf : -kInf);
    } else {
      z[f] = mean / (sd / std::sqrt(static_cast<double>(n_trees)));
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Hoeffding tree

double hoeffding_bound(double range, double delta, std::size_t n) {
  if (range <= 0.0) throw Error("hoeffding bound: range must be > 0");
  if (delta <= 0.0 || delta > 1.0)
    throw Error("hoeffding bound: delta must be in (0, 1]");
  if (n < 1) throw Error("hoeffding bound: n must be >= 1");
  return std::sqrt(range * range * std::log(1.0 / delta) /
                   (2.0 * static_cast<double>(n)));
}

HoeffdingTree::HoeffdingTree(std::vector<AttributeSpec> schema, VfdtConfig cfg)
    : attrs_(std::move(schema)), cfg_(cfg) {
  bool has_class = false;
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    if (attrs_[i].role == AttrRole::ClassLabel) {
      class_index_ = i;
      has_class = true;
    } else if (attrs_[i].role == AttrRole::Predictor) {
      predictors_.push_back(i);
    }
  }
  if (!has_class) throw SchemaError("hoeffding tree: schema lacks a class attribute");
  if (cfg_.bins < 2) throw Error("hoeffding tree: bins must be >= 2");
  nodes_.emplace_back();
  nodes_.front().used_nominal.assign(attrs_.size(), 0);
}

HoeffdingTree::HoeffdingTree(const Dataset& schema_source, VfdtConfig cfg)
    : HoeffdingTree(schema_source.attributes(), cfg) {}

int HoeffdingTree::route_child(const Node& node, std::span<const double> row) const {
  double v = row[static_cast<std::size_t>(node.split_attr)];
  if (node.numeric_split) {
    if (Dataset::is_missing(v)) return node.children[0];
    return v <= node.threshold ? node.children[0] : node.children[1];
  }
  if (Dataset::is_missing(v)) return node.children[0];
  return node.children[static_cast<std::size_t>(v)];
}

void HoeffdingTree::update(std::span<const double> row, int label) {
  if (row.size() != attrs_.size())
    throw SchemaError("hoeffding tree: row width mismatch");
  if (label != 0 && label != 1)
    throw SchemaError("hoeffding tree: label must be 0 or 1");

  std::uint32_t id = static_cast<std::uint32_t>(instance_rows_.size());
  instance_rows_.emplace_back(row.begin(), row.end());
  instance_labels_.push_back(label);

  int node_id = 0;
  while (nodes_[node_id].split_attr >= 0)
    node_id = route_child(nodes_[node_id], row);

  Node& leaf = nodes_[node_id];
  leaf.instance_ids.push_back(id);
  ++leaf.counts[static_cast<std::size_t>(label)];

  if (leaf.instance_ids.size() - leaf.last_check >= cfg_.grace) {
    nodes_[node_id].last_check = nodes_[node_id].instance_ids.size();
    try_split(node_id);
  }
}

void HoeffdingTree::update_row(const Dataset& d, std::size_t row) {
  std::vector<double> values(d.n_attrs());
  for (std::size_t c = 0; c < d.n_attrs(); ++c) values[c] = d.cell(row, c);
  update(values, d.label(row));
}

double HoeffdingTree::best_gain(const Node& node, std::size_t attr,
                                double& threshold) const {
  const auto& spec = attrs_[attr];
  double parent_h = entropy_bits(static_cast<double>(node.counts[0]),
                                 static_cast<double>(node.counts[1]));
  double n = static_cast<double>(node.instance_ids.size());
  threshold = 0.0;

  if (spec.kind == AttrKind::Nominal) {
    std::size_t n_cat = spec.categories.size();
    std::vector<double> cw(n_cat * 2, 0.0);
    for (std::uint32_t id : node.instance_ids) {
      double v = instance_rows_[id][attr];
      if (Dataset::is_missing(v)) continue;
      cw[static_cast<std::size_t>(v) * 2 + instance_labels_[id]] += 1.0;
    }
    double h_after = 0.0;
    for (std::size_t c = 0; c < n_cat; ++c) {
      double nc = cw[c * 2] + cw[c * 2 + 1];
      if (nc > 0.0) h_after += (nc / n) * entropy_bits(cw[c * 2], cw[c * 2 + 1]);
    }
    return parent_h - h_after;
  }

  // numeric: equal-width bins over the observed range, cuts at bin edges
  double lo = kInf, hi = -kInf;
  for (std::uint32_t id : node.instance_ids) {
    double v = instance_rows_[id][attr];
    if (Dataset::is_missing(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return 0.0;

  std::size_t n_bins = static_cast<std::size_t>(cfg_.bins);
  std::vector<double> bins(n_bins * 2, 0.0);
  double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::uint32_t id : node.instance_ids) {
    double v = instance_rows_[id][attr];
    if (Dataset::is_missing(v)) continue;
    std::size_t b = std::min(
        n_bins - 1, static_cast<std::size_t>((v - lo) / width));
    bins[b * 2 + instance_labels_[id]] += 1.0;
  }

  double best = 0.0;
  double a0 = 0.0, a1 = 0.0;
  double t0 = static_cast<double>(node.counts[0]);
  double t1 = static_cast<double>(node.counts[1]);
  for (std::size_t b = 0; b + 1 < n_bins; ++b) {
    a0 += bins[b * 2];
    a1 += bins[b * 2 + 1];
    double na = a0 + a1, nb = n - na;
    if (na == 0.0 || nb == 0.0) continue;
    double h_after = (na / n) * entropy_bits(a0, a1) +
                     (nb / n) * entropy_bits(t0 - a0, t1 - a1);
    double gain = parent_h - h_after;
    if (gain > best) {
      best = gain;
      threshold = lo + width * static_cast<double>(b + 1);
    }
  }
  return best;
}

void HoeffdingTree::try_split(int node_id) {
  Node& node = nodes_[node_id];
  std::size_t n = node.instance_ids.size();
  if (n == 0 || node.counts[0] == 0 || node.counts[1] == 0) return;

  double best_g = 0.0, second_g = 0.0, best_thr = 0.0;
  std::size_t best_attr = 0;
  bool have_best = false;
  for (std::size_t attr : predictors_) {
    if (attrs_[attr].kind == AttrKind::Nominal && node.used_nominal[attr])
      continue;
    double thr;
    double g = best_gain(node, attr, thr);
    if (!have_best || g > best_g) {
      second_g = have_best ? best_g : 0.0;
      best_g = g;
      best_thr = thr;
      best_attr = attr;
      have_best = true;
    } else if (g > second_g) {
      second_g = g;
    }
  }
  if (!have_best || best_g <= 0.0) return;

  double eps = hoeffding_bound(std::log2(2.0), cfg_.delta, n);
  if (!(best_g - second_g > eps || eps < cfg_.tau)) return;

  // materialize the split and replay the buffered instances
  bool numeric = attrs_[best_attr].kind == AttrKind::Numeric;
  std::size_t n_children =
      numeric ? 2 : attrs_[best_attr].categories.size();

  std::vector<std::uint32_t> buffered = std::move(node.instance_ids);
  std::vector<std::uint8_t> used = node.used_nominal;
  if (!numeric) used[best_attr] = 1;

  std::vector<int> children;
  for (std::size_t c = 0; c < n_children; ++c) {
    children.push_back(static_cast<int>(nodes_.size()));
    nodes_.emplace_back();
    nodes_.back().used_nominal = used;
  }
  // re-acquire after potential reallocation
  Node& parent = nodes_[node_id];
  parent.split_attr = static_cast<int>(best_attr);
  parent.numeric_split = numeric;
  parent.threshold = best_thr;
  parent.children = std::move(children);
  parent.instance_ids.clear();
  parent.counts = {0, 0};
  parent.last_check = 0;

  for (std::uint32_t id : buffered) {
    int child = route_child(parent, instance_rows_[id]);
    nodes_[child].instance_ids.push_back(id);
    ++nodes_[child].counts[static_cast<std::size_t>(instance_labels_[id])];
  }
}

ProbPair HoeffdingTree::predict(std::span<const double> row) const {
  if (row.size() != attrs_.size())
    throw SchemaError("hoeffding tree: row width mismatch");
  int node_id = 0;
  while (nodes_[node_id].split_attr >= 0)
    node_id = route_child(nodes_[node_id], row);
  const Node& leaf = nodes_[node_id];
  double n = static_cast<double>(leaf.counts[0] + leaf.counts[1]);
  double pos = (static_cast<double>(leaf.counts[1]) + 1.0) / (n + 2.0);
  return {1.0 - pos, pos};
}

ProbPair HoeffdingTree::predict_row(const Dataset& d, std::size_t row) const {
  std::vector<double> values(d.n_attrs());
  for (std::size_t c = 0; c < d.n_attrs(); ++c) values[c] = d.cell(row, c);
  return predict(values);
}

std::array<std::uint64_t, 2> HoeffdingTree::leaf_class_totals() const {
  std::array<std::uint64_t, 2> totals{0, 0};
  for (const auto& node : nodes_) {
    if (node.split_attr < 0) {
      totals[0] += node.counts[0];
      totals[1] += node.counts[1];
    }
  }
  return totals;
}

// ---------------------------------------------------------------------------

ProbPair predict_distribution(const BoostEnsemble& m, const Dataset& d,
                              std::size_t row) {
  if (m.fallback) return {1.0 - m.fallback_prior_pos, m.fallback_prior_pos};
  double p = sigmoid(m.vote(d, row));
  return {1.0 - p, p};
}

ProbPair predict_distribution(const Forest& m, const Dataset& d, std::size_t row) {
  if (m.trees.empty()) return {0.5, 0.5};
  std::size_t votes = 0;
  for (const auto& tree : m.trees) votes += tree.predict(d, row) == 1 ? 1 : 0;
  double p = static_cast<double>(votes) / static_cast<double>(m.trees.size());
  return {1.0 - p, p};
}

ProbPair predict_distribution(const HoeffdingTree& m, const Dataset& d,
                              std::size_t row) {
  return m.predict_row(d, row);
}

}  // namespace meso
