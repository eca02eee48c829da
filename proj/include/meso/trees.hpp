#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/harness.hpp"

namespace meso {

/// One-split classifier. Numeric: side A is cell <= threshold. Nominal:
/// side A is the recorded category subset. Each side carries its own
/// class; the weighted training error is recorded at fit time.
struct Stump {
  std::size_t feature = 0;
  bool is_numeric = true;
  double threshold = 0.0;
  std::vector<std::uint8_t> in_subset;  // nominal, indexed by category
  int class_a = 1;
  int class_b = 0;
  double weighted_error = 0.0;

  int predict(const Dataset& d, std::size_t row) const;
};

/// Exhaustive weighted 0-1 error minimization over every (feature,
/// threshold/subset) candidate. Ties go to the lowest feature index, then
/// the lowest threshold.
Stump stump_train(const Dataset& d, std::span<const double> weights);

struct BoostEnsemble {
  struct Round {
    Stump stump;
    double alpha = 0.0;
    double error = 0.0;
  };
  std::vector<Round> rounds;
  bool fallback = false;  // first stump was no better than chance
  double fallback_prior_pos = 0.5;
  std::string warning;

  /// Signed weighted vote sum(alpha_t * h_t), h_t in {-1, +1}.
  double vote(const Dataset& d, std::size_t row) const;
  int predict(const Dataset& d, std::size_t row) const;
};

/// AdaBoost.M1 over decision stumps: stops early on a perfect stump (kept)
/// or one with error >= 0.5 (discarded); otherwise reweights misclassified
/// rows up, correct rows down, and renormalizes each round.
BoostEnsemble adaboost_m1_train(const Dataset& d, int rounds);

/// Mean exponential error of the first `rounds` rounds of the ensemble —
/// the error functional the boosting loop minimizes stage by stage. Unlike
/// the 0-1 error it decreases every retained round.
double boost_exponential_error(const BoostEnsemble& e, const Dataset& d,
                               std::size_t rounds);

struct ForestConfig {
  int trees = 100;
  int features_per_split = 0;  // <= 0 means ceil(sqrt(p))
  std::uint64_t seed = 0;
  std::size_t min_node_size = 2;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  bool numeric_split = true;
  double threshold = 0.0;
  std::vector<std::uint8_t> in_subset;
  int left = -1;
  int right = -1;
  int leaf_class = 1;
};

struct RandomTree {
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> bootstrap;       // sampled row ids, with repeats
  std::vector<std::size_t> oob;             // rows absent from the bootstrap
  std::vector<std::uint8_t> feature_used;   // per dataset column

  int predict(const Dataset& d, std::size_t row) const;
  /// Prediction with one feature's value replaced (permutation importance).
  int predict_with_override(const Dataset& d, std::size_t row,
                            std::size_t feature, double value) const;
};

struct Forest {
  std::vector<RandomTree> trees;
  ForestConfig config;
  std::size_t n_columns = 0;
};

/// Bagged, feature-subsampled trees grown to purity (or the minimum node
/// size) on gini impurity.
Forest forest_train(const Dataset& d, const ForestConfig& cfg);

/// OOB accuracy drop of one tree when `feature`'s values are shuffled
/// among its OOB rows by the given permutation (a permutation of
/// positions into the tree's oob list). Returns 0 for features the tree
/// never splits on.
double tree_permutation_importance(const RandomTree& tree, const Dataset& d,
                                   std::size_t feature,
                                   std::span<const std::size_t> permutation);

/// Per-column Z-score of the permutation importances across trees
/// (mean / standard error). Columns no tree uses score 0. Requires at
/// least 2 trees.
std::vector<double> forest_importance(const Forest& forest, const Dataset& d,
                                      std::uint64_t seed);

/// Hoeffding confidence radius sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double delta, std::size_t n);

struct VfdtConfig {
  double delta = 1e-7;
  double tau = 0.05;
  std::size_t grace = 200;  // instances between split evaluations
  int bins = 10;            // equal-width bins per numeric attribute
};

/// Incremental decision tree: leaves accumulate class statistics and split
/// once the information-gain lead of the best attribute clears the
/// Hoeffding bound (or the bound falls below the tie threshold).
class HoeffdingTree {
 public:
  HoeffdingTree(std::vector<AttributeSpec> schema, VfdtConfig cfg = {});
  explicit HoeffdingTree(const Dataset& schema_source, VfdtConfig cfg = {});

  /// Routes one full-width row (class cell ignored) with its label.
  void update(std::span<const double> row, int label);
  void update_row(const Dataset& d, std::size_t row);

  /// Laplace-smoothed leaf class frequencies.
  ProbPair predict(std::span<const double> row) const;
  ProbPair predict_row(const Dataset& d, std::size_t row) const;

  std::size_t instances_observed() const { return instance_labels_.size(); }
  std::array<std::uint64_t, 2> leaf_class_totals() const;
  std::size_t n_nodes() const { return nodes_.size(); }
  /// Attribute the root splits on, or -1 while the root is a leaf.
  int root_split_attr() const { return nodes_.front().split_attr; }
  const VfdtConfig& config() const { return cfg_; }

 private:
  struct Node {
    int split_attr = -1;
    bool numeric_split = false;
    double threshold = 0.0;
    std::vector<int> children;
    std::vector<std::uint32_t> instance_ids;  // buffered rows while a leaf
    std::array<std::uint64_t, 2> counts{0, 0};
    std::size_t last_check = 0;
    std::vector<std::uint8_t> used_nominal;  // split on the path above
  };

  std::vector<AttributeSpec> attrs_;
  std::size_t class_index_ = 0;
  std::vector<std::size_t> predictors_;
  VfdtConfig cfg_;
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> instance_rows_;
  std::vector<int> instance_labels_;

  int route_child(const Node& node, std::span<const double> row) const;
  void try_split(int node_id);
  double best_gain(const Node& node, std::size_t attr, double& threshold) const;
};

// Uniform prediction contract for the tree family.
ProbPair predict_distribution(const BoostEnsemble& m, const Dataset& d,
                              std::size_t row);
ProbPair predict_distribution(const Forest& m, const Dataset& d, std::size_t row);
ProbPair predict_distribution(const HoeffdingTree& m, const Dataset& d,
                              std::size_t row);

}  // namespace meso
