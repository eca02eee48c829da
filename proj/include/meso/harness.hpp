#pragma once

#include <memory>
#include <string>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/metrics.hpp"

namespace meso {

/// Probabilities for (class index 0, class index 1); sums to 1.
struct ProbPair {
  double neg = 0.5;
  double pos = 0.5;
  /// Predicted class index; the tie at 0.5 resolves to class 1.
  int argmax() const { return pos >= neg ? 1 : 0; }
};

/// A trained model able to score raw (unencoded) rows of a dataset that
/// shares the training schema. Implementations are immutable after fit and
/// safe for concurrent prediction.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual ProbPair predict_row(const Dataset& d, std::size_t row) const = 0;
};

/// Pluggable learner: fit consumes a training dataset and returns a
/// trained classifier. Any per-fold preprocessing (encoding, scaling)
/// happens inside fit so held-out rows never leak into fitted statistics.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Classifier> fit(const Dataset& train) const = 0;
};

/// Held-out predictions of one fold.
struct FoldOutcome {
  std::size_t fold = 0;
  std::vector<std::size_t> rows;   // global row indices of the test fold
  std::vector<double> scores;      // P(declared positive) per row
  std::vector<int> truths;         // 1 if row's label == positive
  std::vector<int> predicted;      // 1 if predicted label == positive
  double accuracy = 0.0;
};

/// Trains on all folds but `fold` and scores the held-out rows.
FoldOutcome evaluate_fold(const Learner& learner, const Dataset& d,
                          const FoldPlan& plan, std::size_t fold, int positive);

/// One row of the comparison table. Confusion metrics and RMSE are pooled
/// over all held-out predictions; ROC/PRC areas are per-fold means (scores
/// from different fold models are not rank-comparable). The per-fold
/// accuracy vector feeds the t-test.
struct EvalReport {
  std::string model;
  double accuracy = 0.0;
  double f_measure = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double roc_auc = 0.0;
  double prc_auc = 0.0;
  double rmse = 0.0;
  std::vector<double> fold_accuracies;
  std::uint64_t plan_seed = 0;
};

/// Pools fold outcomes (ordered by global row index) into one report.
EvalReport assemble_report(const std::string& model, const FoldPlan& plan,
                           std::vector<FoldOutcome> outcomes);

/// Full k-fold cross-validation of one learner; metrics are computed over
/// the pooled held-out predictions with respect to `positive` (a class
/// index of d).
EvalReport cross_validate(const Learner& learner, const Dataset& d,
                          const FoldPlan& plan, int positive);

}  // namespace meso
