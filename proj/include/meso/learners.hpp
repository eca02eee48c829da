#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/harness.hpp"

namespace meso {

/// Majority-class baseline standing in for the paper-table wrapper rows:
/// always predicts the training majority and reports the training prior as
/// its distribution.
struct ZeroRuleModel {
  int majority = 1;
  double prior_pos = 0.5;  // clamped to (1e-6, 1 - 1e-6)
};

ZeroRuleModel zero_rule_train(const Dataset& d);

/// Feature transform fitted on training folds only: one-hot expansion of
/// nominal predictors followed by the stored standardization.
struct EncodedPipeline {
  struct Scale {
    double mean = 0.0;
    double sd = 1.0;
    bool on = false;
  };
  std::vector<Scale> scales;  // aligned with the encoded feature order

  /// Encodes one raw row into the scaled feature vector. Missing numeric
  /// cells map to the column mean (zero after scaling).
  std::vector<double> encode(const Dataset& d, std::size_t row) const;
};

/// Fits the pipeline on a training dataset and returns it with the encoded
/// + scaled dataset the model should train on.
std::pair<EncodedPipeline, Dataset> fit_pipeline(const Dataset& train);

/// Canonical model roster, in paper-table column order.
const std::vector<std::string>& model_roster();

/// Builds a named learner ("sgd", "adaboost", "klr", "mlp", "vp", "vfdt",
/// "zero_rule", "pegasos"). params carries dotted overrides such as
/// "sgd.loss=logistic" or "adaboost.rounds=25".
std::unique_ptr<Learner> make_learner(const std::string& name,
                                      const std::map<std::string, std::string>& params,
                                      std::uint64_t seed);

}  // namespace meso
