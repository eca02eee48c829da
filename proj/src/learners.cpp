#include "meso/learners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "meso/error.hpp"
#include "meso/linear.hpp"
#include "meso/mlp.hpp"
#include "meso/rng.hpp"
#include "meso/trees.hpp"

namespace meso {

namespace {

double get_double(const std::map<std::string, std::string>& params,
                  const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw Error("bad numeric value for " + key + ": '" + it->second + "'");
  }
}

long get_long(const std::map<std::string, std::string>& params,
              const std::string& key, long fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stol(it->second);
  } catch (...) {
    throw Error("bad integer value for " + key + ": '" + it->second + "'");
  }
}

std::string get_string(const std::map<std::string, std::string>& params,
                       const std::string& key, const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

class ZeroRuleClassifier : public Classifier {
 public:
  explicit ZeroRuleClassifier(ZeroRuleModel m) : model_(m) {}
  ProbPair predict_row(const Dataset&, std::size_t) const override {
    return {1.0 - model_.prior_pos, model_.prior_pos};
  }

 private:
  ZeroRuleModel model_;
};

class ZeroRuleLearner : public Learner {
 public:
  std::string name() const override { return "zero_rule"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    return std::make_unique<ZeroRuleClassifier>(zero_rule_train(train));
  }
};

template <typename Model>
class EncodedClassifier : public Classifier {
 public:
  EncodedClassifier(EncodedPipeline pipeline, Model model)
      : pipeline_(std::move(pipeline)), model_(std::move(model)) {}
  ProbPair predict_row(const Dataset& d, std::size_t row) const override {
    return predict_distribution(model_, pipeline_.encode(d, row));
  }

 private:
  EncodedPipeline pipeline_;
  Model model_;
};

class SgdLearner : public Learner {
 public:
  SgdLearner(SgdConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "sgd"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto [pipeline, encoded] = fit_pipeline(train);
    return std::make_unique<EncodedClassifier<LinearModel>>(
        std::move(pipeline), sgd_train(encoded, cfg_));
  }

 private:
  SgdConfig cfg_;
};

class PegasosLearner : public Learner {
 public:
  PegasosLearner(PegasosConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "pegasos"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto [pipeline, encoded] = fit_pipeline(train);
    return std::make_unique<EncodedClassifier<LinearModel>>(
        std::move(pipeline), pegasos_train(encoded, cfg_));
  }

 private:
  PegasosConfig cfg_;
};

class VotedPerceptronLearner : public Learner {
 public:
  VotedPerceptronLearner(VotedPerceptronConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "vp"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto [pipeline, encoded] = fit_pipeline(train);
    return std::make_unique<EncodedClassifier<VotedPerceptronModel>>(
        std::move(pipeline), voted_perceptron_train(encoded, cfg_));
  }

 private:
  VotedPerceptronConfig cfg_;
};

class KlrLearner : public Learner {
 public:
  KlrLearner(KlrConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "klr"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto [pipeline, encoded] = fit_pipeline(train);
    return std::make_unique<EncodedClassifier<KernelModel>>(
        std::move(pipeline), klr_train(encoded, cfg_));
  }

 private:
  KlrConfig cfg_;
};

class MlpLearner : public Learner {
 public:
  MlpLearner(MlpTrainConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "mlp"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto [pipeline, encoded] = fit_pipeline(train);
    return std::make_unique<EncodedClassifier<MlpModel>>(
        std::move(pipeline), mlp_train(encoded, cfg_));
  }

 private:
  MlpTrainConfig cfg_;
};

class AdaBoostClassifier : public Classifier {
 public:
  explicit AdaBoostClassifier(BoostEnsemble e) : ensemble_(std::move(e)) {}
  ProbPair predict_row(const Dataset& d, std::size_t row) const override {
    return predict_distribution(ensemble_, d, row);
  }

 private:
  BoostEnsemble ensemble_;
};

class AdaBoostLearner : public Learner {
 public:
  explicit AdaBoostLearner(int rounds) : rounds_(rounds) {}
  std::string name() const override { return "adaboost"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    return std::make_unique<AdaBoostClassifier>(adaboost_m1_train(train, rounds_));
  }

 private:
  int rounds_;
};

class VfdtClassifier : public Classifier {
 public:
  explicit VfdtClassifier(std::unique_ptr<HoeffdingTree> tree)
      : tree_(std::move(tree)) {}
  ProbPair predict_row(const Dataset& d, std::size_t row) const override {
    return tree_->predict_row(d, row);
  }

 private:
  std::unique_ptr<HoeffdingTree> tree_;
};

class VfdtLearner : public Learner {
 public:
  explicit VfdtLearner(VfdtConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "vfdt"; }
  std::unique_ptr<Classifier> fit(const Dataset& train) const override {
    auto tree = std::make_unique<HoeffdingTree>(train, cfg_);
    for (std::size_t r = 0; r < train.n_rows(); ++r) tree->update_row(train, r);
    return std::make_unique<VfdtClassifier>(std::move(tree));
  }

 private:
  VfdtConfig cfg_;
};

}  // namespace

ZeroRuleModel zero_rule_train(const Dataset& d) {
  if (d.n_rows() == 0) throw Error("zero rule: empty training set");
  auto counts = d.class_counts();
  ZeroRuleModel m;
  m.majority = d.majority_label();
  double prior = static_cast<double>(counts[1]) / static_cast<double>(d.n_rows());
  m.prior_pos = std::clamp(prior, 1e-6, 1.0 - 1e-6);
  return m;
}

std::vector<double> EncodedPipeline::encode(const Dataset& d,
                                            std::size_t row) const {
  std::vector<double> x;
  x.reserve(scales.size());
  for (std::size_t c = 0; c < d.n_attrs(); ++c) {
    const auto& a = d.attr(c);
    if (a.role != AttrRole::Predictor) continue;
    if (a.kind == AttrKind::Numeric) {
      x.push_back(d.cell(row, c));
    } else {
      double v = d.cell(row, c);
      for (std::size_t k = 0; k < a.categories.size(); ++k)
        x.push_back(!Dataset::is_missing(v) &&
                            static_cast<std::size_t>(v) == k
                        ? 1.0
                        : 0.0);
    }
  }
  if (x.size() != scales.size())
    throw SchemaError("pipeline: row encodes to unexpected width");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scale& s = scales[i];
    if (std::isnan(x[i])) x[i] = s.mean;
    if (s.on) x[i] = (x[i] - s.mean) / s.sd;
  }
  return x;
}

std::pair<EncodedPipeline, Dataset> fit_pipeline(const Dataset& train) {
  Dataset encoded = one_hot_encode(train);
  auto [scaled, params] = standardize(encoded);

  EncodedPipeline pipeline;
  auto predictors = encoded.predictor_indices();
  pipeline.scales.resize(predictors.size());
  for (const auto& cs : params.columns) {
    auto it = std::find(predictors.begin(), predictors.end(), cs.column);
    if (it == predictors.end()) continue;
    auto& s = pipeline.scales[static_cast<std::size_t>(it - predictors.begin())];
    s.mean = cs.mean;
    s.sd = cs.sd;
    s.on = cs.scaled;
  }
  return {std::move(pipeline), std::move(scaled)};
}

const std::vector<std::string>& model_roster() {
  static const std::vector<std::string> roster = {
      "sgd", "adaboost", "klr", "mlp", "vp", "vfdt", "zero_rule", "pegasos"};
  return roster;
}

std::unique_ptr<Learner> make_learner(
    const std::string& name, const std::map<std::string, std::string>& params,
    std::uint64_t seed) {
  const auto& roster = model_roster();
  auto pos = std::find(roster.begin(), roster.end(), name);
  if (pos == roster.end()) throw Error("unknown model '" + name + "'");
  std::uint64_t model_seed =
      rng::derive(seed, static_cast<std::uint64_t>(pos - roster.begin()) + 17);

  if (name == "sgd") {
    SgdConfig cfg;
    std::string loss = get_string(params, "sgd.loss", "hinge");
    if (loss == "hinge") cfg.loss = LossKind::Hinge;
    else if (loss == "logistic") cfg.loss = LossKind::Logistic;
    else throw Error("sgd.loss must be hinge or logistic");
    cfg.learning_rate = get_double(params, "sgd.learning_rate", 0.01);
    cfg.lambda = get_double(params, "sgd.lambda", 1e-4);
    cfg.epochs = static_cast<int>(get_long(params, "sgd.epochs", 500));
    cfg.seed = model_seed;
    return std::make_unique<SgdLearner>(cfg);
  }
  if (name == "pegasos") {
    PegasosConfig cfg;
    cfg.lambda = get_double(params, "pegasos.lambda", 1e-4);
    cfg.iterations = get_long(params, "pegasos.iterations", 100000);
    cfg.seed = model_seed;
    return std::make_unique<PegasosLearner>(cfg);
  }
  if (name == "vp") {
    VotedPerceptronConfig cfg;
    cfg.epochs = static_cast<int>(get_long(params, "vp.epochs", 10));
    cfg.seed = model_seed;
    return std::make_unique<VotedPerceptronLearner>(cfg);
  }
  if (name == "klr") {
    KlrConfig cfg;
    std::string kind = get_string(params, "klr.kernel", "rbf");
    if (kind == "rbf") cfg.kernel.kind = KernelSpec::Kind::Rbf;
    else if (kind == "linear") cfg.kernel.kind = KernelSpec::Kind::Linear;
    else if (kind == "poly") cfg.kernel.kind = KernelSpec::Kind::Polynomial;
    else throw Error("klr.kernel must be rbf, linear, or poly");
    cfg.kernel.gamma = get_double(params, "klr.gamma", 0.0);  // 0 = 1/p
    cfg.kernel.degree = static_cast<int>(get_long(params, "klr.degree", 2));
    cfg.kernel.coef0 = get_double(params, "klr.coef0", 1.0);
    cfg.lambda = get_double(params, "klr.lambda", 1e-6);
    cfg.max_iterations = static_cast<int>(get_long(params, "klr.max_iterations", 100));
    cfg.tolerance = get_double(params, "klr.tolerance", 1e-8);
    return std::make_unique<KlrLearner>(cfg);
  }
  if (name == "mlp") {
    MlpTrainConfig cfg;
    cfg.learning_rate = get_double(params, "mlp.learning_rate", 0.3);
    cfg.momentum = get_double(params, "mlp.momentum", 0.2);
    cfg.epochs = static_cast<int>(get_long(params, "mlp.epochs", 500));
    std::string act = get_string(params, "mlp.activation", "sigmoid");
    if (act == "sigmoid") cfg.activation = Activation::Sigmoid;
    else if (act == "tanh") cfg.activation = Activation::Tanh;
    else if (act == "relu") cfg.activation = Activation::Relu;
    else throw Error("mlp.activation must be sigmoid, tanh, or relu");
    std::string hidden = get_string(params, "mlp.hidden", "");
    if (!hidden.empty()) {
      std::size_t pos2 = 0;
      while (pos2 < hidden.size()) {
        std::size_t comma = hidden.find(',', pos2);
        if (comma == std::string::npos) comma = hidden.size();
        cfg.hidden.push_back(std::stoul(hidden.substr(pos2, comma - pos2)));
        pos2 = comma + 1;
      }
    }
    cfg.seed = model_seed;
    return std::make_unique<MlpLearner>(cfg);
  }
  if (name == "adaboost") {
    int rounds = static_cast<int>(get_long(params, "adaboost.rounds", 50));
    return std::make_unique<AdaBoostLearner>(rounds);
  }
  if (name == "vfdt") {
    VfdtConfig cfg;
    cfg.delta = get_double(params, "vfdt.delta", 1e-7);
    cfg.tau = get_double(params, "vfdt.tau", 0.05);
    cfg.grace = static_cast<std::size_t>(get_long(params, "vfdt.grace", 200));
    cfg.bins = static_cast<int>(get_long(params, "vfdt.bins", 10));
    return std::make_unique<VfdtLearner>(cfg);
  }
  return std::make_unique<ZeroRuleLearner>();
}

}  // namespace meso
