#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/harness.hpp"

namespace meso {

enum class LossKind { Hinge, Logistic };

/// Linear decision function over an encoded (all-numeric) feature vector.
/// Labels are encoded -1 (class index 0) / +1 (class index 1).
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  LossKind loss = LossKind::Hinge;
  /// Final value of the primal objective, recorded by pegasos_train.
  double final_objective = std::numeric_limits<double>::quiet_NaN();

  double margin(std::span<const double> x) const;
};

struct SgdConfig {
  LossKind loss = LossKind::Hinge;
  double learning_rate = 0.01;  // gamma_0 of the decaying schedule
  double lambda = 1e-4;         // L2 coefficient
  int epochs = 500;
  std::uint64_t seed = 0;
};

/// Single-example stochastic gradient descent on the regularized loss,
/// step size gamma_0 / (1 + gamma_0 * lambda * t), visiting each row once
/// per epoch in a fresh seeded order. Throws DivergenceError (naming the
/// epoch) if parameters become non-finite.
LinearModel sgd_train(const Dataset& d, const SgdConfig& cfg);

struct PegasosConfig {
  double lambda = 1e-4;
  long iterations = 100000;
  std::uint64_t seed = 0;
};

/// Primal sub-gradient SVM solver: at iteration t a random example drives
/// a hinge sub-gradient step with step size 1/(lambda*t). No projection.
LinearModel pegasos_train(const Dataset& d, const PegasosConfig& cfg);

/// lambda/2 ||w||^2 + mean hinge loss of the encoded dataset.
double svm_objective(const Dataset& d, std::span<const double> weights,
                     double lambda);

struct VotedPerceptronConfig {
  int epochs = 10;
  std::uint64_t seed = 0;
};

/// Mistake-driven perceptron history: every weight vector together with
/// the number of rounds it survived.
struct VotedPerceptronModel {
  struct Entry {
    std::vector<double> weights;
    long survival = 1;
  };
  std::vector<Entry> entries;
  std::vector<long> mistakes_per_epoch;

  /// Survival-weighted vote sum over sign(w_p . x); sign(0) counts as +1.
  double vote(std::span<const double> x) const;
};

VotedPerceptronModel voted_perceptron_train(const Dataset& d,
                                            const VotedPerceptronConfig& cfg);

struct KernelSpec {
  enum class Kind { Linear, Polynomial, Rbf };
  Kind kind = Kind::Rbf;
  int degree = 2;      // polynomial
  double coef0 = 1.0;  // polynomial
  double gamma = 1.0;  // rbf
};

/// linear: x.y; polynomial: (x.y + coef0)^degree; rbf: exp(-gamma |x-y|^2).
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

struct KlrConfig {
  KernelSpec kernel;      // gamma <= 0 means "use 1/p"
  double lambda = 1e-6;
  int max_iterations = 100;
  double tolerance = 1e-8;
};

/// Kernel logistic regression model: f(x) = sum_i alpha_i K(x_i, x) + b.
struct KernelModel {
  std::vector<std::vector<double>> support;  // retained training instances
  std::vector<double> alpha;
  double bias = 0.0;
  KernelSpec kernel;
  double lambda = 0.0;

  double decision(std::span<const double> x) const;
};

/// Minimizes lambda ||f||^2 + mean logistic loss by iteratively reweighted
/// least squares; singular systems get one ridge-stabilized retry.
KernelModel klr_train(const Dataset& d, const KlrConfig& cfg);

// Uniform prediction contract: (P(class 0), P(class 1)), summing to 1.
ProbPair predict_distribution(const LinearModel& m, std::span<const double> x);
ProbPair predict_distribution(const VotedPerceptronModel& m,
                              std::span<const double> x);
ProbPair predict_distribution(const KernelModel& m, std::span<const double> x);

/// Extracts the numeric predictor values of a row, in predictor order.
/// Throws SchemaError if any predictor is nominal.
std::vector<double> feature_vector(const Dataset& d, std::size_t row);

}  // namespace meso
