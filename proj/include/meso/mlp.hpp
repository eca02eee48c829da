#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/harness.hpp"

namespace meso {

enum class Activation { Sigmoid, Tanh, Relu };

/// Feed-forward network: weighted sums plus a hidden activation per layer,
/// ending in a 2-unit softmax. weights[l] is (sizes[l+1] x sizes[l]),
/// row-major; biases[l] has sizes[l+1] entries.
struct MlpModel {
  std::vector<std::size_t> sizes;  // [input, hidden..., 2]
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  Activation activation = Activation::Sigmoid;
  double initial_training_loss = std::numeric_limits<double>::quiet_NaN();
  double final_training_loss = std::numeric_limits<double>::quiet_NaN();
};

/// Weights uniform in [-0.5, 0.5] from the seeded generator, biases zero.
/// sizes is the full layer chain and must end with 2; an empty hidden part
/// ([m, 2]) gives a plain linear-softmax model.
MlpModel mlp_init(const std::vector<std::size_t>& sizes, Activation activation,
                  std::uint64_t seed);

struct MlpTrace {
  /// activations[0] is the input; the last entry is the softmax output.
  std::vector<std::vector<double>> activations;
  const std::vector<double>& output() const { return activations.back(); }
};

MlpTrace mlp_forward(const MlpModel& m, std::span<const double> x);

/// Gradients of the cross-entropy loss, same shapes as the parameters.
struct MlpGradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

MlpGradient mlp_backprop(const MlpModel& m, std::span<const double> x, int y);

/// Cross-entropy of the model output against label y (0 or 1).
double mlp_loss(const MlpModel& m, std::span<const double> x, int y);

struct MlpTrainConfig {
  double learning_rate = 0.3;
  double momentum = 0.2;
  int epochs = 500;
  std::uint64_t seed = 0;
  /// Hidden layer sizes; empty means one layer of ceil((p + 2) / 2).
  std::vector<std::size_t> hidden;
  bool linear_only = false;  // force no hidden layer
  Activation activation = Activation::Sigmoid;
};

/// Per-example SGD with momentum over seeded shuffled epochs; records the
/// final mean training loss. Throws DivergenceError on non-finite loss.
MlpModel mlp_train(const Dataset& d, const MlpTrainConfig& cfg);

ProbPair predict_distribution(const MlpModel& m, std::span<const double> x);

}  // namespace meso
