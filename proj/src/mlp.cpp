#include "meso/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "meso/error.hpp"
#include "meso/linear.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Sigmoid:
      return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::Relu:
      return z > 0.0 ? z : 0.0;
  }
  return z;
}

// derivative expressed through the activation value
double activate_grad(Activation a, double value) {
  switch (a) {
    case Activation::Sigmoid:
      return value * (1.0 - value);
    case Activation::Tanh:
      return 1.0 - value * value;
    case Activation::Relu:
      return value > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

std::vector<double> softmax(double a, double b) {
  double m = std::max(a, b);
  double ea = std::exp(a - m);
  double eb = std::exp(b - m);
  double s = ea + eb;
  return {ea / s, eb / s};
}

MlpGradient backprop_from_trace(const MlpModel& m, const MlpTrace& trace, int y) {
  MlpGradient grad;
  grad.weights.resize(m.weights.size());
  grad.biases.resize(m.biases.size());

  // softmax + cross-entropy output delta is p - onehot(y)
  std::vector<double> delta = trace.output();
  delta[static_cast<std::size_t>(y)] -= 1.0;

  for (std::size_t l = m.weights.size(); l-- > 0;) {
    std::size_t in = m.sizes[l];
    std::size_t out = m.sizes[l + 1];
    const auto& below = trace.activations[l];
    grad.weights[l].assign(out * in, 0.0);
    grad.biases[l].assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      grad.biases[l][o] = delta[o];
      double* row = grad.weights[l].data() + o * in;
      for (std::size_t i = 0; i < in; ++i) row[i] = delta[o] * below[i];
    }
    if (l > 0) {
      std::vector<double> next(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        double sum = 0.0;
        for (std::size_t o = 0; o < out; ++o)
          sum += m.weights[l][o * in + i] * delta[o];
        next[i] = sum * activate_grad(m.activation, below[i]);
      }
      delta = std::move(next);
    }
  }
  return grad;
}

}  // namespace

MlpModel mlp_init(const std::vector<std::size_t>& sizes, Activation activation,
                  std::uint64_t seed) {
  if (sizes.size() < 2) throw Error("mlp: need at least input and output layers");
  if (sizes.back() != 2) throw Error("mlp: output layer must have 2 units");
  for (std::size_t s : sizes)
    if (s == 0) throw Error("mlp: layer sizes must be positive");

  MlpModel m;
  m.sizes = sizes;
  m.activation = activation;
  auto eng = rng::make_engine(seed);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    std::vector<double> w(sizes[l + 1] * sizes[l]);
    for (double& v : w) v = rng::uniform(eng, -0.5, 0.5);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(sizes[l + 1], 0.0);
  }
  return m;
}

MlpTrace mlp_forward(const MlpModel& m, std::span<const double> x) {
  if (x.size() != m.sizes.front()) throw Error("mlp: input length mismatch");
  MlpTrace trace;
  trace.activations.emplace_back(x.begin(), x.end());

  const std::size_t n_layers = m.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& prev = trace.activations.back();
    std::size_t in = m.sizes[l];
    std::size_t out = m.sizes[l + 1];
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double sum = m.biases[l][o];
      const double* row = m.weights[l].data() + o * in;
      for (std::size_t i = 0; i < in; ++i) sum += row[i] * prev[i];
      z[o] = sum;
    }
    if (l + 1 == n_layers) {
      trace.activations.push_back(softmax(z[0], z[1]));
    } else {
      for (double& v : z) v = activate(m.activation, v);
      trace.activations.push_back(std::move(z));
    }
  }
  return trace;
}

MlpGradient mlp_backprop(const MlpModel& m, std::span<const double> x, int y) {
  if (y != 0 && y != 1) throw Error("mlp: label must be 0 or 1");
  return backprop_from_trace(m, mlp_forward(m, x), y);
}

double mlp_loss(const MlpModel& m, std::span<const double> x, int y) {
  MlpTrace trace = mlp_forward(m, x);
  double p = trace.output()[static_cast<std::size_t>(y)];
  return -std::log(std::max(p, 1e-300));
}

MlpModel mlp_train(const Dataset& d, const MlpTrainConfig& cfg) {
  if (cfg.learning_rate < 0.0) throw Error("mlp: learning rate must be >= 0");
  if (cfg.epochs < 1) throw Error("mlp: epochs must be >= 1");

  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    x.push_back(feature_vector(d, r));
    y.push_back(d.label(r));
  }
  std::size_t n = x.size();
  if (n == 0) throw Error("mlp: empty training set");
  std::size_t p = x[0].size();

  std::vector<std::size_t> sizes{p};
  if (!cfg.linear_only) {
    if (!cfg.hidden.empty()) {
      sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    } else {
      sizes.push_back((p + 2 + 1) / 2);  // ceil((p + 2) / 2)
    }
  }
  sizes.push_back(2);

  MlpModel model = mlp_init(sizes, cfg.activation, rng::derive(cfg.seed, 0));

  MlpGradient velocity;
  velocity.weights.resize(model.weights.size());
  velocity.biases.resize(model.biases.size());
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    velocity.weights[l].assign(model.weights[l].size(), 0.0);
    velocity.biases[l].assign(model.biases[l].size(), 0.0);
  }

  auto eng = rng::make_engine(rng::derive(cfg.seed, 1));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  double initial_loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) initial_loss += mlp_loss(model, x[i], y[i]);
  model.initial_training_loss = initial_loss / static_cast<double>(n);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng::shuffle(order, eng);
    double epoch_loss = 0.0;
    for (std::size_t i : order) {
      MlpTrace trace = mlp_forward(model, x[i]);
      epoch_loss += -std::log(
          std::max(trace.output()[static_cast<std::size_t>(y[i])], 1e-300));
      MlpGradient grad = backprop_from_trace(model, trace, y[i]);
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (std::size_t j = 0; j < model.weights[l].size(); ++j) {
          velocity.weights[l][j] = cfg.momentum * velocity.weights[l][j] -
                                   cfg.learning_rate * grad.weights[l][j];
          model.weights[l][j] += velocity.weights[l][j];
        }
        for (std::size_t j = 0; j < model.biases[l].size(); ++j) {
          velocity.biases[l][j] = cfg.momentum * velocity.biases[l][j] -
                                  cfg.learning_rate * grad.biases[l][j];
          model.biases[l][j] += velocity.biases[l][j];
        }
      }
    }
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("mlp diverged at epoch " + std::to_string(epoch));
  }

  double final_loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) final_loss += mlp_loss(model, x[i], y[i]);
  model.final_training_loss = final_loss / static_cast<double>(n);
  return model;
}

ProbPair predict_distribution(const MlpModel& m, std::span<const double> x) {
  auto out = mlp_forward(m, x).output();
  return {out[0], out[1]};
}

}  // namespace meso
