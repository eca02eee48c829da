#include "meso/linear.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "meso/error.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double sign_pos(double v) { return v >= 0.0 ? 1.0 : -1.0; }

struct EncodedView {
  std::vector<std::vector<double>> x;
  std::vector<double> y;  // -1 / +1
};

EncodedView encode(const Dataset& d) {
  EncodedView v;
  v.x.reserve(d.n_rows());
  v.y.reserve(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    v.x.push_back(feature_vector(d, r));
    v.y.push_back(d.label(r) == 1 ? 1.0 : -1.0);
  }
  return v;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::vector<double> feature_vector(const Dataset& d, std::size_t row) {
  std::vector<double> out;
  for (std::size_t c : d.predictor_indices()) {
    if (d.attr(c).kind != AttrKind::Numeric)
      throw SchemaError("predictor '" + d.attr(c).name +
                        "' is nominal; encode the dataset first");
    double v = d.cell(row, c);
    out.push_back(Dataset::is_missing(v) ? 0.0 : v);
  }
  return out;
}

double LinearModel::margin(std::span<const double> x) const {
  if (x.size() != weights.size())
    throw Error("linear model: feature length mismatch");
  double m = bias;
  for (std::size_t i = 0; i < x.size(); ++i) m += weights[i] * x[i];
  return m;
}

LinearModel sgd_train(const Dataset& d, const SgdConfig& cfg) {
  if (cfg.learning_rate < 0.0) throw Error("sgd: learning rate must be >= 0");
  if (cfg.epochs < 1) throw Error("sgd: epochs must be >= 1");
  auto data = encode(d);
  std::size_t n = data.x.size();
  std::size_t p = n ? data.x[0].size() : 0;

  LinearModel model;
  model.loss = cfg.loss;
  model.weights.assign(p, 0.0);

  auto eng = rng::make_engine(cfg.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  long t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng::shuffle(order, eng);
    for (std::size_t i : order) {
      double gamma = cfg.learning_rate /
                     (1.0 + cfg.learning_rate * cfg.lambda * static_cast<double>(t));
      double m = model.margin(data.x[i]);
      double pull;  // coefficient on y*x in the negative gradient
      if (cfg.loss == LossKind::Hinge) {
        pull = data.y[i] * m < 1.0 ? 1.0 : 0.0;
      } else {
        pull = sigmoid(-data.y[i] * m);
      }
      double shrink = 1.0 - gamma * cfg.lambda;
      for (std::size_t j = 0; j < p; ++j) {
        model.weights[j] = shrink * model.weights[j] +
                           gamma * pull * data.y[i] * data.x[i][j];
      }
      model.bias += gamma * pull * data.y[i];
      ++t;
    }
    if (!all_finite(model.weights) || !std::isfinite(model.bias))
      throw DivergenceError("sgd diverged at epoch " + std::to_string(epoch));
  }
  return model;
}

double svm_objective(const Dataset& d, std::span<const double> weights,
                     double lambda) {
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  double loss = 0.0;
  std::size_t n = d.n_rows();
  for (std::size_t r = 0; r < n; ++r) {
    auto x = feature_vector(d, r);
    double y = d.label(r) == 1 ? 1.0 : -1.0;
    double m = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) m += weights[j] * x[j];
    loss += std::max(0.0, 1.0 - y * m);
  }
  return 0.5 * lambda * norm2 + loss / static_cast<double>(n);
}

LinearModel pegasos_train(const Dataset& d, const PegasosConfig& cfg) {
  if (cfg.lambda <= 0.0) throw Error("pegasos: lambda must be > 0");
  if (cfg.iterations < 1) throw Error("pegasos: iterations must be >= 1");
  auto data = encode(d);
  std::size_t n = data.x.size();
  std::size_t p = n ? data.x[0].size() : 0;

  LinearModel model;
  model.loss = LossKind::Hinge;
  model.weights.assign(p, 0.0);
  model.bias = 0.0;

  auto eng = rng::make_engine(cfg.seed);
  for (long t = 1; t <= cfg.iterations; ++t) {
    std::size_t i = rng::uniform_index(eng, n);
    double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
    double m = 0.0;
    for (std::size_t j = 0; j < p; ++j) m += model.weights[j] * data.x[i][j];
    double shrink = 1.0 - 1.0 / static_cast<double>(t);  // 1 - eta*lambda
    if (data.y[i] * m < 1.0) {
      for (std::size_t j = 0; j < p; ++j)
        model.weights[j] = shrink * model.weights[j] + eta * data.y[i] * data.x[i][j];
    } else {
      for (std::size_t j = 0; j < p; ++j) model.weights[j] *= shrink;
    }
    if ((t & 0xfff) == 0 && !all_finite(model.weights))
      throw DivergenceError("pegasos diverged at iteration " + std::to_string(t));
  }
  if (!all_finite(model.weights))
    throw DivergenceError("pegasos produced non-finite weights");
  model.final_objective = svm_objective(d, model.weights, cfg.lambda);
  return model;
}

double VotedPerceptronModel::vote(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& e : entries) {
    double m = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) m += e.weights[j] * x[j];
    v += static_cast<double>(e.survival) * sign_pos(m);
  }
  return v;
}

VotedPerceptronModel voted_perceptron_train(const Dataset& d,
                                            const VotedPerceptronConfig& cfg) {
  if (cfg.epochs < 1) throw Error("voted perceptron: epochs must be >= 1");
  auto data = encode(d);
  std::size_t n = data.x.size();
  std::size_t p = n ? data.x[0].size() : 0;

  VotedPerceptronModel model;
  std::vector<double> w(p, 0.0);
  long survival = 1;

  auto eng = rng::make_engine(cfg.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng::shuffle(order, eng);  // one fixed pass order for all epochs

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    long mistakes = 0;
    for (std::size_t i : order) {
      double m = 0.0;
      for (std::size_t j = 0; j < p; ++j) m += w[j] * data.x[i][j];
      if (data.y[i] * m <= 0.0) {
        model.entries.push_back({w, survival});
        for (std::size_t j = 0; j < p; ++j) w[j] += data.y[i] * data.x[i][j];
        survival = 1;
        ++mistakes;
      } else {
        ++survival;
      }
    }
    model.mistakes_per_epoch.push_back(mistakes);
  }
  model.entries.push_back({std::move(w), survival});
  return model;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) throw Error("kernel: vector length mismatch");
  switch (spec.kind) {
    case KernelSpec::Kind::Linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelSpec::Kind::Polynomial: {
      if (spec.degree < 1) throw Error("kernel: polynomial degree must be >= 1");
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::pow(dot + spec.coef0, spec.degree);
    }
    case KernelSpec::Kind::Rbf: {
      if (spec.gamma <= 0.0) throw Error("kernel: rbf gamma must be > 0");
      double dist2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - y[i];
        dist2 += diff * diff;
      }
      return std::exp(-spec.gamma * dist2);
    }
  }
  throw Error("kernel: unknown kind");
}

double KernelModel::decision(std::span<const double> x) const {
  double f = bias;
  for (std::size_t i = 0; i < support.size(); ++i)
    f += alpha[i] * kernel_eval(kernel, support[i], x);
  return f;
}

KernelModel klr_train(const Dataset& d, const KlrConfig& cfg) {
  if (cfg.lambda <= 0.0) throw Error("klr: lambda must be > 0");
  auto data = encode(d);
  const std::size_t n = data.x.size();
  if (n == 0) throw Error("klr: empty training set");
  const std::size_t p = data.x[0].size();

  KernelModel model;
  model.kernel = cfg.kernel;
  if (model.kernel.kind == KernelSpec::Kind::Rbf && model.kernel.gamma <= 0.0)
    model.kernel.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(1, p));
  model.lambda = cfg.lambda;
  model.support = data.x;
  model.alpha.assign(n, 0.0);

  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double k = kernel_eval(model.kernel, data.x[i], data.x[j]);
      K(i, j) = k;
      K(j, i) = k;
    }

  Eigen::VectorXd target(n);  // 1 for class index 1, 0 otherwise
  for (std::size_t i = 0; i < n; ++i) target(i) = data.y[i] > 0 ? 1.0 : 0.0;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  double bias = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);

  auto objective = [&](const Eigen::VectorXd& a, double b) {
    Eigen::VectorXd f = K * a;
    double obj = cfg.lambda * a.dot(f);
    for (std::size_t i = 0; i < n; ++i) {
      double yi = data.y[i];
      double fi = f(i) + b;
      // log(1 + exp(-y f)) computed stably
      double z = -yi * fi;
      obj += inv_n * (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)));
    }
    return obj;
  };

  double current_obj = objective(alpha, bias);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    Eigen::VectorXd f = K * alpha;
    f.array() += bias;
    Eigen::VectorXd prob(n), weight(n), resid(n);
    for (std::size_t i = 0; i < n; ++i) {
      prob(i) = sigmoid(f(i));
      weight(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-12);
      resid(i) = prob(i) - target(i);
    }

    // Newton system over (alpha, bias)
    Eigen::MatrixXd H(n + 1, n + 1);
    Eigen::VectorXd g(n + 1);
    Eigen::MatrixXd WK = weight.asDiagonal() * K;
    H.topLeftCorner(n, n) = 2.0 * cfg.lambda * K + inv_n * K * WK;
    H.topRightCorner(n, 1) = inv_n * (K * weight);
    H.bottomLeftCorner(1, n) = inv_n * (weight.transpose() * K);
    H(n, n) = inv_n * weight.sum();
    g.head(n) = K * (2.0 * cfg.lambda * alpha + inv_n * resid);
    g(n) = inv_n * resid.sum();

    Eigen::VectorXd step = Eigen::VectorXd::Zero(n + 1);
    bool solved = false;
    for (int attempt = 0; attempt < 2 && !solved; ++attempt) {
      if (attempt == 1)
        H.diagonal().array() += 1e-8;  // ridge-stabilized retry
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      if (ldlt.info() == Eigen::Success) {
        step = ldlt.solve(-g);
        solved = step.allFinite() && (H * step + g).norm() <=
                                         1e-6 * std::max(1.0, g.norm());
      }
    }
    if (!solved) throw Error("klr: singular IRLS system");

    // backtracking keeps the convex objective from overshooting
    double scale = 1.0;
    Eigen::VectorXd alpha_next;
    double bias_next = bias, obj_next = current_obj;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      alpha_next = alpha + scale * step.head(n);
      bias_next = bias + scale * step(n);
      obj_next = objective(alpha_next, bias_next);
      if (obj_next <= current_obj + 1e-15) {
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;

    double max_change = (scale * step).cwiseAbs().maxCoeff();
    alpha = alpha_next;
    bias = bias_next;
    current_obj = obj_next;
    if (max_change < cfg.tolerance) break;
  }

  for (std::size_t i = 0; i < n; ++i) model.alpha[i] = alpha(i);
  model.bias = bias;
  if (!all_finite(model.alpha) || !std::isfinite(model.bias))
    throw DivergenceError("klr produced non-finite coefficients");
  return model;
}

ProbPair predict_distribution(const LinearModel& m, std::span<const double> x) {
  double p = sigmoid(m.margin(x));
  return {1.0 - p, p};
}

ProbPair predict_distribution(const VotedPerceptronModel& m,
                              std::span<const double> x) {
  double p = sigmoid(m.vote(x));
  return {1.0 - p, p};
}

ProbPair predict_distribution(const KernelModel& m, std::span<const double> x) {
  double p = sigmoid(m.decision(x));
  return {1.0 - p, p};
}

}  // namespace meso
