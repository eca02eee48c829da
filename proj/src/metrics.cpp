#include "meso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "meso/error.hpp"

namespace meso {

ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truths, int positive) {
  if (predictions.size() != truths.size())
    throw Error("confusion: prediction/truth length mismatch");
  if (predictions.empty()) throw Error("confusion: empty input");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    bool pred_pos = predictions[i] == positive;
    bool true_pos = truths[i] == positive;
    if (pred_pos && true_pos) ++c.tp;
    else if (pred_pos && !true_pos) ++c.fp;
    else if (!pred_pos && true_pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

BasicMetrics basic_metrics(const ConfusionMatrix& c) {
  if (c.total() <= 0) throw Error("basic_metrics: empty confusion matrix");
  BasicMetrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  } else {
    m.precision_undefined = true;
  }
  if (c.tp + c.fn > 0) {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  } else {
    m.recall_undefined = true;
  }
  if (m.precision + m.recall > 0.0) {
    m.f_measure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f_undefined = true;
  }
  return m;
}

double rmse(std::span<const double> scores, std::span<const int> truths) {
  if (scores.size() != truths.size()) throw Error("rmse: length mismatch");
  if (scores.empty()) throw Error("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double diff = scores[i] - static_cast<double>(truths[i]);
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(scores.size()));
}

double roc_auc(std::span<const double> scores, std::span<const int> truths) {
  if (scores.size() != truths.size()) throw Error("roc_auc: length mismatch");
  std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int t : truths) n_pos += (t == 1);
  std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error("roc_auc: both classes must be present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks over tie groups, accumulate positive ranks
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k)
      if (truths[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  double n_pos_d = static_cast<double>(n_pos);
  double n_neg_d = static_cast<double>(n_neg);
  return (rank_sum_pos - n_pos_d * (n_pos_d + 1.0) / 2.0) / (n_pos_d * n_neg_d);
}

double prc_auc(std::span<const double> scores, std::span<const int> truths) {
  if (scores.size() != truths.size()) throw Error("prc_auc: length mismatch");
  std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int t : truths) n_pos += (t == 1);
  if (n_pos == 0) throw Error("prc_auc: no positive instances");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      if (truths[order[k]] == 1) ++tp;
      else ++fp;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

TTestResult corrected_paired_ttest(std::span<const double> a,
                                   std::span<const double> b, double n_train,
                                   double n_test, double alpha) {
  if (a.size() != b.size()) throw Error("t-test: per-fold vectors differ in length");
  std::size_t k = a.size();
  if (k < 2) throw Error("t-test: need at least 2 folds");

  std::vector<double> diff(k);
  for (std::size_t i = 0; i < k; ++i) diff[i] = a[i] - b[i];
  double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(k);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  double variance = ss / static_cast<double>(k - 1);

  double kd = static_cast<double>(k);
  double multiplier = (n_train + kd * n_test) / (kd * n_train);

  TTestResult res;
  res.mean_difference = mean;
  res.corrected_variance = variance * multiplier;
  res.degrees_of_freedom = static_cast<int>(k) - 1;
  if (variance == 0.0) {
    if (mean == 0.0) {
      res.t_statistic = 0.0;
      res.p_value = 1.0;
      res.significant = false;
    } else {
      res.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
      res.p_value = 0.0;
      res.significant = true;
    }
    return res;
  }
  res.t_statistic = mean / std::sqrt(res.corrected_variance);
  res.p_value = student_t_two_sided_p(res.t_statistic, res.degrees_of_freedom);
  res.significant = res.p_value < alpha;
  return res;
}

double log_gamma(double x) {
  // Lanczos approximation, g = 7
  static const double coeff[9] = {0.99999999999980993,  676.5203681218851,
                                  -1259.1392167224028,  771.32342877765313,
                                  -176.61502916214059,  12.507343278686905,
                                  -0.13857109526572012, 9.9843695780195716e-6,
                                  1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = coeff[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coeff[i] / (x + static_cast<double>(i));
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int df) {
  if (df < 1) throw Error("student t: degrees of freedom must be >= 1");
  if (std::isinf(t)) return 0.0;
  double d = static_cast<double>(df);
  double x = d / (d + t * t);
  return regularized_incomplete_beta(d / 2.0, 0.5, x);
}

double binomial_two_sided_p(int successes, int trials) {
  if (trials <= 0) throw Error("binomial test: trials must be positive");
  if (successes < 0 || successes > trials)
    throw Error("binomial test: successes out of range");
  double half = static_cast<double>(trials) / 2.0;
  if (static_cast<double>(successes) == half) return 1.0;

  auto log_pmf = [&](int k) {
    return log_gamma(trials + 1.0) - log_gamma(k + 1.0) -
           log_gamma(trials - k + 1.0) - trials * std::log(2.0);
  };
  // symmetric at p = 0.5: double the smaller tail
  int k = successes;
  if (static_cast<double>(k) > half) k = trials - k;
  double tail = 0.0;
  for (int i = 0; i <= k; ++i) tail += std::exp(log_pmf(i));
  return std::min(1.0, 2.0 * tail);
}

}  // namespace meso
