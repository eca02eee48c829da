#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace meso {

struct ConfusionMatrix {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;
  long total() const { return tp + tn + fp + fn; }
};

/// Counts w.r.t. the declared positive label. Lengths must match and be
/// nonempty.
ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truths, int positive);

struct BasicMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  // set when the corresponding denominator was zero and the value was
  // defined to 0
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_undefined = false;
};

BasicMetrics basic_metrics(const ConfusionMatrix& c);

/// Root mean squared error of positive-class probabilities against 0/1
/// truths.
double rmse(std::span<const double> scores, std::span<const int> truths);

/// Area under the ROC curve via the rank statistic (ties get half credit).
/// Throws if only one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> truths);

/// Area under the precision-recall curve, step-wise (average-precision
/// convention); tied scores are grouped at one threshold. Throws if no
/// positives are present.
double prc_auc(std::span<const double> scores, std::span<const int> truths);

struct TTestResult {
  double mean_difference = 0.0;
  double corrected_variance = 0.0;  // sigma^2 * (1/k + n_test/n_train)
  double t_statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  bool significant = false;
};

/// Paired t-test on per-fold scores with the resampled-correction variance
/// multiplier (1/k + n_test/n_train).
TTestResult corrected_paired_ttest(std::span<const double> a,
                                   std::span<const double> b, double n_train,
                                   double n_test, double alpha);

// Special functions, kept in-repo so the statistics above have no external
// dependencies.

double log_gamma(double x);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

/// Exact two-sided binomial test against success probability 0.5.
double binomial_two_sided_p(int successes, int trials);

}  // namespace meso
