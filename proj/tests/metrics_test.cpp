#include <doctest.h>

#include <cmath>
#include <vector>

#include "meso/error.hpp"
#include "meso/metrics.hpp"
#include "meso/rng.hpp"

using namespace meso;

namespace {

// O(n^2) pair-counting reference for the ROC area
double roc_auc_bruteforce(const std::vector<double>& scores,
                          const std::vector<int>& truths) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truths[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truths[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// threshold-enumeration reference for the PR area
double prc_auc_bruteforce(const std::vector<double>& scores,
                          const std::vector<int>& truths) {
  std::vector<double> thresholds = scores;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  std::size_t n_pos = 0;
  for (int t : truths) n_pos += t == 1;

  double area = 0.0, prev_recall = 0.0;
  for (double thr : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= thr) {
        if (truths[i] == 1) ++tp;
        else ++fp;
      }
    }
    double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

}  // namespace

TEST_CASE("confusion counts against a declared positive") {
  std::vector<int> preds{1, 1, 0};
  std::vector<int> truths{1, 0, 0};
  auto c = confusion(preds, truths, 1);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fn == 0);

  auto all_right = confusion(truths, truths, 1);
  CHECK(all_right.tp == 1);
  CHECK(all_right.tn == 2);

  std::vector<int> flipped{0, 1, 1};
  auto all_wrong = confusion(flipped, truths, 1);
  CHECK(all_wrong.tp == 0);
  CHECK(all_wrong.tn == 0);

  CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}, 1), Error);
  CHECK_THROWS_AS(confusion(preds, std::vector<int>{1}, 1), Error);
}

TEST_CASE("basic_metrics reproduces the majority-baseline signature") {
  ConfusionMatrix c{228, 0, 96, 0};
  auto m = basic_metrics(c);
  CHECK(m.accuracy == doctest::Approx(0.7037).epsilon(1e-3));
  CHECK(m.precision == doctest::Approx(0.7037).epsilon(1e-3));
  CHECK(m.recall == 1.0);
  CHECK(m.f_measure == doctest::Approx(0.826).epsilon(1e-2));

  ConfusionMatrix perfect{100, 50, 0, 0};
  auto mp = basic_metrics(perfect);
  CHECK(mp.accuracy == 1.0);
  CHECK(mp.precision == 1.0);
  CHECK(mp.recall == 1.0);
  CHECK(mp.f_measure == 1.0);

  ConfusionMatrix degenerate{0, 10, 0, 5};
  auto md = basic_metrics(degenerate);
  CHECK(md.precision == 0.0);
  CHECK(md.precision_undefined);
  CHECK(md.f_measure == 0.0);
  CHECK(md.f_undefined);
}

TEST_CASE("basic_metrics consistency properties") {
  auto eng = rng::make_engine(4);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix c;
    c.tp = static_cast<long>(rng::uniform_index(eng, 50));
    c.tn = static_cast<long>(rng::uniform_index(eng, 50));
    c.fp = static_cast<long>(rng::uniform_index(eng, 50));
    c.fn = static_cast<long>(rng::uniform_index(eng, 50));
    if (c.total() == 0) continue;
    auto m = basic_metrics(c);
    CHECK(m.accuracy * static_cast<double>(c.total()) ==
          doctest::Approx(static_cast<double>(c.tp + c.tn)).epsilon(1e-12));
    CHECK((m.f_measure == 0.0) == (c.tp == 0));
  }
}

TEST_CASE("rmse basics") {
  std::vector<double> confident{1, 1, 0};
  std::vector<int> truths{1, 1, 0};
  CHECK(rmse(confident, truths) == 0.0);

  std::vector<double> half{0.5, 0.5, 0.5};
  CHECK(rmse(half, truths) == 0.5);

  std::vector<double> wrong{1, 0};
  std::vector<int> t2{0, 1};
  CHECK(rmse(wrong, t2) == 1.0);
}

TEST_CASE("roc_auc examples") {
  std::vector<double> constant{0.3, 0.3, 0.3, 0.3};
  std::vector<int> truths{1, 0, 1, 0};
  CHECK(roc_auc(constant, truths) == doctest::Approx(0.5));

  std::vector<double> separating{0.9, 0.8, 0.2, 0.1};
  std::vector<int> t2{1, 1, 0, 0};
  CHECK(roc_auc(separating, t2) == doctest::Approx(1.0));

  std::vector<double> mixed{0.9, 0.8, 0.3, 0.2};
  std::vector<int> t3{1, 0, 1, 0};
  CHECK(roc_auc(mixed, t3) == doctest::Approx(0.75));

  std::vector<int> single{1, 1, 1, 1};
  CHECK_THROWS_AS(roc_auc(mixed, single), Error);
}

TEST_CASE("prc_auc examples") {
  std::vector<double> mixed{0.9, 0.8, 0.3, 0.2};
  std::vector<int> t{1, 0, 1, 0};
  CHECK(prc_auc(mixed, t) == doctest::Approx(1.0 * 0.5 + (2.0 / 3.0) * 0.5));

  std::vector<double> separating{0.9, 0.8, 0.2, 0.1};
  std::vector<int> t2{1, 1, 0, 0};
  CHECK(prc_auc(separating, t2) == doctest::Approx(1.0));

  // constant scores give the positive prevalence
  std::vector<double> constant(100, 0.5);
  std::vector<int> t3(100, 0);
  for (int i = 0; i < 70; ++i) t3[i] = 1;
  CHECK(prc_auc(constant, t3) == doctest::Approx(0.70));

  std::vector<int> none(4, 0);
  CHECK_THROWS_AS(prc_auc(mixed, none), Error);
}

TEST_CASE("roc and prc match brute force on random instances") {
  auto eng = rng::make_engine(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng::uniform_index(eng, 199);
    std::vector<double> scores(n);
    std::vector<int> truths(n);
    bool ties = trial % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = ties ? std::floor(rng::uniform(eng) * 10.0) / 10.0
                       : rng::uniform(eng);
      truths[i] = rng::uniform(eng) < 0.4 ? 1 : 0;
    }
    int pos = 0, neg = 0;
    for (int t : truths) (t == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) continue;

    CHECK(roc_auc(scores, truths) ==
          doctest::Approx(roc_auc_bruteforce(scores, truths)).epsilon(1e-12));
    CHECK(prc_auc(scores, truths) ==
          doctest::Approx(prc_auc_bruteforce(scores, truths)).epsilon(1e-12));

    // complement symmetry for tie-free scores
    if (!ties) {
      std::vector<double> negated(n);
      for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
      CHECK(roc_auc(scores, truths) + roc_auc(negated, truths) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("label permutation invariance") {
  auto eng = rng::make_engine(123);
  std::vector<double> scores(60);
  std::vector<int> truths(60), flipped(60), preds(60), preds_f(60);
  for (std::size_t i = 0; i < 60; ++i) {
    scores[i] = rng::uniform(eng);
    truths[i] = rng::uniform(eng) < 0.5 ? 1 : 0;
    flipped[i] = 1 - truths[i];
    preds[i] = scores[i] > 0.5 ? 1 : 0;
    preds_f[i] = 1 - preds[i];
  }
  auto m1 = basic_metrics(confusion(preds, truths, 1));
  auto m2 = basic_metrics(confusion(preds_f, flipped, 0));
  CHECK(m1.accuracy == m2.accuracy);
  CHECK(m1.precision == m2.precision);
  CHECK(m1.recall == m2.recall);
}

TEST_CASE("corrected t-test edge cases and multiplier") {
  std::vector<double> same{0.8, 0.7, 0.9, 0.85};
  auto res = corrected_paired_ttest(same, same, 9, 1, 0.05);
  CHECK(res.t_statistic == 0.0);
  CHECK(res.p_value == 1.0);
  CHECK(!res.significant);

  // k=10, n_test/n_train = 1/9 -> multiplier 1/10 + 1/9 = 19/90
  std::vector<double> a(10), b(10);
  auto eng = rng::make_engine(7);
  for (int i = 0; i < 10; ++i) {
    a[i] = 0.7 + 0.1 * rng::uniform(eng);
    b[i] = 0.6 + 0.1 * rng::uniform(eng);
  }
  auto r = corrected_paired_ttest(a, b, 9, 1, 0.05);
  double mean = 0.0;
  for (int i = 0; i < 10; ++i) mean += (a[i] - b[i]) / 10.0;
  double ss = 0.0;
  for (int i = 0; i < 10; ++i)
    ss += ((a[i] - b[i]) - mean) * ((a[i] - b[i]) - mean);
  double var = ss / 9.0;
  CHECK(r.corrected_variance == doctest::Approx(var * 19.0 / 90.0).epsilon(1e-14));
  CHECK(r.degrees_of_freedom == 9);

  // constant nonzero difference -> infinite t, significant
  std::vector<double> c(10, 0.8), d(10, 0.75);
  auto ri = corrected_paired_ttest(c, d, 9, 1, 0.05);
  CHECK(std::isinf(ri.t_statistic));
  CHECK(ri.significant);
}

TEST_CASE("student t p-values match reference quantiles") {
  // classic two-sided critical values
  CHECK(student_t_two_sided_p(2.2621571628, 9) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(student_t_two_sided_p(3.2498355440, 9) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(student_t_two_sided_p(1.8124611228, 10) == doctest::Approx(0.10).epsilon(1e-6));
  CHECK(student_t_two_sided_p(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("binomial two-sided test at one half") {
  CHECK(binomial_two_sided_p(5, 10) == doctest::Approx(1.0));
  CHECK(binomial_two_sided_p(8, 8) == doctest::Approx(2.0 / 256.0).epsilon(1e-9));
  CHECK(binomial_two_sided_p(0, 8) == doctest::Approx(2.0 / 256.0).epsilon(1e-9));
  // symmetric
  CHECK(binomial_two_sided_p(2, 12) == doctest::Approx(binomial_two_sided_p(10, 12)));
}
