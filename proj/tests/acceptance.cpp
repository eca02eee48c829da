// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line each. Returns the number of failures.
// The real-data check is skipped (not failed) when the clinical CSV is
// not present; point MESO_REAL_DATA at the file or drop it into
// data/mesothelioma.csv.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meso/boruta.hpp"
#include "meso/dataset.hpp"
#include "meso/experiment.hpp"
#include "meso/harness.hpp"
#include "meso/learners.hpp"
#include "meso/linear.hpp"
#include "meso/metrics.hpp"
#include "meso/mlp.hpp"
#include "meso/rng.hpp"
#include "meso/synth.hpp"
#include "meso/trees.hpp"

using namespace meso;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

Outcome pass(const std::string& detail) { return {Outcome::Pass, detail}; }
Outcome fail(const std::string& detail) { return {Outcome::Fail, detail}; }
Outcome skip(const std::string& detail) { return {Outcome::Skip, detail}; }

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

Dataset numeric_dataset(const std::vector<std::vector<double>>& rows,
                        const std::vector<int>& labels) {
  std::size_t p = rows.empty() ? 0 : rows[0].size();
  std::vector<AttributeSpec> attrs;
  for (std::size_t j = 0; j < p; ++j)
    attrs.push_back({"x" + std::to_string(j), AttrKind::Numeric, {},
                     AttrRole::Predictor, false});
  attrs.push_back({"y", AttrKind::Nominal, {"0", "1"}, AttrRole::ClassLabel,
                   false});
  std::vector<double> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (double v : rows[r]) cells.push_back(v);
    cells.push_back(static_cast<double>(labels[r]));
  }
  return Dataset(std::move(attrs), std::move(cells), rows.size());
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion_majority_baseline() {
  auto start = std::chrono::steady_clock::now();
  auto eng = rng::make_engine(6);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < 324; ++i) {
    rows.push_back({rng::normal(eng), rng::normal(eng)});
    labels.push_back(i < 228 ? 1 : 0);  // majority fraction 228/324 = 0.7037
  }
  auto d = numeric_dataset(rows, labels);
  auto plan = stratified_folds(d, 10, 17);
  auto learner = make_learner("zero_rule", {}, 1);
  auto report = cross_validate(*learner, d, plan, d.majority_label());
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::ostringstream detail;
  detail << "accuracy " << fmt(report.accuracy * 100.0, 2) << "%, recall "
         << fmt(report.recall, 2) << ", precision " << fmt(report.precision, 3)
         << ", roc " << fmt(report.roc_auc, 3) << ", f "
         << fmt(report.f_measure, 3) << ", " << fmt(elapsed, 2) << "s";
  bool ok = std::fabs(report.accuracy * 100.0 - 70.38) <= 0.5 &&
            report.recall == 1.0 &&
            std::fabs(report.precision - 0.704) <= 0.005 &&
            std::fabs(report.roc_auc - 0.50) <= 0.01 &&
            std::fabs(report.f_measure - 0.83) <= 0.01 && elapsed < 1.0;
  return ok ? pass(detail.str()) : fail(detail.str());
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_phase1_leak() {
  auto start = std::chrono::steady_clock::now();
  auto data = generate_synthetic(clinical_schema(), 324, 41);

  ExperimentConfig cfg;
  cfg.phase = Phase::Phase1;
  cfg.models = {"sgd", "adaboost", "klr", "mlp", "vfdt", "pegasos"};
  cfg.k = 10;
  cfg.seed = 41;
  // the paper-era toolkit scores with probabilistic outputs and an
  // effectively linear kernel; select both via the documented overrides
  cfg.params["sgd.loss"] = "logistic";
  cfg.params["klr.kernel"] = "linear";
  auto report = run_experiment_on(data, cfg);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  bool ok = elapsed < 60.0;
  std::ostringstream detail;
  for (const auto& r : report.reports) {
    detail << r.model << " " << fmt(r.accuracy * 100.0, 2) << "%/rmse "
           << fmt(r.rmse, 3) << "; ";
    if (r.model == "pegasos") {
      ok = ok && r.accuracy >= 0.99;
    } else {
      ok = ok && r.accuracy == 1.0 && r.rmse <= 0.05;
    }
  }
  detail << fmt(elapsed, 1) << "s";
  return ok ? pass(detail.str()) : fail(detail.str());
}

// ---------------------------------------------------------------- criterion 3

std::string normalize_name(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Outcome criterion_real_data() {
  std::string path = "data/mesothelioma.csv";
  if (const char* env = std::getenv("MESO_REAL_DATA")) path = env;
  if (!std::filesystem::exists(path))
    return skip("clinical CSV not present (set MESO_REAL_DATA or add " +
                std::string("data/mesothelioma.csv)"));

  ExperimentConfig cfg;
  cfg.data_path = path;
  cfg.phase = Phase::Phase2;
  cfg.models = {"adaboost"};
  cfg.k = 10;
  cfg.seed = 1;
  auto report = run_experiment(cfg);

  double acc = report.reports.front().accuracy * 100.0;
  const std::vector<std::string> targets = {"crp", "plateletcount",
                                            "durationofsymptoms", "gender",
                                            "pleuralprotein"};
  std::set<std::string> confirmed;
  for (const auto& name : report.boruta_whitelist)
    confirmed.insert(normalize_name(name));

  std::size_t matched = 0;
  std::set<std::string> matched_confirmed;
  for (const auto& t : targets) {
    for (const auto& c : confirmed) {
      if (c.find(t) != std::string::npos || t.find(c) != std::string::npos) {
        ++matched;
        matched_confirmed.insert(c);
        break;
      }
    }
  }
  double jaccard =
      static_cast<double>(matched) /
      static_cast<double>(targets.size() + confirmed.size() - matched_confirmed.size());

  std::ostringstream detail;
  detail << "adaboost " << fmt(acc, 2) << "% (target 71.29 +/- 3), jaccard "
         << fmt(jaccard, 2) << " over " << confirmed.size() << " confirmed";
  bool ok = std::fabs(acc - 71.29) <= 3.0 && jaccard >= 0.6;
  return ok ? pass(detail.str()) : fail(detail.str());
}

// ---------------------------------------------------------------- criterion 4

double roc_auc_bruteforce(const std::vector<double>& s, const std::vector<int>& t) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (t[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (t[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

double prc_auc_bruteforce(const std::vector<double>& s, const std::vector<int>& t) {
  std::vector<double> thresholds = s;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  std::size_t n_pos = 0;
  for (int v : t) n_pos += v == 1;
  double area = 0.0, prev_recall = 0.0;
  for (double thr : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= thr) (t[i] == 1 ? tp : fp) += 1;
    double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

Outcome criterion_metric_oracles() {
  auto eng = rng::make_engine(404);
  std::size_t done = 0;
  double worst_prc = 0.0;
  while (done < 1000) {
    std::size_t n = 2 + rng::uniform_index(eng, 199);
    std::vector<double> scores(n);
    std::vector<int> truths(n);
    bool ties = done % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = ties ? std::floor(rng::uniform(eng) * 8.0) / 8.0
                       : rng::uniform(eng);
      truths[i] = rng::uniform(eng) < 0.35 ? 1 : 0;
    }
    int pos = 0, neg = 0;
    for (int t : truths) (t == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) continue;
    ++done;

    if (roc_auc(scores, truths) != roc_auc_bruteforce(scores, truths))
      return fail("roc mismatch at instance " + std::to_string(done));
    double diff =
        std::fabs(prc_auc(scores, truths) - prc_auc_bruteforce(scores, truths));
    worst_prc = std::max(worst_prc, diff);
    if (diff > 1e-12)
      return fail("prc off by " + fmt(diff, 16) + " at instance " +
                  std::to_string(done));
  }
  return pass("1000 instances, roc exact, prc max diff " + fmt(worst_prc, 16));
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_mlp_gradients() {
  auto eng = rng::make_engine(505);
  const double step = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<std::size_t> sizes{1 + rng::uniform_index(eng, 5)};
    if (trial % 5 != 0) sizes.push_back(1 + rng::uniform_index(eng, 6));
    if (trial % 3 == 0) sizes.push_back(1 + rng::uniform_index(eng, 4));
    sizes.push_back(2);
    Activation act = trial % 3 == 0   ? Activation::Tanh
                     : trial % 3 == 1 ? Activation::Sigmoid
                                      : Activation::Relu;
    auto m = mlp_init(sizes, act, 9000 + trial);
    std::vector<double> x(sizes.front());
    for (auto& v : x) v = rng::normal(eng);
    int y = trial % 2;

    auto grad = mlp_backprop(m, x, y);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      auto probe = [&](std::vector<double>& params, std::size_t j,
                       double analytic) {
        double saved = params[j];
        params[j] = saved + step;
        double up = mlp_loss(m, x, y);
        params[j] = saved - step;
        double down = mlp_loss(m, x, y);
        params[j] = saved;
        double numeric = (up - down) / (2.0 * step);
        double denom = std::max({std::fabs(numeric), std::fabs(analytic), 1e-8});
        worst = std::max(worst, std::fabs(numeric - analytic) / denom);
      };
      for (std::size_t j = 0; j < m.weights[l].size(); ++j)
        probe(m.weights[l], j, grad.weights[l][j]);
      for (std::size_t j = 0; j < m.biases[l].size(); ++j)
        probe(m.biases[l], j, grad.biases[l][j]);
    }
  }
  std::string detail = "120 model/input pairs, max relative error " + fmt(worst, 8);
  return worst < 1e-4 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion_adaboost_invariants() {
  auto eng = rng::make_engine(606);
  double worst_mass = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 20 + rng::uniform_index(eng, 60);
    std::vector<std::vector<double>> rows(n);
    std::vector<int> labels(n);
    for (std::size_t r = 0; r < n; ++r) {
      labels[r] = rng::uniform(eng) < 0.5 ? 1 : 0;
      rows[r] = {rng::normal(eng) + (labels[r] ? 0.7 : -0.1),
                 rng::normal(eng), rng::normal(eng)};
    }
    auto d = numeric_dataset(rows, labels);
    auto e = adaboost_m1_train(d, 15);

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (const auto& round : e.rounds) {
      if (round.error < 1e-12) break;
      double sum = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        bool correct = round.stump.predict(d, r) == d.label(r);
        w[r] *= std::exp(correct ? -round.alpha : round.alpha);
        sum += w[r];
      }
      double misclassified = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        w[r] /= sum;
        if (round.stump.predict(d, r) != d.label(r)) misclassified += w[r];
      }
      worst_mass = std::max(worst_mass, std::fabs(misclassified - 0.5));
      if (std::fabs(misclassified - 0.5) > 1e-12)
        return fail("misclassified mass off by " +
                    fmt(std::fabs(misclassified - 0.5), 16) + " in trial " +
                    std::to_string(trial));
    }

    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= e.rounds.size(); ++t) {
      double err = boost_exponential_error(e, d, t);
      if (err >= prev + 1e-12)
        return fail("boost error rose between rounds in trial " +
                    std::to_string(trial));
      prev = err;
    }
  }
  return pass("50 datasets, max |mass - 0.5| = " + fmt(worst_mass, 16) +
              ", boost error strictly decreasing");
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_vfdt() {
  double eps = hoeffding_bound(1.0, 1e-7, 1000);
  if (std::fabs(eps - 0.08977) > 1e-5)
    return fail("bound(1, 1e-7, 1000) = " + fmt(eps, 7));

  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto eng = rng::make_engine(7000 + seed);
    std::vector<AttributeSpec> schema;
    for (int j = 0; j < 5; ++j)
      schema.push_back({"b" + std::to_string(j),
                        AttrKind::Nominal,
                        {"0", "1"},
                        AttrRole::Predictor,
                        false});
    schema.push_back(
        {"y", AttrKind::Nominal, {"0", "1"}, AttrRole::ClassLabel, false});

    HoeffdingTree tree(schema, VfdtConfig{1e-7, 0.05, 200, 10});
    const std::size_t label_attr = 3;
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> row(6);
      for (int j = 0; j < 5; ++j) row[j] = rng::uniform(eng) < 0.5 ? 1.0 : 0.0;
      int label = static_cast<int>(row[label_attr]);
      row[5] = label;
      tree.update(row, label);
    }
    if (tree.root_split_attr() == static_cast<int>(label_attr)) ++good;
  }
  std::string detail = "bound " + fmt(eps, 6) + ", correct root split in " +
                       std::to_string(good) + "/20 streams";
  return good >= 19 ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_pegasos() {
  // fixtures: several datasets, objective(model) <= objective at w = 0
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto eng = rng::make_engine(800 + seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 50; ++i) {
      int y = rng::uniform(eng) < 0.5 ? 1 : 0;
      rows.push_back({rng::normal(eng) + (y ? 1.0 : -1.0),
                      rng::normal(eng) * 0.7});
      labels.push_back(y);
    }
    auto d = numeric_dataset(rows, labels);
    PegasosConfig cfg;
    cfg.lambda = 0.05;
    cfg.iterations = 50000;
    cfg.seed = seed;
    auto m = pegasos_train(d, cfg);
    double at_zero = svm_objective(d, std::vector<double>(2, 0.0), cfg.lambda);
    if (m.final_objective > at_zero)
      return fail("objective " + fmt(m.final_objective, 6) + " above " +
                  fmt(at_zero, 6) + " for seed " + std::to_string(seed));
  }

  // separable toy set: compare with a fine grid over the same objective
  auto eng = rng::make_engine(888);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    int y = i % 2;
    rows.push_back({rng::normal(eng) * 0.4 + (y ? 2.0 : -2.0),
                    rng::normal(eng) * 0.4});
    labels.push_back(y);
  }
  auto d = numeric_dataset(rows, labels);
  const double lambda = 0.1;

  double best_grid = std::numeric_limits<double>::infinity();
  for (double w0 = -2.0; w0 <= 2.0; w0 += 0.005) {
    for (double w1 = -1.0; w1 <= 1.0; w1 += 0.005) {
      std::vector<double> w{w0, w1};
      best_grid = std::min(best_grid, svm_objective(d, w, lambda));
    }
  }

  PegasosConfig cfg;
  cfg.lambda = lambda;
  cfg.iterations = 200000;
  cfg.seed = 4;
  auto m = pegasos_train(d, cfg);
  std::string detail = "model objective " + fmt(m.final_objective, 6) +
                       " vs grid " + fmt(best_grid, 6);
  return m.final_objective <= 1.05 * best_grid ? pass(detail) : fail(detail);
}

// ---------------------------------------------------------------- criterion 9

double t_pdf(double x, int df) {
  double d = static_cast<double>(df);
  double log_c = log_gamma((d + 1.0) / 2.0) - log_gamma(d / 2.0) -
                 0.5 * std::log(d * M_PI);
  return std::exp(log_c - (d + 1.0) / 2.0 * std::log1p(x * x / d));
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

Outcome criterion_ttest() {
  // multiplier check with sample variance exactly 1: differences
  // {1.5, -1.5, 1.5, -1.5, 0...} have mean 0 and sum of squares 9
  std::vector<double> unit_var{1.5, -1.5, 1.5, -1.5, 0, 0, 0, 0, 0, 0};
  std::vector<double> zeros(10, 0.0);
  auto mres = corrected_paired_ttest(unit_var, zeros, 9.0, 1.0, 0.05);
  if (mres.corrected_variance != 19.0 / 90.0)
    return fail("variance multiplier for k=10 is not exactly 19/90 (got " +
                fmt(mres.corrected_variance, 17) + ")");

  std::vector<double> a(10), b(10);
  auto eng = rng::make_engine(909);
  for (int i = 0; i < 10; ++i) {
    a[i] = 0.72 + 0.05 * rng::uniform(eng);
    b[i] = 0.68 + 0.05 * rng::uniform(eng);
  }
  auto res = corrected_paired_ttest(a, b, 9.0, 1.0, 0.05);

  double mean = 0.0;
  for (int i = 0; i < 10; ++i) mean += (a[i] - b[i]) / 10.0;
  double ss = 0.0;
  for (int i = 0; i < 10; ++i)
    ss += ((a[i] - b[i]) - mean) * ((a[i] - b[i]) - mean);
  double variance = ss / 9.0;

  // independently coded oracle: direct formula + numerically integrated p
  double t_oracle = mean / std::sqrt(variance * (1.0 / 10.0 + 1.0 / 9.0));
  double tail = simpson([&](double x) { return t_pdf(x, 9); },
                        std::fabs(t_oracle), 120.0, 600000);
  double p_oracle = 2.0 * tail;
  if (std::fabs(res.t_statistic - t_oracle) > 1e-10)
    return fail("t differs from oracle by " +
                fmt(std::fabs(res.t_statistic - t_oracle), 14));
  if (std::fabs(res.p_value - p_oracle) > 1e-10)
    return fail("p differs from oracle by " +
                fmt(std::fabs(res.p_value - p_oracle), 14));

  auto same = corrected_paired_ttest(a, a, 9.0, 1.0, 0.05);
  if (same.t_statistic != 0.0 || same.significant)
    return fail("identical inputs not t=0/insignificant");
  return pass("multiplier exact, |t - oracle| and |p - oracle| <= 1e-10, t=" +
              fmt(res.t_statistic, 4) + " p=" + fmt(res.p_value, 6));
}

// --------------------------------------------------------------- criterion 10

Outcome criterion_boruta_recovery() {
  auto start = std::chrono::steady_clock::now();
  int good_runs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto eng = rng::make_engine(3000 + seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 500; ++i) {
      int y = rng::uniform(eng) < 0.5 ? 1 : 0;
      std::vector<double> row;
      for (int j = 0; j < 5; ++j)
        row.push_back(rng::normal(eng) + (y ? 1.0 : 0.0));
      for (int j = 0; j < 15; ++j) row.push_back(rng::normal(eng));
      rows.push_back(std::move(row));
      labels.push_back(y);
    }
    auto d = numeric_dataset(rows, labels);

    BorutaConfig cfg;
    cfg.seed = seed;
    cfg.forest.trees = 60;
    auto result = boruta_run(d, cfg);

    int confirmed = 0, rejected_noise = 0;
    for (std::size_t j = 0; j < result.features.size(); ++j) {
      if (j < 5 && result.features[j].decision == BorutaDecision::Confirmed)
        ++confirmed;
      if (j >= 5 && result.features[j].decision == BorutaDecision::Rejected)
        ++rejected_noise;
    }
    if (confirmed == 5 && rejected_noise >= 12) ++good_runs;
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::string detail = std::to_string(good_runs) + "/20 runs recovered, " +
                       fmt(elapsed, 1) + "s";
  return good_runs >= 18 && elapsed < 120.0 ? pass(detail) : fail(detail);
}

// --------------------------------------------------------------- criterion 11

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  auto data = generate_synthetic(clinical_schema(), 200, 77);
  ExperimentConfig cfg;
  cfg.models = {"zero_rule", "sgd", "vfdt", "adaboost"};
  cfg.k = 5;
  cfg.seed = 9;
  cfg.threads = 2;
  cfg.params["adaboost.rounds"] = "15";
  cfg.params["sgd.epochs"] = "100";

  auto dir1 = std::filesystem::temp_directory_path() / "meso_acc_run1";
  auto dir2 = std::filesystem::temp_directory_path() / "meso_acc_run2";
  emit_report(run_experiment_on(data, cfg), cfg, dir1.string());
  emit_report(run_experiment_on(data, cfg), cfg, dir2.string());

  bool ok = slurp(dir1.string() + "/report.csv") ==
                slurp(dir2.string() + "/report.csv") &&
            slurp(dir1.string() + "/ttest.csv") ==
                slurp(dir2.string() + "/ttest.csv");
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  return ok ? pass("report.csv and ttest.csv byte-identical across reruns")
            : fail("outputs differ between identical runs");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "majority-baseline signature", criterion_majority_baseline},
      {2, "phase-1 leak reproduction", criterion_phase1_leak},
      {3, "phase-2 real-data check", criterion_real_data},
      {4, "metric oracle equivalence", criterion_metric_oracles},
      {5, "mlp gradient check", criterion_mlp_gradients},
      {6, "adaboost invariants", criterion_adaboost_invariants},
      {7, "hoeffding bound and vfdt root split", criterion_vfdt},
      {8, "pegasos objective quality", criterion_pegasos},
      {9, "corrected t-test arithmetic", criterion_ttest},
      {10, "boruta synthetic recovery", criterion_boruta_recovery},
      {11, "end-to-end determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const char* tag = outcome.kind == Outcome::Pass   ? "PASS"
                      : outcome.kind == Outcome::Skip ? "SKIP"
                                                      : "FAIL";
    std::printf("[%s] criterion %2d (%s): %s\n", tag, c.id, c.name,
                outcome.detail.c_str());
    if (outcome.kind == Outcome::Fail) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed (skips are not failures)\n");
  return failures;
}
