#include "meso/harness.hpp"

#include <algorithm>
#include <map>

#include "meso/error.hpp"

namespace meso {

FoldOutcome evaluate_fold(const Learner& learner, const Dataset& d,
                          const FoldPlan& plan, std::size_t fold, int positive) {
  if (plan.assignment.size() != d.n_rows())
    throw Error("fold plan was not built on this dataset");

  FoldOutcome out;
  out.fold = fold;
  out.rows = plan.test_rows(fold);

  std::unique_ptr<Classifier> model;
  try {
    model = learner.fit(d.subset_rows(plan.train_rows(fold)));
  } catch (const std::exception& e) {
    throw Error("learner '" + learner.name() + "' failed on fold " +
                std::to_string(fold) + ": " + e.what());
  }

  std::size_t correct = 0;
  for (std::size_t r : out.rows) {
    ProbPair p = model->predict_row(d, r);
    double score_pos = positive == 1 ? p.pos : p.neg;
    int truth = d.label(r) == positive ? 1 : 0;
    int pred = p.argmax() == positive ? 1 : 0;
    out.scores.push_back(score_pos);
    out.truths.push_back(truth);
    out.predicted.push_back(pred);
    if (pred == truth) ++correct;
  }
  out.accuracy = out.rows.empty()
                     ? 0.0
                     : static_cast<double>(correct) / static_cast<double>(out.rows.size());
  return out;
}

EvalReport assemble_report(const std::string& model, const FoldPlan& plan,
                           std::vector<FoldOutcome> outcomes) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const FoldOutcome& a, const FoldOutcome& b) { return a.fold < b.fold; });

  // pool by ascending global row index so the result is independent of the
  // order folds were evaluated in
  std::map<std::size_t, std::pair<double, std::pair<int, int>>> by_row;
  for (const auto& o : outcomes)
    for (std::size_t i = 0; i < o.rows.size(); ++i)
      by_row[o.rows[i]] = {o.scores[i], {o.truths[i], o.predicted[i]}};

  std::vector<double> scores;
  std::vector<int> truths, predicted;
  for (const auto& [row, v] : by_row) {
    scores.push_back(v.first);
    truths.push_back(v.second.first);
    predicted.push_back(v.second.second);
  }

  EvalReport report;
  report.model = model;
  report.plan_seed = plan.seed;
  auto m = basic_metrics(confusion(predicted, truths, 1));
  report.accuracy = m.accuracy;
  report.precision = m.precision;
  report.recall = m.recall;
  report.f_measure = m.f_measure;
  report.rmse = rmse(scores, truths);

  // Threshold-curve areas are averaged over folds: scores produced by
  // different fold models are not rank-comparable, and pooling them lets
  // fold-level score offsets masquerade as discrimination.
  double roc_sum = 0.0, prc_sum = 0.0;
  for (const auto& o : outcomes) {
    roc_sum += roc_auc(o.scores, o.truths);
    prc_sum += prc_auc(o.scores, o.truths);
  }
  report.roc_auc = roc_sum / static_cast<double>(outcomes.size());
  report.prc_auc = prc_sum / static_cast<double>(outcomes.size());

  for (const auto& o : outcomes) report.fold_accuracies.push_back(o.accuracy);
  return report;
}

EvalReport cross_validate(const Learner& learner, const Dataset& d,
                          const FoldPlan& plan, int positive) {
  std::vector<FoldOutcome> outcomes;
  outcomes.reserve(plan.k);
  for (std::size_t f = 0; f < plan.k; ++f)
    outcomes.push_back(evaluate_fold(learner, d, plan, f, positive));
  return assemble_report(learner.name(), plan, std::move(outcomes));
}

}  // namespace meso
