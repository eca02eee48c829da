#include "meso/boruta.hpp"

#include <algorithm>
#include <fstream>

#include "meso/csv.hpp"
#include "meso/error.hpp"
#include "meso/metrics.hpp"
#include "meso/rng.hpp"

namespace meso {

std::string to_string(BorutaDecision d) {
  switch (d) {
    case BorutaDecision::Confirmed: return "Confirmed";
    case BorutaDecision::Rejected: return "Rejected";
    case BorutaDecision::Tentative: return "Tentative";
  }
  return "?";
}

double BorutaFeature::median_z() const {
  if (z_history.empty()) return 0.0;
  std::vector<double> sorted = z_history;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

std::vector<std::string> BorutaResult::confirmed_names() const {
  std::vector<std::string> out;
  for (const auto& f : features)
    if (f.decision == BorutaDecision::Confirmed) out.push_back(f.name);
  return out;
}

Dataset shadow_augment(const Dataset& d, std::uint64_t seed) {
  auto predictors = d.predictor_indices();
  if (predictors.empty()) throw SchemaError("shadow augment: no predictors");

  std::vector<AttributeSpec> extra;
  std::vector<double> cells(d.n_rows() * predictors.size());
  auto eng = rng::make_engine(seed);
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    std::size_t src = predictors[j];
    AttributeSpec spec = d.attr(src);
    spec.name = "shadow_" + spec.name;
    spec.shadow = true;
    extra.push_back(std::move(spec));

    auto perm = rng::permutation(d.n_rows(), eng);
    for (std::size_t r = 0; r < d.n_rows(); ++r)
      cells[r * predictors.size() + j] = d.cell(perm[r], src);
  }
  return d.with_columns(std::move(extra), cells);
}

BorutaStep boruta_step(const Dataset& d, const ForestConfig& forest_cfg,
                       std::uint64_t seed) {
  Dataset augmented = shadow_augment(d, rng::derive(seed, 0));

  ForestConfig cfg = forest_cfg;
  cfg.seed = rng::derive(seed, 1);
  Forest forest = forest_train(augmented, cfg);
  auto z = forest_importance(forest, augmented, rng::derive(seed, 2));

  BorutaStep step;
  step.max_shadow_z = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < augmented.n_attrs(); ++c)
    if (augmented.attr(c).shadow)
      step.max_shadow_z = std::max(step.max_shadow_z, z[c]);

  for (std::size_t c : augmented.predictor_indices()) {
    if (augmented.attr(c).shadow) continue;
    step.z.push_back(z[c]);
    step.hit.push_back(z[c] > step.max_shadow_z ? 1 : 0);
  }
  return step;
}

BorutaResult boruta_run(const Dataset& d, const BorutaConfig& cfg) {
  if (cfg.max_iterations < 1) throw Error("boruta: max iterations must be >= 1");
  if (cfg.p_value <= 0.0 || cfg.p_value >= 0.5)
    throw Error("boruta: p-value must be in (0, 0.5)");

  BorutaResult result;
  std::vector<std::string> pool;  // names of still-active predictors
  for (std::size_t c : d.predictor_indices()) {
    BorutaFeature f;
    f.name = d.attr(c).name;
    result.features.push_back(std::move(f));
    pool.push_back(d.attr(c).name);
  }

  auto feature_by_name = [&](const std::string& name) -> BorutaFeature& {
    for (auto& f : result.features)
      if (f.name == name) return f;
    throw Error("boruta: unknown feature '" + name + "'");
  };

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    bool any_tentative = false;
    for (const auto& f : result.features)
      if (f.decision == BorutaDecision::Tentative) any_tentative = true;
    if (!any_tentative) break;

    Dataset active = d.keep_predictors(pool);
    BorutaStep step =
        boruta_step(active, cfg.forest,
                    rng::derive(cfg.seed, static_cast<std::uint64_t>(iter)));
    result.max_shadow_z_history.push_back(step.max_shadow_z);
    ++result.iterations;

    // dataset predictor order matches pool content but not necessarily its
    // order; map by position in active's predictor list
    auto active_predictors = active.predictor_indices();
    std::vector<std::string> rejected_now;
    for (std::size_t j = 0; j < active_predictors.size(); ++j) {
      BorutaFeature& f = feature_by_name(active.attr(active_predictors[j]).name);
      f.z_history.push_back(step.z[j]);
      ++f.trials;
      f.hits += step.hit[j];
      if (f.decision != BorutaDecision::Tentative) continue;

      double p = binomial_two_sided_p(f.hits, f.trials);
      if (p < cfg.p_value) {
        f.decided_iteration = iter + 1;
        if (2 * f.hits > f.trials) {
          f.decision = BorutaDecision::Confirmed;
        } else {
          f.decision = BorutaDecision::Rejected;
          rejected_now.push_back(f.name);
        }
      }
    }

    for (const auto& name : rejected_now)
      pool.erase(std::remove(pool.begin(), pool.end(), name), pool.end());
    if (pool.empty()) break;
  }
  return result;
}

void write_boruta_csv(const BorutaResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "feature,decision,median_z,hits,trials\n";
  for (const auto& f : result.features) {
    std::vector<std::string> fields{f.name, to_string(f.decision),
                                    csv::format_double(f.median_z()),
                                    std::to_string(f.hits),
                                    std::to_string(f.trials)};
    out << csv::join(fields) << '\n';
  }
}

}  // namespace meso
