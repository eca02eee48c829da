#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meso/dataset.hpp"
#include "meso/trees.hpp"

namespace meso {

struct BorutaConfig {
  int max_iterations = 100;
  double p_value = 0.01;  // two-sided binomial decision threshold
  ForestConfig forest;    // forest.seed is ignored; per-iteration seeds derive
                          // from the config seed
  std::uint64_t seed = 0;
};

enum class BorutaDecision { Confirmed, Rejected, Tentative };

std::string to_string(BorutaDecision d);

struct BorutaFeature {
  std::string name;
  BorutaDecision decision = BorutaDecision::Tentative;
  int hits = 0;
  int trials = 0;
  int decided_iteration = -1;  // 1-based; -1 while Tentative
  std::vector<double> z_history;  // one entry per participating iteration
  double median_z() const;
};

struct BorutaResult {
  std::vector<BorutaFeature> features;  // one per input predictor
  std::vector<double> max_shadow_z_history;
  int iterations = 0;

  std::vector<std::string> confirmed_names() const;
};

/// Appends one shadow column per predictor: a seeded permutation of the
/// original values, flagged as shadow and named "shadow_<attr>".
Dataset shadow_augment(const Dataset& d, std::uint64_t seed);

struct BorutaStep {
  std::vector<std::uint8_t> hit;  // per real predictor, in predictor order
  std::vector<double> z;
  double max_shadow_z = 0.0;
};

/// One iteration: shadow-augment with the given seed, train a forest,
/// compute importances; a real feature scores a hit iff its Z exceeds the
/// maximum shadow Z.
BorutaStep boruta_step(const Dataset& d, const ForestConfig& forest,
                       std::uint64_t seed);

/// Iterates boruta_step, deciding features by a two-sided binomial test on
/// accumulated hits (success probability 0.5); rejected features leave the
/// pool. Stops once nothing is Tentative or the iteration cap is reached
/// (remaining Tentative features are reported as such).
BorutaResult boruta_run(const Dataset& d, const BorutaConfig& cfg);

/// Decision table: name, decision, median Z, hits, trials.
void write_boruta_csv(const BorutaResult& result, const std::string& path);

}  // namespace meso
