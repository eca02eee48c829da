#include <doctest.h>

#include <algorithm>
#include <set>

#include "meso/boruta.hpp"
#include "meso/error.hpp"
#include "meso/rng.hpp"
#include "test_util.hpp"

using namespace meso;

namespace {

// n rows, n_informative shifted columns then n_noise iid columns
Dataset informative_noise_dataset(std::size_t n, std::size_t n_informative,
                                  std::size_t n_noise, double shift,
                                  std::uint64_t seed) {
  auto eng = rng::make_engine(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    int label = rng::uniform(eng) < 0.5 ? 1 : 0;
    std::vector<double> row;
    for (std::size_t j = 0; j < n_informative; ++j)
      row.push_back(rng::normal(eng) + (label == 1 ? shift : 0.0));
    for (std::size_t j = 0; j < n_noise; ++j) row.push_back(rng::normal(eng));
    rows.push_back(std::move(row));
    labels.push_back(label);
  }
  return test::numeric_dataset(rows, labels);
}

}  // namespace

TEST_CASE("shadow_augment doubles the predictors with permutations") {
  auto d = test::label_noise_dataset(50, 3, true, 0.5, 4);
  auto aug = shadow_augment(d, 11);
  CHECK(aug.n_predictors() == 2 * d.n_predictors());

  for (std::size_t c = 0; c < aug.n_attrs(); ++c) {
    const auto& a = aug.attr(c);
    if (!a.shadow) continue;
    CHECK(a.name.rfind("shadow_", 0) == 0);
    std::string source = a.name.substr(7);
    auto src = aug.find_attr(source);
    REQUIRE(src.has_value());
    std::multiset<double> original, shadow;
    for (std::size_t r = 0; r < aug.n_rows(); ++r) {
      original.insert(aug.cell(r, *src));
      shadow.insert(aug.cell(r, c));
    }
    CHECK(original == shadow);
  }

  // the shadow of a constant column is the column itself
  auto constant = test::numeric_dataset({{5.0}, {5.0}, {5.0}, {5.0}}, {0, 1, 0, 1});
  auto caug = shadow_augment(constant, 3);
  auto shadow_col = caug.find_attr("shadow_x0");
  REQUIRE(shadow_col.has_value());
  for (std::size_t r = 0; r < 4; ++r) CHECK(caug.cell(r, *shadow_col) == 5.0);
}

TEST_CASE("boruta_step flags a leaked label nearly always") {
  auto d = test::label_noise_dataset(150, 4, true, 0.4, 9);
  ForestConfig forest;
  forest.trees = 100;
  int hits = 0;
  for (std::uint64_t iter = 0; iter < 20; ++iter) {
    auto step = boruta_step(d, forest, rng::derive(300, iter));
    REQUIRE(step.hit.size() == d.n_predictors());
    hits += step.hit[0];
  }
  CHECK(hits >= 19);
}

TEST_CASE("boruta_step on pure noise hits rarely") {
  auto d = test::label_noise_dataset(100, 5, false, 0.5, 10);
  ForestConfig forest;
  forest.trees = 30;
  int total_hits = 0, total_flags = 0;
  for (std::uint64_t iter = 0; iter < 30; ++iter) {
    auto step = boruta_step(d, forest, rng::derive(77, iter));
    for (auto h : step.hit) {
      total_hits += h;
      ++total_flags;
    }
  }
  CHECK(static_cast<double>(total_hits) / static_cast<double>(total_flags) < 0.5);
}

TEST_CASE("boruta_run recovers informative features and drops noise") {
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    auto d = informative_noise_dataset(500, 5, 15, 1.2, 1000 + seed);
    BorutaConfig cfg;
    cfg.seed = seed;
    cfg.forest.trees = 60;
    auto result = boruta_run(d, cfg);

    int confirmed_informative = 0, rejected_noise = 0;
    for (std::size_t j = 0; j < result.features.size(); ++j) {
      const auto& f = result.features[j];
      CHECK(f.hits <= f.trials);
      CHECK(f.name.rfind("shadow_", 0) != 0);
      if (j < 5 && f.decision == BorutaDecision::Confirmed)
        ++confirmed_informative;
      if (j >= 5 && f.decision == BorutaDecision::Rejected) ++rejected_noise;
      // full-evidence features are never rejected
      if (f.hits == f.trials && f.trials >= 8)
        CHECK(f.decision != BorutaDecision::Rejected);
    }
    CHECK(confirmed_informative == 5);
    CHECK(rejected_noise >= 12);
  }
}

TEST_CASE("a perfect predictor confirms at the earliest possible trial") {
  auto d = test::label_noise_dataset(200, 6, true, 0.5, 21);
  BorutaConfig cfg;
  cfg.seed = 5;
  cfg.forest.trees = 50;
  auto result = boruta_run(d, cfg);
  CHECK(result.features[0].decision == BorutaDecision::Confirmed);
  // two-sided binomial at 0.01 resolves all-hits at 8 trials
  CHECK(result.features[0].decided_iteration <= 10);
  for (const auto& f : result.features) {
    if (f.decided_iteration > 0)
      CHECK(f.decided_iteration >= result.features[0].decided_iteration);
  }
}

TEST_CASE("boruta_run is deterministic") {
  auto d = informative_noise_dataset(200, 2, 6, 1.5, 7);
  BorutaConfig cfg;
  cfg.seed = 99;
  cfg.forest.trees = 40;
  auto a = boruta_run(d, cfg);
  auto b = boruta_run(d, cfg);
  REQUIRE(a.features.size() == b.features.size());
  CHECK(a.iterations == b.iterations);
  for (std::size_t j = 0; j < a.features.size(); ++j) {
    CHECK(a.features[j].decision == b.features[j].decision);
    CHECK(a.features[j].hits == b.features[j].hits);
    CHECK(a.features[j].z_history == b.features[j].z_history);
  }
  CHECK(a.max_shadow_z_history == b.max_shadow_z_history);
}

TEST_CASE("removing a rejected feature keeps confirmations stable") {
  auto d = informative_noise_dataset(300, 3, 5, 1.5, 55);
  BorutaConfig cfg;
  cfg.seed = 3;
  cfg.forest.trees = 50;
  auto first = boruta_run(d, cfg);

  std::vector<std::string> confirmed_before = first.confirmed_names();
  REQUIRE(!confirmed_before.empty());
  std::string dropped;
  for (const auto& f : first.features)
    if (f.decision == BorutaDecision::Rejected) dropped = f.name;
  REQUIRE(!dropped.empty());

  auto reduced = d.drop_predictors({dropped});
  auto second = boruta_run(reduced, cfg);
  for (const auto& name : confirmed_before) {
    for (const auto& f : second.features)
      if (f.name == name) CHECK(f.decision == BorutaDecision::Confirmed);
  }
}
