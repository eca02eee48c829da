#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "meso/dataset.hpp"

namespace meso {

/// One column of a synthetic-table schema. Numeric columns draw from
/// Normal(mean, sd) clamped at `floor`; nominal columns draw categories
/// from `probs`. A leak column copies the class label. `effect` makes a
/// column weakly informative: numeric positives shift by effect*sd,
/// nominal positives pick the last category with that probability.
struct SynthColumn {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
  double mean = 0.0;
  double sd = 1.0;
  double floor = -std::numeric_limits<double>::infinity();
  std::vector<std::string> categories;
  std::vector<double> probs;  // empty = uniform over categories
  bool leak = false;
  double effect = 0.0;
};

struct SynthSchema {
  std::string class_name = "class of diagnosis";
  std::vector<std::string> class_labels = {"0", "1"};
  double positive_rate = 0.2962;  // 96 of 324
  std::vector<SynthColumn> columns;
};

/// Reads a schema from JSON (see data/clinical_schema.json for the shape).
SynthSchema load_schema(const std::string& path);

/// Built-in schema mirroring the clinical table's marginals, with the
/// diagnosis-method leak column and weak effects on the five relevant
/// pre-diagnosis predictors.
SynthSchema clinical_schema();

/// Deterministic draw of n rows; identical (schema, n, seed) give
/// identical datasets (and byte-identical CSVs via save_table).
Dataset generate_synthetic(const SynthSchema& schema, std::size_t n,
                           std::uint64_t seed);

}  // namespace meso
