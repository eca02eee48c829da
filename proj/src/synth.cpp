#include "meso/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "meso/error.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

SynthColumn numeric_col(const std::string& name, double mean, double sd,
                        double floor = 0.0, double effect = 0.0,
                        bool leak = false) {
  SynthColumn c;
  c.name = name;
  c.kind = AttrKind::Numeric;
  c.mean = mean;
  c.sd = sd;
  c.floor = floor;
  c.effect = effect;
  c.leak = leak;
  return c;
}

SynthColumn nominal_col(const std::string& name, std::vector<std::string> cats,
                        std::vector<double> probs, double effect = 0.0) {
  SynthColumn c;
  c.name = name;
  c.kind = AttrKind::Nominal;
  c.categories = std::move(cats);
  c.probs = std::move(probs);
  c.effect = effect;
  return c;
}

std::size_t sample_category(rng::Engine& eng, const std::vector<double>& probs) {
  double u = rng::uniform(eng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

}  // namespace

SynthSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("schema '" + path + "': " + e.what());
  }

  SynthSchema schema;
  schema.class_name = j.value("class_name", schema.class_name);
  if (j.contains("class_labels"))
    schema.class_labels = j["class_labels"].get<std::vector<std::string>>();
  if (schema.class_labels.size() != 2)
    throw SchemaError("schema: class_labels must have exactly 2 entries");
  schema.positive_rate = j.value("positive_rate", schema.positive_rate);
  if (schema.positive_rate <= 0.0 || schema.positive_rate >= 1.0)
    throw SchemaError("schema: positive_rate must be in (0, 1)");

  if (!j.contains("columns") || !j["columns"].is_array() || j["columns"].empty())
    throw SchemaError("schema: needs a nonempty columns array");
  for (const auto& jc : j["columns"]) {
    SynthColumn c;
    c.name = jc.at("name").get<std::string>();
    std::string kind = jc.value("kind", std::string("numeric"));
    if (kind == "numeric") {
      c.kind = AttrKind::Numeric;
      c.mean = jc.value("mean", 0.0);
      c.sd = jc.value("sd", 1.0);
      if (c.sd < 0.0) throw SchemaError("schema: sd must be >= 0 for " + c.name);
      if (jc.contains("min")) c.floor = jc["min"].get<double>();
    } else if (kind == "nominal") {
      c.kind = AttrKind::Nominal;
      c.categories = jc.at("categories").get<std::vector<std::string>>();
      if (c.categories.size() < 2)
        throw SchemaError("schema: nominal column " + c.name +
                          " needs >= 2 categories");
      if (jc.contains("probs")) {
        c.probs = jc["probs"].get<std::vector<double>>();
        if (c.probs.size() != c.categories.size())
          throw SchemaError("schema: probs/categories mismatch for " + c.name);
      }
    } else {
      throw SchemaError("schema: unknown kind '" + kind + "' for " + c.name);
    }
    c.leak = jc.value("leak", false);
    c.effect = jc.value("effect", 0.0);
    schema.columns.push_back(std::move(c));
  }
  return schema;
}

SynthSchema clinical_schema() {
  SynthSchema s;
  s.columns = {
      numeric_col("age", 54.74, 11.00, 0.0),
      nominal_col("gender", {"0", "1"}, {0.59, 0.41}, 0.35),
      nominal_col("city",
                  {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"}, {}),
      numeric_col("asbestos exposure", 0.86, 0.34, 0.0),
      numeric_col("type of MM", 0.05, 0.26, 0.0),
      numeric_col("duration of asbestos exposure", 30.18, 16.41, 0.0),
      numeric_col("diagnosis method", 0.0, 0.0, 0.0, 0.0, true),
      numeric_col("keep side", 0.75, 0.56, 0.0),
      numeric_col("cytology", 0.28, 0.45, 0.0),
      numeric_col("duration of symptoms", 5.44, 4.71, 0.0, 0.9),
      numeric_col("dyspnea", 0.81, 0.38, 0.0),
      numeric_col("ache on chest", 0.68, 0.46, 0.0),
      numeric_col("weakness", 0.61, 0.48, 0.0),
      numeric_col("habit of cigarette", 0.91, 1.15, 0.0),
      numeric_col("performance status", 0.52, 0.50, 0.0),
      numeric_col("white blood", 9457.45, 3450.73, 0.0),
      numeric_col("cell count (WBC)", 9.55, 3.34, 0.0),
      numeric_col("hemoglobin (HGB)", 0.42, 0.49, 0.0),
      numeric_col("platelet count (PLT)", 369.65, 227.55, 0.0, 1.0),
      numeric_col("sedimentation", 70.68, 21.74, 0.0),
      numeric_col("blood lactic dehydrogenise (LDH)", 308.91, 185.14, 0.0),
      numeric_col("alkaline phosphatise (ALP)", 66.16, 35.07, 0.0),
      numeric_col("total protein", 6.58, 0.82, 0.0),
      numeric_col("albumin", 3.30, 0.63, 0.0),
      numeric_col("glucose", 112.41, 38.46, 0.0),
      numeric_col("pleural lactic dehydrogenise", 518.47, 536.27, 0.0),
      numeric_col("pleural protein", 3.93, 1.57, 0.0, 0.8),
      numeric_col("pleural albumin", 2.07, 0.91, 0.0),
      numeric_col("pleural glucose", 48.44, 27.23, 0.0),
      nominal_col("dead or not", {"0", "1"}, {0.5, 0.5}),
      numeric_col("pleural effusion", 0.87, 0.33, 0.0),
      numeric_col("pleural thickness on tomography", 0.59, 0.49, 0.0),
      numeric_col("pleural level of acidity (pH)", 0.52, 0.50, 0.0),
      numeric_col("C-reactive protein (CRP)", 64.18, 22.66, 0.0, 1.2),
  };
  return s;
}

Dataset generate_synthetic(const SynthSchema& schema, std::size_t n,
                           std::uint64_t seed) {
  if (n < 20) throw Error("synthetic: need n >= 20");
  if (schema.columns.empty()) throw SchemaError("synthetic: empty schema");

  std::vector<AttributeSpec> attrs;
  for (const auto& c : schema.columns) {
    AttributeSpec a;
    a.name = c.name;
    a.kind = c.kind;
    a.categories = c.categories;
    a.role = AttrRole::Predictor;
    attrs.push_back(std::move(a));
    if (c.kind == AttrKind::Nominal && c.leak && c.categories.size() != 2)
      throw SchemaError("synthetic: nominal leak column needs 2 categories");
  }
  AttributeSpec cls;
  cls.name = schema.class_name;
  cls.kind = AttrKind::Nominal;
  cls.categories = schema.class_labels;
  cls.role = AttrRole::ClassLabel;
  attrs.push_back(std::move(cls));

  auto eng = rng::make_engine(seed);
  std::size_t width = attrs.size();
  std::vector<double> cells(n * width, 0.0);

  for (std::size_t r = 0; r < n; ++r) {
    int label = rng::uniform(eng) < schema.positive_rate ? 1 : 0;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const SynthColumn& col = schema.columns[c];
      double v;
      if (col.leak) {
        v = static_cast<double>(label);
      } else if (col.kind == AttrKind::Numeric) {
        double shift = label == 1 ? col.effect * col.sd : 0.0;
        v = rng::normal(eng, col.mean + shift, col.sd);
        v = std::max(v, col.floor);
      } else {
        std::vector<double> probs = col.probs;
        if (probs.empty())
          probs.assign(col.categories.size(),
                       1.0 / static_cast<double>(col.categories.size()));
        std::size_t cat;
        if (label == 1 && col.effect > 0.0 &&
            rng::uniform(eng) < std::min(col.effect, 1.0)) {
          cat = col.categories.size() - 1;
        } else {
          cat = sample_category(eng, probs);
        }
        v = static_cast<double>(cat);
      }
      cells[r * width + c] = v;
    }
    cells[r * width + schema.columns.size()] = static_cast<double>(label);
  }
  return Dataset(std::move(attrs), std::move(cells), n);
}

}  // namespace meso
