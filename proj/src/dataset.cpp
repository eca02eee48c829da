#include "meso/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "meso/csv.hpp"
#include "meso/error.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

// Attributes dropped before any analysis, and the additional post-diagnosis
// attributes unavailable in the low-cost phase.
const std::vector<std::string> kAlwaysExcluded = {"dead or not"};
const std::vector<std::string> kPostDiagnosis = {"diagnosis method",
                                                 "type of mm", "keep side"};

}  // namespace

Dataset::Dataset(std::vector<AttributeSpec> attributes, std::vector<double> cells,
                 std::size_t n_rows)
    : attrs_(std::move(attributes)), cells_(std::move(cells)), n_rows_(n_rows) {
  validate();
}

void Dataset::validate() {
  if (cells_.size() != n_rows_ * attrs_.size())
    throw SchemaError("dataset cell grid does not match rows x attributes");
  std::size_t n_class = 0;
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    const auto& a = attrs_[i];
    if (a.kind == AttrKind::Nominal && a.categories.size() < 2)
      throw SchemaError("nominal attribute '" + a.name +
                        "' needs at least 2 categories");
    if (a.kind == AttrKind::Numeric && !a.categories.empty())
      throw SchemaError("numeric attribute '" + a.name + "' carries categories");
    if (a.role == AttrRole::ClassLabel) {
      ++n_class;
      class_index_ = i;
    }
  }
  if (n_class != 1) throw SchemaError("dataset must have exactly one class attribute");
  if (attrs_[class_index_].kind != AttrKind::Nominal ||
      attrs_[class_index_].categories.size() != 2)
    throw SchemaError("class attribute must be nominal with exactly 2 values");
}

bool Dataset::is_missing(double cell) { return std::isnan(cell); }

std::size_t Dataset::n_predictors() const { return predictor_indices().size(); }

std::vector<std::size_t> Dataset::predictor_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < attrs_.size(); ++i)
    if (attrs_[i].role == AttrRole::Predictor) out.push_back(i);
  return out;
}

std::optional<std::size_t> Dataset::find_attr(const std::string& name) const {
  std::string target = lower(name);
  for (std::size_t i = 0; i < attrs_.size(); ++i)
    if (lower(attrs_[i].name) == target) return i;
  return std::nullopt;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_attr().categories.size(), 0);
  for (std::size_t r = 0; r < n_rows_; ++r) ++counts[static_cast<std::size_t>(label(r))];
  return counts;
}

int Dataset::majority_label() const {
  auto counts = class_counts();
  int best = 0;
  for (int i = 1; i < static_cast<int>(counts.size()); ++i)
    if (counts[i] >= counts[best]) best = i;
  return best;
}

Dataset Dataset::subset_rows(const std::vector<std::size_t>& rows) const {
  std::vector<double> cells;
  cells.reserve(rows.size() * attrs_.size());
  for (std::size_t r : rows)
    for (std::size_t c = 0; c < attrs_.size(); ++c) cells.push_back(cell(r, c));
  return Dataset(attrs_, std::move(cells), rows.size());
}

Dataset Dataset::keep_predictors(const std::vector<std::string>& names) const {
  std::set<std::size_t> keep;
  for (const auto& n : names) {
    auto idx = find_attr(n);
    if (!idx || attrs_[*idx].role != AttrRole::Predictor)
      throw SchemaError("unknown predictor '" + n + "'");
    keep.insert(*idx);
  }
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < attrs_.size(); ++i)
    if (i == class_index_ || keep.count(i)) cols.push_back(i);

  std::vector<AttributeSpec> attrs;
  for (std::size_t c : cols) attrs.push_back(attrs_[c]);
  std::vector<double> cells;
  cells.reserve(n_rows_ * cols.size());
  for (std::size_t r = 0; r < n_rows_; ++r)
    for (std::size_t c : cols) cells.push_back(cell(r, c));
  return Dataset(std::move(attrs), std::move(cells), n_rows_);
}

Dataset Dataset::drop_predictors(const std::vector<std::string>& names) const {
  std::set<std::string> drop;
  for (const auto& n : names) drop.insert(lower(n));
  std::vector<std::string> keep;
  for (const auto& a : attrs_)
    if (a.role == AttrRole::Predictor && !drop.count(lower(a.name)))
      keep.push_back(a.name);
  return keep_predictors(keep);
}

Dataset Dataset::with_columns(std::vector<AttributeSpec> extra,
                              const std::vector<double>& extra_cells) const {
  if (extra_cells.size() != n_rows_ * extra.size())
    throw SchemaError("appended cell grid does not match rows x columns");
  std::vector<AttributeSpec> attrs = attrs_;
  for (auto& a : extra) attrs.push_back(std::move(a));
  std::vector<double> cells;
  cells.reserve(n_rows_ * attrs.size());
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (std::size_t c = 0; c < attrs_.size(); ++c) cells.push_back(cell(r, c));
    for (std::size_t c = 0; c < extra.size(); ++c)
      cells.push_back(extra_cells[r * extra.size() + c]);
  }
  return Dataset(std::move(attrs), std::move(cells), n_rows_);
}

bool dataset_equal(const Dataset& a, const Dataset& b) {
  if (a.n_rows() != b.n_rows() || a.n_attrs() != b.n_attrs()) return false;
  for (std::size_t i = 0; i < a.n_attrs(); ++i) {
    const auto& x = a.attr(i);
    const auto& y = b.attr(i);
    if (x.name != y.name || x.kind != y.kind || x.role != y.role) return false;
  }
  // value-wise: nominal cells compare by category string, so two category
  // orderings of the same data are equal
  for (std::size_t r = 0; r < a.n_rows(); ++r)
    for (std::size_t c = 0; c < a.n_attrs(); ++c) {
      double u = a.cell(r, c), v = b.cell(r, c);
      if (Dataset::is_missing(u) != Dataset::is_missing(v)) return false;
      if (Dataset::is_missing(u)) continue;
      if (a.attr(c).kind == AttrKind::Nominal) {
        if (a.attr(c).categories[static_cast<std::size_t>(u)] !=
            b.attr(c).categories[static_cast<std::size_t>(v)])
          return false;
      } else if (u != v) {
        return false;
      }
    }
  return true;
}

Dataset load_table(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  std::vector<std::vector<std::string>> raw;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;  // blank line
    raw.push_back(csv::split_line(line));
  }
  if (raw.empty()) throw SchemaError("empty file '" + path + "'");

  const auto& header = raw.front();
  std::size_t n_cols = header.size();
  std::size_t n_rows = raw.size() - 1;
  if (n_rows == 0) throw SchemaError("no data rows in '" + path + "'");

  for (std::size_t r = 1; r < raw.size(); ++r)
    if (raw[r].size() != n_cols)
      throw ParseError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(raw[r].size()) + " fields, expected " +
                       std::to_string(n_cols));

  std::size_t class_col = n_cols;
  for (std::size_t c = 0; c < n_cols; ++c)
    if (lower(header[c]) == lower(options.class_column)) class_col = c;
  if (class_col == n_cols)
    throw SchemaError("class column '" + options.class_column + "' not found");

  std::set<std::string> declared_nominal;
  for (const auto& n : options.nominal_columns) declared_nominal.insert(lower(n));

  std::vector<AttributeSpec> attrs(n_cols);
  std::vector<double> cells(n_rows * n_cols, Dataset::missing_value());

  for (std::size_t c = 0; c < n_cols; ++c) {
    AttributeSpec& spec = attrs[c];
    spec.name = header[c];
    spec.role = (c == class_col) ? AttrRole::ClassLabel : AttrRole::Predictor;

    bool numeric = c != class_col && !declared_nominal.count(lower(spec.name));
    if (numeric) {
      double v;
      for (std::size_t r = 0; r < n_rows && numeric; ++r) {
        const std::string& tok = raw[r + 1][c];
        if (tok == options.missing_token || tok.empty()) continue;
        if (!parse_double(tok, v)) numeric = false;
      }
    }

    if (numeric) {
      spec.kind = AttrKind::Numeric;
      for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& tok = raw[r + 1][c];
        if (tok == options.missing_token || tok.empty()) continue;
        double v;
        parse_double(tok, v);
        cells[r * n_cols + c] = v;
      }
    } else {
      spec.kind = AttrKind::Nominal;
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& tok = raw[r + 1][c];
        if (tok == options.missing_token || tok.empty()) {
          if (c == class_col)
            throw SchemaError("missing class label at row " + std::to_string(r + 2));
          continue;
        }
        auto it = index.find(tok);
        if (it == index.end()) {
          it = index.emplace(tok, spec.categories.size()).first;
          spec.categories.push_back(tok);
        }
        cells[r * n_cols + c] = static_cast<double>(it->second);
      }
      if (c == class_col) {
        if (spec.categories.size() < 2)
          throw SchemaError("single-class dataset: class column '" + spec.name +
                            "' has one distinct value");
        if (spec.categories.size() > 2)
          throw SchemaError("class column '" + spec.name + "' has " +
                            std::to_string(spec.categories.size()) +
                            " distinct values, expected 2");
      }
      if (spec.categories.size() < 2) {
        // degenerate constant text column; keep it loadable by padding a
        // phantom category that no row uses
        if (spec.categories.empty()) spec.categories.push_back("?");
        spec.categories.push_back(spec.categories.back() + "_");
      }
    }
  }

  return Dataset(std::move(attrs), std::move(cells), n_rows);
}

void save_table(const Dataset& d, const std::string& path,
                const std::string& missing_token) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  std::vector<std::string> fields;
  for (const auto& a : d.attributes()) fields.push_back(a.name);
  out << csv::join(fields) << '\n';
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    fields.clear();
    for (std::size_t c = 0; c < d.n_attrs(); ++c) {
      double v = d.cell(r, c);
      if (Dataset::is_missing(v)) {
        fields.push_back(missing_token);
      } else if (d.attr(c).kind == AttrKind::Nominal) {
        fields.push_back(d.attr(c).categories[static_cast<std::size_t>(v)]);
      } else {
        fields.push_back(csv::format_double(v));
      }
    }
    out << csv::join(fields) << '\n';
  }
}

Dataset impute_missing(const Dataset& d) {
  std::vector<double> cells;
  cells.reserve(d.n_rows() * d.n_attrs());
  for (std::size_t r = 0; r < d.n_rows(); ++r)
    for (std::size_t c = 0; c < d.n_attrs(); ++c) cells.push_back(d.cell(r, c));

  for (std::size_t c = 0; c < d.n_attrs(); ++c) {
    const auto& a = d.attr(c);
    bool any_missing = false;
    for (std::size_t r = 0; r < d.n_rows(); ++r)
      if (Dataset::is_missing(d.cell(r, c))) any_missing = true;
    if (!any_missing) continue;

    double fill;
    if (a.kind == AttrKind::Numeric) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < d.n_rows(); ++r) {
        double v = d.cell(r, c);
        if (!Dataset::is_missing(v)) {
          sum += v;
          ++n;
        }
      }
      if (n == 0) throw SchemaError("attribute '" + a.name + "' is entirely missing");
      fill = sum / static_cast<double>(n);
    } else {
      std::vector<std::size_t> counts(a.categories.size(), 0);
      std::size_t n = 0;
      for (std::size_t r = 0; r < d.n_rows(); ++r) {
        double v = d.cell(r, c);
        if (!Dataset::is_missing(v)) {
          ++counts[static_cast<std::size_t>(v)];
          ++n;
        }
      }
      if (n == 0) throw SchemaError("attribute '" + a.name + "' is entirely missing");
      std::size_t best = 0;
      for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[best]) best = i;
      fill = static_cast<double>(best);
    }
    for (std::size_t r = 0; r < d.n_rows(); ++r)
      if (Dataset::is_missing(cells[r * d.n_attrs() + c]))
        cells[r * d.n_attrs() + c] = fill;
  }
  return Dataset(d.attributes(), std::move(cells), d.n_rows());
}

Dataset one_hot_encode(const Dataset& d) {
  bool any_nominal_predictor = false;
  for (const auto& a : d.attributes())
    if (a.role == AttrRole::Predictor && a.kind == AttrKind::Nominal)
      any_nominal_predictor = true;
  if (!any_nominal_predictor) return d;

  std::vector<AttributeSpec> attrs;
  std::vector<std::pair<std::size_t, int>> sources;  // (source col, category or -1)
  for (std::size_t c = 0; c < d.n_attrs(); ++c) {
    const auto& a = d.attr(c);
    if (a.role == AttrRole::Predictor && a.kind == AttrKind::Nominal) {
      for (std::size_t k = 0; k < a.categories.size(); ++k) {
        AttributeSpec ind;
        ind.name = a.name + "=" + a.categories[k];
        ind.kind = AttrKind::Numeric;
        ind.role = AttrRole::Predictor;
        ind.shadow = a.shadow;
        attrs.push_back(std::move(ind));
        sources.emplace_back(c, static_cast<int>(k));
      }
    } else {
      attrs.push_back(a);
      sources.emplace_back(c, -1);
    }
  }

  std::vector<double> cells;
  cells.reserve(d.n_rows() * attrs.size());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (const auto& [src, cat] : sources) {
      double v = d.cell(r, src);
      if (cat < 0) {
        cells.push_back(v);
      } else if (Dataset::is_missing(v)) {
        cells.push_back(0.0);
      } else {
        cells.push_back(static_cast<int>(v) == cat ? 1.0 : 0.0);
      }
    }
  }
  return Dataset(std::move(attrs), std::move(cells), d.n_rows());
}

StandardizeResult standardize(const Dataset& d) {
  ScalingParams params;
  for (std::size_t c = 0; c < d.n_attrs(); ++c) {
    const auto& a = d.attr(c);
    if (a.role != AttrRole::Predictor || a.kind != AttrKind::Numeric) continue;

    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      double v = d.cell(r, c);
      if (Dataset::is_missing(v)) continue;
      sum += v;
      ++n;
    }
    ColumnScaling cs;
    cs.column = c;
    if (n == 0) {
      cs.scaled = false;
      params.warnings.push_back("column '" + a.name + "' has no values; unscaled");
      params.columns.push_back(cs);
      continue;
    }
    cs.mean = sum / static_cast<double>(n);
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      double v = d.cell(r, c);
      if (Dataset::is_missing(v)) continue;
      sum2 += (v - cs.mean) * (v - cs.mean);
    }
    double sd = n > 1 ? std::sqrt(sum2 / static_cast<double>(n - 1)) : 0.0;
    if (sd == 0.0) {
      cs.scaled = false;
      params.warnings.push_back("column '" + a.name + "' is constant; unscaled");
    } else {
      cs.sd = sd;
    }
    params.columns.push_back(cs);
  }
  return {apply_scaling(d, params), std::move(params)};
}

Dataset apply_scaling(const Dataset& d, const ScalingParams& params) {
  std::vector<double> cells;
  cells.reserve(d.n_rows() * d.n_attrs());
  for (std::size_t r = 0; r < d.n_rows(); ++r)
    for (std::size_t c = 0; c < d.n_attrs(); ++c) cells.push_back(d.cell(r, c));

  for (const auto& cs : params.columns) {
    if (!cs.scaled) continue;
    if (cs.column >= d.n_attrs())
      throw SchemaError("scaling refers to column beyond dataset width");
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      double& v = cells[r * d.n_attrs() + cs.column];
      if (!Dataset::is_missing(v)) v = (v - cs.mean) / cs.sd;
    }
  }
  return Dataset(d.attributes(), std::move(cells), d.n_rows());
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignment.size(); ++r)
    if (assignment[r] == fold) out.push_back(r);
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignment.size(); ++r)
    if (assignment[r] != fold) out.push_back(r);
  return out;
}

FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw SchemaError("k must be at least 2");
  auto counts = d.class_counts();
  for (std::size_t cls = 0; cls < counts.size(); ++cls)
    if (counts[cls] < k)
      throw SchemaError("class '" + d.class_attr().categories[cls] + "' has " +
                        std::to_string(counts[cls]) + " rows, fewer than k=" +
                        std::to_string(k));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(d.n_rows(), 0);

  auto eng = rng::make_engine(seed);
  std::size_t cursor = 0;
  for (std::size_t cls = 0; cls < counts.size(); ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < d.n_rows(); ++r)
      if (d.label(r) == static_cast<int>(cls)) members.push_back(r);
    rng::shuffle(members, eng);
    for (std::size_t m : members) {
      plan.assignment[m] = cursor % k;
      ++cursor;
    }
  }
  return plan;
}

Dataset select_phase(const Dataset& d, Phase phase,
                     const std::vector<std::string>* feature_whitelist) {
  Dataset out = d.drop_predictors(kAlwaysExcluded);
  if (phase == Phase::Phase2) {
    out = out.drop_predictors(kPostDiagnosis);
    if (feature_whitelist) out = out.keep_predictors(*feature_whitelist);
  } else if (feature_whitelist) {
    out = out.keep_predictors(*feature_whitelist);
  }
  return out;
}

namespace {

double point_biserial(const Dataset& d, std::size_t col) {
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    double x = d.cell(r, col);
    if (Dataset::is_missing(x)) continue;
    double y = static_cast<double>(d.label(r));
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  double nn = static_cast<double>(n);
  double cov = sxy - sx * sy / nn;
  double vx = sxx - sx * sx / nn;
  double vy = syy - sy * sy / nn;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return std::fabs(cov / std::sqrt(vx * vy));
}

double cramers_v(const Dataset& d, std::size_t col) {
  std::size_t n_cat = d.attr(col).categories.size();
  std::vector<double> table(n_cat * 2, 0.0);
  std::size_t n = 0;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    double v = d.cell(r, col);
    if (Dataset::is_missing(v)) continue;
    table[static_cast<std::size_t>(v) * 2 + static_cast<std::size_t>(d.label(r))] += 1.0;
    ++n;
  }
  if (n == 0) return 0.0;
  std::vector<double> row_tot(n_cat, 0.0);
  double col_tot[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n_cat; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      row_tot[i] += table[i * 2 + j];
      col_tot[j] += table[i * 2 + j];
    }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n_cat; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double expected = row_tot[i] * col_tot[j] / static_cast<double>(n);
      if (expected > 0.0) {
        double diff = table[i * 2 + j] - expected;
        chi2 += diff * diff / expected;
      }
    }
  // binary class: min(rows, cols) - 1 == 1
  double v2 = chi2 / static_cast<double>(n);
  return std::sqrt(std::min(1.0, v2));
}

}  // namespace

ProfileReport profile(const Dataset& d) {
  ProfileReport report;
  for (std::size_t c : d.predictor_indices()) {
    const auto& a = d.attr(c);
    ProfileEntry e;
    e.name = a.name;
    e.kind = a.kind;
    if (a.kind == AttrKind::Numeric) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < d.n_rows(); ++r) {
        double v = d.cell(r, c);
        if (!Dataset::is_missing(v)) {
          sum += v;
          ++n;
        }
      }
      if (n > 0) {
        e.mean = sum / static_cast<double>(n);
        double sum2 = 0.0;
        for (std::size_t r = 0; r < d.n_rows(); ++r) {
          double v = d.cell(r, c);
          if (!Dataset::is_missing(v)) sum2 += (v - e.mean) * (v - e.mean);
        }
        e.deviation = n > 1 ? std::sqrt(sum2 / static_cast<double>(n - 1)) : 0.0;
      }
      e.association = point_biserial(d, c);
    } else {
      e.association = cramers_v(d, c);
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

void write_profile_csv(const ProfileReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "Predictor,Mean,Deviation,Association\n";
  for (const auto& e : report.entries) {
    std::vector<std::string> fields;
    fields.push_back(e.name);
    fields.push_back(std::isnan(e.mean) ? "NA" : csv::format_double(e.mean));
    fields.push_back(std::isnan(e.deviation) ? "NA" : csv::format_double(e.deviation));
    fields.push_back(csv::format_double(e.association));
    out << csv::join(fields) << '\n';
  }
}

}  // namespace meso
