#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace meso {

enum class AttrKind { Numeric, Nominal };
enum class AttrRole { Predictor, ClassLabel, Excluded };

struct AttributeSpec {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
  std::vector<std::string> categories;  // nominal only, in first-appearance order
  AttrRole role = AttrRole::Predictor;
  bool shadow = false;  // permuted copy appended by the feature selector
};

/// Immutable tabular container. Cells are doubles: numeric value for
/// numeric attributes, category index for nominal ones, NaN for missing.
/// Exactly one attribute carries the (binary, nominal) class label.
/// All transforms return new datasets.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeSpec> attributes, std::vector<double> cells,
          std::size_t n_rows);

  static constexpr double missing_value() {
    return std::numeric_limits<double>::quiet_NaN();
  }
  static bool is_missing(double cell);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_attrs() const { return attrs_.size(); }
  std::size_t n_predictors() const;

  const std::vector<AttributeSpec>& attributes() const { return attrs_; }
  const AttributeSpec& attr(std::size_t i) const { return attrs_[i]; }
  double cell(std::size_t row, std::size_t col) const {
    return cells_[row * attrs_.size() + col];
  }

  std::size_t class_index() const { return class_index_; }
  const AttributeSpec& class_attr() const { return attrs_[class_index_]; }
  /// Class of row as index into class_attr().categories (0 or 1).
  int label(std::size_t row) const {
    return static_cast<int>(cell(row, class_index_));
  }
  /// Rows per class label.
  std::vector<std::size_t> class_counts() const;
  /// Label with the most rows; ties go to the higher index.
  int majority_label() const;

  /// Indices of attributes with role Predictor.
  std::vector<std::size_t> predictor_indices() const;
  /// Index of the attribute with this name (case-insensitive), or nullopt.
  std::optional<std::size_t> find_attr(const std::string& name) const;

  Dataset subset_rows(const std::vector<std::size_t>& rows) const;
  /// Keeps the class column and the named predictors only.
  Dataset keep_predictors(const std::vector<std::string>& names) const;
  /// Drops any predictor matching one of the names; unknown names ignored.
  Dataset drop_predictors(const std::vector<std::string>& names) const;
  /// New dataset with extra columns appended (cells in row-major order,
  /// n_rows x extra.size()).
  Dataset with_columns(std::vector<AttributeSpec> extra,
                       const std::vector<double>& cells) const;

 private:
  std::vector<AttributeSpec> attrs_;
  std::vector<double> cells_;  // n_rows x n_attrs, row-major
  std::size_t n_rows_ = 0;
  std::size_t class_index_ = 0;

  void validate();
};

/// Value-wise equality; missing cells compare equal to each other.
bool dataset_equal(const Dataset& a, const Dataset& b);

struct LoadOptions {
  std::string class_column = "class of diagnosis";
  std::vector<std::string> nominal_columns;  // declared nominal by name
  std::string missing_token = "?";
};

/// Reads a CSV with a header row. Column kinds are inferred (numeric when
/// every non-missing token parses as a finite double) unless declared
/// nominal. The class column is always nominal and must have exactly two
/// distinct values.
Dataset load_table(const std::string& path, const LoadOptions& options = {});

/// Writes a dataset back to CSV; missing cells become the missing token.
void save_table(const Dataset& d, const std::string& path,
                const std::string& missing_token = "?");

/// Mean-imputes numeric attributes, mode-imputes nominal ones;
/// deterministic (mode ties go to the lowest category index).
Dataset impute_missing(const Dataset& d);

/// Expands each nominal predictor with c categories into c indicator
/// columns named "<attr>=<category>"; numeric columns pass through.
Dataset one_hot_encode(const Dataset& d);

struct ColumnScaling {
  std::size_t column = 0;
  double mean = 0.0;
  double sd = 1.0;
  bool scaled = true;  // false for constant columns, left untouched
};

struct ScalingParams {
  std::vector<ColumnScaling> columns;
  std::vector<std::string> warnings;
};

struct StandardizeResult {
  Dataset data;
  ScalingParams params;
};

/// Shifts/scales every numeric predictor to sample mean 0, sample sd 1.
/// Constant columns are left unscaled and recorded as warnings.
StandardizeResult standardize(const Dataset& d);

/// Applies previously fitted scaling parameters (for held-out folds).
Dataset apply_scaling(const Dataset& d, const ScalingParams& params);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  // per-row fold index in [0, k)
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Stratified k-fold plan: per class, a seeded shuffle followed by
/// round-robin assignment with a fold cursor carried across classes, so
/// fold sizes differ by at most one and per-fold class counts stay within
/// one of the proportional share.
FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

enum class Phase { Phase1, Phase2 };

/// Phase-1 keeps every predictor except "dead or not"; phase-2 further
/// drops the post-diagnosis attributes ("diagnosis method", "type of MM",
/// "keep side") and, when a whitelist is given, keeps only those
/// predictors. Unknown whitelist names raise SchemaError.
Dataset select_phase(const Dataset& d, Phase phase,
                     const std::vector<std::string>* feature_whitelist = nullptr);

struct ProfileEntry {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
  double mean = std::numeric_limits<double>::quiet_NaN();       // numeric only
  double deviation = std::numeric_limits<double>::quiet_NaN();  // numeric only
  double association = 0.0;  // |point-biserial| or Cramer's V vs class
};

struct ProfileReport {
  std::vector<ProfileEntry> entries;  // one per predictor
};

/// Per-predictor mean, sample deviation, and class association in [0,1].
ProfileReport profile(const Dataset& d);

/// Table-shaped CSV: Predictor,Mean,Deviation,Association ("NA" where
/// undefined).
void write_profile_csv(const ProfileReport& report, const std::string& path);

}  // namespace meso
