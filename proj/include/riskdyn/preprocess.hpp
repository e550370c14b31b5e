#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "riskdyn/data_model.hpp"

namespace riskdyn {

// Dense row-major-by-meaning matrix: one row per (country, year), named columns.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<RowKey> rows;
  std::vector<std::string> columns;

  Eigen::Index n_rows() const noexcept { return values.rows(); }
  Eigen::Index n_cols() const noexcept { return values.cols(); }
};

/// The six indicators as columns, rows in dataset order.
FeatureMatrix indicator_matrix(const Dataset& dataset);

/// (v - mean) / stddev with the population standard deviation.
/// Throws TooFewValues (n < 2) and ZeroVariance.
std::vector<double> zscore(std::span<const double> values);

struct OutlierConfig {
  double threshold = 3.0;
  std::vector<Indicator> variables = {Indicator::Wri, Indicator::Exposure};
};

struct OutlierFlag {
  std::string country;
  int year = 0;
  Indicator variable = Indicator::Wri;
  double zscore = 0.0;
};

struct OutlierReport {
  std::vector<OutlierFlag> flagged;
  std::set<std::string> distinct_countries;
};

/// Flags every (record, variable) with |z| > threshold, z pooled over all years.
OutlierReport detect_outliers(const Dataset& dataset, const OutlierConfig& config = {});

void write_outliers_csv(std::ostream& out, const OutlierReport& report);
std::string outliers_json(const OutlierReport& report, const OutlierConfig& config);

struct StandardizationParams {
  std::vector<std::string> columns;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  /// Applies the stored transform; throws DimensionMismatch on a column-count mismatch.
  FeatureMatrix apply(const FeatureMatrix& matrix) const;
  FeatureMatrix inverse(const FeatureMatrix& matrix) const;
};

struct Standardized {
  FeatureMatrix matrix;
  StandardizationParams params;
};

/// Column-wise population z-scores. Throws ZeroVariance naming the column.
Standardized standardize(const FeatureMatrix& matrix);

/// Standardizes only the listed columns (by index); others pass through with mean 0, stddev 1.
Standardized standardize_columns(const FeatureMatrix& matrix, const std::vector<Eigen::Index>& which);

struct EncodingConfig {
  bool include_indicators = true;
  bool include_year = true;
  bool include_region = true;
  bool include_categories = true;
  // Unseen categories at transform time: all-zero encoding, or UnknownCategory when strict.
  bool strict = false;
};

// One-hot vocabularies learned from a fitting dataset. Numeric columns first
// (six indicators, then Year), then one-hot groups in fixed order: Region,
// Exposure Category, WRI Category, Vulnerability Category, Susceptibility Category.
// Values inside a group are sorted by name.
class FeatureEncoder {
 public:
  static FeatureEncoder fit(const Dataset& dataset, const EncodingConfig& config = {});

  FeatureMatrix transform(const Dataset& dataset) const;

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  /// Indices of the continuous columns (indicators and year).
  std::vector<Eigen::Index> numeric_columns() const;
  /// [begin, end) column range of each one-hot group, keyed by group name.
  const std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>>& groups() const noexcept {
    return groups_;
  }

 private:
  EncodingConfig config_;
  std::vector<std::string> columns_;
  std::size_t numeric_count_ = 0;
  std::vector<std::vector<std::string>> vocab_;
  std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>> groups_;
};

inline FeatureMatrix encode_features(const Dataset& dataset, const EncodingConfig& config = {}) {
  return FeatureEncoder::fit(dataset, config).transform(dataset);
}

struct PcaModel {
  Eigen::MatrixXd components;          // n_components x n_features, orthonormal rows
  Eigen::VectorXd explained_variance;  // non-increasing, population normalization
  Eigen::VectorXd column_means;
  double total_variance = 0.0;

  Eigen::VectorXd explained_variance_ratio() const;
};

/// Principal axes by SVD of the centered matrix. Each component is signed so its
/// largest-magnitude entry is positive. Throws RankDeficient when n_components
/// exceeds the numerical rank, InvalidConfig when it exceeds min(rows-1, cols).
PcaModel pca_fit(const FeatureMatrix& matrix, int n_components);
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& matrix);
FeatureMatrix pca_inverse_transform(const PcaModel& model, const FeatureMatrix& projected);

}  // namespace riskdyn
