#include "riskdyn/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"

namespace riskdyn {

FeatureMatrix indicator_matrix(const Dataset& dataset) {
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(dataset.size()), 6);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto f = record_features(dataset[i]);
    for (Eigen::Index j = 0; j < 6; ++j) m.values(static_cast<Eigen::Index>(i), j) = f[j];
  }
  m.rows = dataset.keys();
  for (Indicator ind : kIndicators) m.columns.emplace_back(indicator_name(ind));
  return m;
}

namespace {

// Fixed-order two-pass mean and population standard deviation.
std::pair<double, double> moments(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::pair<double, double> column_moments(const Eigen::MatrixXd& m, Eigen::Index col) {
  std::vector<double> v(m.col(col).data(), m.col(col).data() + m.rows());
  return moments(v);
}

}  // namespace

std::vector<double> zscore(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewValues, "z-score needs at least 2 values");
  const auto [mean, sd] = moments(values);
  if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "constant series");
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
  return out;
}

OutlierReport detect_outliers(const Dataset& dataset, const OutlierConfig& config) {
  if (!(config.threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "outlier threshold must be > 0");
  if (config.variables.empty()) throw Error(ErrorCode::InvalidConfig, "no outlier variables");
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "outlier detection");

  OutlierReport report;
  for (Indicator var : config.variables) {
    std::vector<double> values;
    values.reserve(dataset.size());
    for (const auto& r : dataset.records()) values.push_back(r.indicator(var));
    std::vector<double> z;
    try {
      z = zscore(values);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(indicator_name(var)) + ": " + e.what());
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (std::abs(z[i]) > config.threshold) {
        report.flagged.push_back({dataset[i].country, dataset[i].year, var, z[i]});
        report.distinct_countries.insert(dataset[i].country);
      }
    }
  }
  return report;
}

void write_outliers_csv(std::ostream& out, const OutlierReport& report) {
  out << "country,year,variable,zscore\n";
  for (const auto& f : report.flagged) {
    out << csv::join_row({f.country, std::to_string(f.year), std::string(indicator_name(f.variable)),
                          csv::format_fixed(f.zscore, 6)})
        << '\n';
  }
}

std::string outliers_json(const OutlierReport& report, const OutlierConfig& config) {
  nlohmann::ordered_json j;
  j["threshold"] = config.threshold;
  auto& vars = j["variables"] = nlohmann::ordered_json::array();
  for (Indicator v : config.variables) vars.push_back(std::string(indicator_name(v)));
  auto& flagged = j["flagged"] = nlohmann::ordered_json::array();
  for (const auto& f : report.flagged) {
    flagged.push_back({{"country", f.country},
                       {"year", f.year},
                       {"variable", std::string(indicator_name(f.variable))},
                       {"zscore", f.zscore}});
  }
  j["distinct_countries"] = report.distinct_countries;
  return j.dump(2);
}

FeatureMatrix StandardizationParams::apply(const FeatureMatrix& matrix) const {
  if (matrix.n_cols() != mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "standardization expects " + std::to_string(mean.size()) +
                                                  " columns, got " + std::to_string(matrix.n_cols()));
  }
  FeatureMatrix out = matrix;
  for (Eigen::Index j = 0; j < out.n_cols(); ++j) {
    out.values.col(j) = (out.values.col(j).array() - mean(j)) / stddev(j);
  }
  return out;
}

FeatureMatrix StandardizationParams::inverse(const FeatureMatrix& matrix) const {
  if (matrix.n_cols() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "inverse standardization");
  FeatureMatrix out = matrix;
  for (Eigen::Index j = 0; j < out.n_cols(); ++j) {
    out.values.col(j) = out.values.col(j).array() * stddev(j) + mean(j);
  }
  return out;
}

Standardized standardize_columns(const FeatureMatrix& matrix, const std::vector<Eigen::Index>& which) {
  StandardizationParams p;
  p.columns = matrix.columns;
  p.mean = Eigen::VectorXd::Zero(matrix.n_cols());
  p.stddev = Eigen::VectorXd::Ones(matrix.n_cols());
  for (Eigen::Index j : which) {
    if (matrix.n_rows() < 1) throw Error(ErrorCode::TooFewRows, "standardize");
    const auto [mean, sd] = column_moments(matrix.values, j);
    if (!(sd > 0.0)) {
      const std::string name = j < static_cast<Eigen::Index>(matrix.columns.size())
                                   ? matrix.columns[static_cast<std::size_t>(j)]
                                   : std::to_string(j);
      throw Error(ErrorCode::ZeroVariance, "column " + name);
    }
    p.mean(j) = mean;
    p.stddev(j) = sd;
  }
  return {p.apply(matrix), std::move(p)};
}

Standardized standardize(const FeatureMatrix& matrix) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(matrix.n_cols()));
  for (Eigen::Index j = 0; j < matrix.n_cols(); ++j) all[static_cast<std::size_t>(j)] = j;
  return standardize_columns(matrix, all);
}

namespace {

constexpr const char* kGroupNames[5] = {"Region", "Exposure Category", "WRI Category", "Vulnerability Category",
                                        "Susceptibility Category"};

const std::string& group_value(const CountryYearRecord& r, std::size_t group) {
  switch (group) {
    case 0: return r.region;
    case 1: return r.exposure_cat;
    case 2: return r.wri_cat;
    case 3: return r.vulnerability_cat;
    default: return r.susceptibility_cat;
  }
}

std::string display_value(const std::string& v) { return v.empty() ? "(missing)" : v; }

}  // namespace

FeatureEncoder FeatureEncoder::fit(const Dataset& dataset, const EncodingConfig& config) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "encode_features");
  FeatureEncoder enc;
  enc.config_ = config;
  if (config.include_indicators) {
    for (Indicator ind : kIndicators) enc.columns_.emplace_back(indicator_name(ind));
  }
  if (config.include_year) enc.columns_.emplace_back("Year");
  enc.numeric_count_ = enc.columns_.size();

  for (std::size_t g = 0; g < 5; ++g) {
    const bool wanted = g == 0 ? config.include_region : config.include_categories;
    if (!wanted) continue;
    std::set<std::string> values;
    for (const auto& r : dataset.records()) values.insert(group_value(r, g));
    const auto begin = static_cast<Eigen::Index>(enc.columns_.size());
    for (const auto& v : values) enc.columns_.push_back(std::string(kGroupNames[g]) + "=" + display_value(v));
    enc.vocab_.emplace_back(values.begin(), values.end());
    enc.groups_.push_back({kGroupNames[g], {begin, static_cast<Eigen::Index>(enc.columns_.size())}});
  }
  return enc;
}

std::vector<Eigen::Index> FeatureEncoder::numeric_columns() const {
  std::vector<Eigen::Index> out(numeric_count_);
  for (std::size_t i = 0; i < numeric_count_; ++i) out[i] = static_cast<Eigen::Index>(i);
  return out;
}

FeatureMatrix FeatureEncoder::transform(const Dataset& dataset) const {
  FeatureMatrix m;
  m.columns = columns_;
  m.rows = dataset.keys();
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dataset.size()),
                                   static_cast<Eigen::Index>(columns_.size()));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& r = dataset[i];
    const auto row = static_cast<Eigen::Index>(i);
    Eigen::Index col = 0;
    if (config_.include_indicators) {
      for (double v : record_features(r)) m.values(row, col++) = v;
    }
    if (config_.include_year) m.values(row, col++) = static_cast<double>(r.year);

    std::size_t v = 0;
    for (std::size_t g = 0; g < 5; ++g) {
      const bool wanted = g == 0 ? config_.include_region : config_.include_categories;
      if (!wanted) continue;
      const auto& vocab = vocab_[v];
      const auto& value = group_value(r, g);
      const auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
      if (it != vocab.end() && *it == value) {
        m.values(row, groups_[v].second.first + (it - vocab.begin())) = 1.0;
      } else if (config_.strict) {
        throw Error(ErrorCode::UnknownCategory, std::string(kGroupNames[g]) + "='" + value + "'");
      }
      ++v;
    }
  }
  return m;
}

Eigen::VectorXd PcaModel::explained_variance_ratio() const {
  if (total_variance <= 0.0) return Eigen::VectorXd::Zero(explained_variance.size());
  return explained_variance / total_variance;
}

PcaModel pca_fit(const FeatureMatrix& matrix, int n_components) {
  const Eigen::Index n = matrix.n_rows();
  const Eigen::Index d = matrix.n_cols();
  if (n_components < 1 || n_components > std::min(n - 1, d)) {
    throw Error(ErrorCode::InvalidConfig, "n_components=" + std::to_string(n_components) +
                                              " must lie in [1, min(rows-1, cols)]");
  }
  PcaModel model;
  model.column_means = matrix.values.colwise().mean().transpose();
  const Eigen::MatrixXd centered = matrix.values.rowwise() - model.column_means.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = std::max<double>(static_cast<double>(std::max(n, d)) * s(0) *
                                          std::numeric_limits<double>::epsilon(),
                                      std::numeric_limits<double>::min());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > tol ? 1 : 0;
  if (n_components > rank) {
    throw Error(ErrorCode::RankDeficient, "requested " + std::to_string(n_components) +
                                              " components but matrix rank is " + std::to_string(rank));
  }

  model.components = svd.matrixV().leftCols(n_components).transpose();
  for (Eigen::Index c = 0; c < n_components; ++c) {
    Eigen::Index arg = 0;
    model.components.row(c).cwiseAbs().maxCoeff(&arg);
    if (model.components(c, arg) < 0.0) model.components.row(c) *= -1.0;
  }
  const double denom = static_cast<double>(n);
  model.explained_variance = s.head(n_components).array().square() / denom;
  model.total_variance = s.array().square().sum() / denom;
  return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& matrix) {
  if (matrix.n_cols() != model.components.cols()) throw Error(ErrorCode::DimensionMismatch, "pca_transform");
  FeatureMatrix out;
  out.rows = matrix.rows;
  out.values = (matrix.values.rowwise() - model.column_means.transpose()) * model.components.transpose();
  for (Eigen::Index c = 0; c < model.components.rows(); ++c) out.columns.push_back("PC" + std::to_string(c + 1));
  return out;
}

FeatureMatrix pca_inverse_transform(const PcaModel& model, const FeatureMatrix& projected) {
  if (projected.n_cols() != model.components.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "pca_inverse_transform");
  }
  FeatureMatrix out;
  out.rows = projected.rows;
  out.values = (projected.values * model.components).rowwise() + model.column_means.transpose();
  return out;
}

}  // namespace riskdyn
