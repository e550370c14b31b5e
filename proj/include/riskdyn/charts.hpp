#pragma once

#include <string>
#include <vector>

#include "riskdyn/data_model.hpp"
#include "riskdyn/preprocess.hpp"

namespace riskdyn {

struct YearSummary {
  int year = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

std::vector<YearSummary> yearly_summary(const Dataset& dataset, Indicator variable);

/// Line chart of the per-year mean with a min/max band. Throws EmptyDataset.
std::string emit_temporal_chart(const Dataset& dataset, Indicator variable);

/// Scatter of a two-column projection colored by label, with one center marker
/// (cluster mean coordinate) per label. Throws DimensionMismatch.
std::string emit_cluster_scatter(const FeatureMatrix& projection, const std::vector<int>& labels);

}  // namespace riskdyn
