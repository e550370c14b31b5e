#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskdyn/classifiers.hpp"
#include "riskdyn/clustering.hpp"
#include "riskdyn/data_model.hpp"
#include "riskdyn/label_spreading.hpp"
#include "riskdyn/preprocess.hpp"
#include "riskdyn/scenario.hpp"

namespace riskdyn {

enum class SpreadScope { All, Train };
enum class LabelSource { Transduction, KMeans };

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir = "riskdyn-out";
  SchemaConfig schema;
  OutlierConfig outliers;
  KMeansConfig kmeans;
  SpreadConfig spread;
  SpreadScope spread_scope = SpreadScope::All;
  ExperimentConfig experiment;
  LabelSource label_source = LabelSource::Transduction;
  std::vector<Horizon> horizons = {Horizon::One, Horizon::Three, Horizon::Five};
  std::vector<ModelKind> models = {ModelKind::Forest, ModelKind::Tree, ModelKind::Boosted, ModelKind::Logistic};
  ModelKind scenario_model = ModelKind::Logistic;
  std::uint64_t seed = 42;

  /// Throws InvalidConfig.
  void validate() const;
  /// Stage seeds derived from `seed` by stage name.
  PipelineConfig with_derived_seeds() const;
};

/// Unknown keys are rejected with InvalidConfig.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
nlohmann::ordered_json config_to_json(const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Stage functions, shared by the full run and the CLI subcommands.

struct ClusterStage {
  Standardized standardized;  // six indicators
  ClusterModel model;
  ClusterValidityReport validity;
};

ClusterStage run_cluster_stage(const Dataset& dataset, const KMeansConfig& config);

/// Rows eligible for hiding under the configured scope.
std::vector<bool> hide_eligibility(const Dataset& dataset, SpreadScope scope);

TransductionRun run_spread_stage(const Dataset& dataset, const FeatureMatrix& standardized,
                                 const std::vector<int>& labels, const SpreadConfig& config, SpreadScope scope);

LabelTable label_table(const std::vector<RowKey>& rows, const std::vector<int>& labels);

/// Reads per-(country, year) labels from clusters.json ("assignments") or
/// transduction.json ("rows").
LabelTable read_label_table(const std::filesystem::path& path);

std::vector<HorizonExperiment> run_classification_stage(const Dataset& dataset, const LabelTable& labels,
                                                        const std::vector<Horizon>& horizons,
                                                        const std::vector<ModelKind>& models,
                                                        const ExperimentConfig& config);

TransitionReport run_scenario_stage(const std::vector<HorizonExperiment>& experiments, const LabelTable& labels,
                                    ModelKind scenario_model, int k);

/// Writes via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// ---------------------------------------------------------------------------

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  nlohmann::ordered_json config;
  std::size_t row_count = 0;
  int first_year = 0;
  int last_year = 0;
  std::string content_hash;  // FNV-1a 64 of the input bytes, hex
  std::vector<std::pair<std::string, std::filesystem::path>> artifacts;
  std::vector<StageTiming> timings;
  bool complete = false;
  std::string failed_stage;
  std::string failure;

  nlohmann::ordered_json to_json() const;
};

/// load -> outliers -> standardize -> kmeans -> label spreading -> per-horizon
/// classification -> scenario report -> charts. On failure the manifest is still
/// written (flagged partial) and the error is rethrown with the stage name.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace riskdyn
