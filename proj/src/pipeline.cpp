#include "riskdyn/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iterator>
#include <set>
#include <sstream>

#include "riskdyn/charts.hpp"
#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/evaluation.hpp"
#include "riskdyn/random.hpp"

namespace riskdyn {

using nlohmann::json;
using nlohmann::ordered_json;

void PipelineConfig::validate() const {
  kmeans.validate();
  spread.validate();
  if (!(outliers.threshold > 0.0) || outliers.variables.empty()) {
    throw Error(ErrorCode::InvalidConfig, "outlier threshold must be > 0 with at least one variable");
  }
  if (horizons.empty()) throw Error(ErrorCode::InvalidConfig, "no horizons selected");
  if (models.empty()) throw Error(ErrorCode::InvalidConfig, "no models selected");
  if (schema.min_year > schema.max_year) throw Error(ErrorCode::InvalidConfig, "min_year > max_year");
  if (std::find(models.begin(), models.end(), scenario_model) == models.end()) {
    throw Error(ErrorCode::InvalidConfig, "scenario model '" + std::string(model_name(scenario_model)) +
                                              "' is not among the selected models");
  }
}

PipelineConfig PipelineConfig::with_derived_seeds() const {
  PipelineConfig out = *this;
  out.kmeans.seed = derive_seed(seed, "kmeans");
  out.spread.seed = derive_seed(seed, "spread");
  out.experiment.models.tree.seed = derive_seed(seed, "tree");
  out.experiment.models.forest.seed = derive_seed(seed, "forest");
  return out;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig config_from_json(const json& j, PipelineConfig c) {
  try {
    check_keys(j, {"input", "output_dir", "seed", "columns", "min_year", "max_year", "outliers", "kmeans", "spread",
                   "classification", "horizons", "models", "scenario_model"},
               "config");
    if (j.contains("input")) c.input = j.at("input").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    read(j, "seed", c.seed);
    read(j, "min_year", c.schema.min_year);
    read(j, "max_year", c.schema.max_year);
    if (j.contains("columns")) {
      const auto& cj = j.at("columns");
      auto& m = c.schema.columns;
      check_keys(cj, {"country", "region", "wri", "exposure", "vulnerability", "susceptibility", "lack_coping",
                      "lack_adaptive", "year", "exposure_cat", "wri_cat", "vulnerability_cat", "susceptibility_cat"},
                 "columns");
      read(cj, "country", m.country);
      read(cj, "region", m.region);
      read(cj, "wri", m.wri);
      read(cj, "exposure", m.exposure);
      read(cj, "vulnerability", m.vulnerability);
      read(cj, "susceptibility", m.susceptibility);
      read(cj, "lack_coping", m.lack_coping);
      read(cj, "lack_adaptive", m.lack_adaptive);
      read(cj, "year", m.year);
      read(cj, "exposure_cat", m.exposure_cat);
      read(cj, "wri_cat", m.wri_cat);
      read(cj, "vulnerability_cat", m.vulnerability_cat);
      read(cj, "susceptibility_cat", m.susceptibility_cat);
    }
    if (j.contains("outliers")) {
      const auto& oj = j.at("outliers");
      check_keys(oj, {"threshold", "variables"}, "outliers");
      read(oj, "threshold", c.outliers.threshold);
      if (oj.contains("variables")) {
        c.outliers.variables.clear();
        for (const auto& v : oj.at("variables")) {
          const auto ind = parse_indicator(v.get<std::string>());
          if (!ind) throw Error(ErrorCode::UnknownVariable, v.get<std::string>());
          c.outliers.variables.push_back(*ind);
        }
      }
    }
    if (j.contains("kmeans")) {
      const auto& kj = j.at("kmeans");
      check_keys(kj, {"k", "n_restarts", "max_iter", "tol"}, "kmeans");
      read(kj, "k", c.kmeans.k);
      read(kj, "n_restarts", c.kmeans.n_restarts);
      read(kj, "max_iter", c.kmeans.max_iter);
      read(kj, "tol", c.kmeans.tol);
    }
    if (j.contains("spread")) {
      const auto& sj = j.at("spread");
      check_keys(sj, {"n_neighbors", "alpha", "max_iter", "tol", "hide_fraction", "scope"}, "spread");
      read(sj, "n_neighbors", c.spread.n_neighbors);
      read(sj, "alpha", c.spread.alpha);
      read(sj, "max_iter", c.spread.max_iter);
      read(sj, "tol", c.spread.tol);
      read(sj, "hide_fraction", c.spread.hide_fraction);
      if (sj.contains("scope")) {
        const auto s = sj.at("scope").get<std::string>();
        if (s == "all") {
          c.spread_scope = SpreadScope::All;
        } else if (s == "train") {
          c.spread_scope = SpreadScope::Train;
        } else {
          throw Error(ErrorCode::InvalidConfig, "spread.scope must be 'all' or 'train'");
        }
      }
    }
    if (j.contains("classification")) {
      const auto& cj = j.at("classification");
      check_keys(cj, {"label_source", "include_year", "include_region", "include_categories", "strict_categories",
                      "overlapping_five_year", "final_year", "logistic", "tree", "forest", "boosted"},
                 "classification");
      auto& e = c.experiment;
      if (cj.contains("label_source")) {
        const auto s = cj.at("label_source").get<std::string>();
        if (s == "transduction") {
          c.label_source = LabelSource::Transduction;
        } else if (s == "kmeans") {
          c.label_source = LabelSource::KMeans;
        } else {
          throw Error(ErrorCode::InvalidConfig, "label_source must be 'transduction' or 'kmeans'");
        }
      }
      read(cj, "include_year", e.encoding.include_year);
      read(cj, "include_region", e.encoding.include_region);
      read(cj, "include_categories", e.encoding.include_categories);
      read(cj, "strict_categories", e.encoding.strict);
      read(cj, "overlapping_five_year", e.overlapping_five_year);
      if (cj.contains("final_year") && !cj.at("final_year").is_null()) e.final_year = cj.at("final_year").get<int>();
      if (cj.contains("logistic")) {
        const auto& m = cj.at("logistic");
        check_keys(m, {"lambda", "tol", "max_iter"}, "logistic");
        read(m, "lambda", e.models.logistic.lambda);
        read(m, "tol", e.models.logistic.tol);
        read(m, "max_iter", e.models.logistic.max_iter);
      }
      if (cj.contains("tree")) {
        const auto& m = cj.at("tree");
        check_keys(m, {"max_depth", "min_samples_split"}, "tree");
        read(m, "max_depth", e.models.tree.max_depth);
        read(m, "min_samples_split", e.models.tree.min_samples_split);
      }
      if (cj.contains("forest")) {
        const auto& m = cj.at("forest");
        check_keys(m, {"n_trees", "bootstrap", "max_features", "max_depth", "min_samples_split"}, "forest");
        read(m, "n_trees", e.models.forest.n_trees);
        read(m, "bootstrap", e.models.forest.bootstrap);
        read(m, "max_features", e.models.forest.max_features);
        read(m, "max_depth", e.models.forest.max_depth);
        read(m, "min_samples_split", e.models.forest.min_samples_split);
      }
      if (cj.contains("boosted")) {
        const auto& m = cj.at("boosted");
        check_keys(m, {"n_rounds", "learning_rate", "max_depth", "min_samples_split", "newton_leaves", "leaf_lambda"},
                   "boosted");
        read(m, "n_rounds", e.models.boosted.n_rounds);
        read(m, "learning_rate", e.models.boosted.learning_rate);
        read(m, "max_depth", e.models.boosted.max_depth);
        read(m, "min_samples_split", e.models.boosted.min_samples_split);
        read(m, "newton_leaves", e.models.boosted.newton_leaves);
        read(m, "leaf_lambda", e.models.boosted.leaf_lambda);
      }
    }
    if (j.contains("horizons")) {
      c.horizons.clear();
      for (const auto& h : j.at("horizons")) {
        const auto parsed = parse_horizon(h.is_number() ? std::to_string(h.get<int>()) : h.get<std::string>());
        if (!parsed) throw Error(ErrorCode::InvalidConfig, "unknown horizon " + h.dump());
        c.horizons.push_back(*parsed);
      }
    }
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) {
        const auto parsed = parse_model(m.get<std::string>());
        if (!parsed) throw Error(ErrorCode::InvalidConfig, "unknown model " + m.dump());
        c.models.push_back(*parsed);
      }
    }
    if (j.contains("scenario_model")) {
      const auto parsed = parse_model(j.at("scenario_model").get<std::string>());
      if (!parsed) throw Error(ErrorCode::InvalidConfig, "unknown scenario_model");
      c.scenario_model = *parsed;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

ordered_json config_to_json(const PipelineConfig& c) {
  const auto& m = c.schema.columns;
  const auto& e = c.experiment;
  ordered_json j;
  j["input"] = c.input.string();
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["columns"] = {{"country", m.country},
                  {"region", m.region},
                  {"wri", m.wri},
                  {"exposure", m.exposure},
                  {"vulnerability", m.vulnerability},
                  {"susceptibility", m.susceptibility},
                  {"lack_coping", m.lack_coping},
                  {"lack_adaptive", m.lack_adaptive},
                  {"year", m.year},
                  {"exposure_cat", m.exposure_cat},
                  {"wri_cat", m.wri_cat},
                  {"vulnerability_cat", m.vulnerability_cat},
                  {"susceptibility_cat", m.susceptibility_cat}};
  j["min_year"] = c.schema.min_year;
  j["max_year"] = c.schema.max_year;
  auto vars = ordered_json::array();
  for (Indicator v : c.outliers.variables) vars.push_back(std::string(indicator_name(v)));
  j["outliers"] = {{"threshold", c.outliers.threshold}, {"variables", vars}};
  j["kmeans"] = {{"k", c.kmeans.k}, {"n_restarts", c.kmeans.n_restarts}, {"max_iter", c.kmeans.max_iter},
                 {"tol", c.kmeans.tol}};
  j["spread"] = {{"n_neighbors", c.spread.n_neighbors},
                 {"alpha", c.spread.alpha},
                 {"max_iter", c.spread.max_iter},
                 {"tol", c.spread.tol},
                 {"hide_fraction", c.spread.hide_fraction},
                 {"scope", c.spread_scope == SpreadScope::All ? "all" : "train"}};
  j["classification"] = {
      {"label_source", c.label_source == LabelSource::Transduction ? "transduction" : "kmeans"},
      {"include_year", e.encoding.include_year},
      {"include_region", e.encoding.include_region},
      {"include_categories", e.encoding.include_categories},
      {"strict_categories", e.encoding.strict},
      {"overlapping_five_year", e.overlapping_five_year},
      {"final_year", e.final_year ? ordered_json(*e.final_year) : ordered_json(nullptr)},
      {"logistic",
       {{"lambda", e.models.logistic.lambda}, {"tol", e.models.logistic.tol}, {"max_iter", e.models.logistic.max_iter}}},
      {"tree", {{"max_depth", e.models.tree.max_depth}, {"min_samples_split", e.models.tree.min_samples_split}}},
      {"forest",
       {{"n_trees", e.models.forest.n_trees},
        {"bootstrap", e.models.forest.bootstrap},
        {"max_features", e.models.forest.max_features},
        {"max_depth", e.models.forest.max_depth},
        {"min_samples_split", e.models.forest.min_samples_split}}},
      {"boosted",
       {{"n_rounds", e.models.boosted.n_rounds},
        {"learning_rate", e.models.boosted.learning_rate},
        {"max_depth", e.models.boosted.max_depth},
        {"min_samples_split", e.models.boosted.min_samples_split},
        {"newton_leaves", e.models.boosted.newton_leaves},
        {"leaf_lambda", e.models.boosted.leaf_lambda}}}};
  auto hs = ordered_json::array();
  for (Horizon h : c.horizons) hs.push_back(horizon_years(h));
  j["horizons"] = hs;
  auto ms = ordered_json::array();
  for (ModelKind k : c.models) ms.push_back(std::string(model_name(k)));
  j["models"] = ms;
  j["scenario_model"] = std::string(model_name(c.scenario_model));
  return j;
}

// ---------------------------------------------------------------------------

ClusterStage run_cluster_stage(const Dataset& dataset, const KMeansConfig& config) {
  ClusterStage stage;
  stage.standardized = standardize(indicator_matrix(dataset));
  stage.model = kmeans_fit(stage.standardized.matrix, config);
  if (config.k >= 2) stage.validity = cluster_validity(stage.standardized.matrix.values, stage.model.assignments);
  return stage;
}

std::vector<bool> hide_eligibility(const Dataset& dataset, SpreadScope scope) {
  std::vector<bool> out(dataset.size(), true);
  if (scope == SpreadScope::Train && !dataset.empty()) {
    const int last = dataset.years().back();
    for (std::size_t i = 0; i < dataset.size(); ++i) out[i] = dataset[i].year < last;
  }
  return out;
}

TransductionRun run_spread_stage(const Dataset& dataset, const FeatureMatrix& standardized,
                                 const std::vector<int>& labels, const SpreadConfig& config, SpreadScope scope) {
  return transduce_full(standardized.values, labels, config, hide_eligibility(dataset, scope));
}

LabelTable label_table(const std::vector<RowKey>& rows, const std::vector<int>& labels) {
  if (rows.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "rows vs labels");
  LabelTable t;
  for (std::size_t i = 0; i < rows.size(); ++i) t.emplace(rows[i], labels[i]);
  return t;
}

LabelTable read_label_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  try {
    const json j = json::parse(in);
    const char* key = j.contains("assignments") ? "assignments" : "rows";
    const char* field = j.contains("assignments") ? "cluster" : "label";
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, path.string() + ": no assignments or rows");
    LabelTable t;
    for (const auto& row : j.at(key)) {
      t.emplace(RowKey{row.at("country").get<std::string>(), row.at("year").get<int>()}, row.at(field).get<int>());
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

std::vector<HorizonExperiment> run_classification_stage(const Dataset& dataset, const LabelTable& labels,
                                                        const std::vector<Horizon>& horizons,
                                                        const std::vector<ModelKind>& models,
                                                        const ExperimentConfig& config) {
  std::vector<std::future<HorizonExperiment>> jobs;
  for (Horizon h : horizons) {
    for (ModelKind m : models) {
      jobs.push_back(std::async(std::launch::async, [&dataset, &labels, &config, h, m] {
        return run_horizon_experiment(dataset, h, m, labels, config);
      }));
    }
  }
  std::vector<HorizonExperiment> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

TransitionReport run_scenario_stage(const std::vector<HorizonExperiment>& experiments, const LabelTable& labels,
                                    ModelKind scenario_model, int k) {
  std::vector<ScenarioInput> inputs;
  for (const auto& e : experiments) {
    if (e.result.model == scenario_model) inputs.push_back(scenario_input(e, labels));
  }
  return build_transition_report(inputs, k);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "rename to " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["status"] = complete ? "complete" : "partial";
  if (!complete) {
    j["failed_stage"] = failed_stage;
    j["failure"] = failure;
  }
  j["config"] = config;
  j["dataset"] = {{"rows", row_count}, {"first_year", first_year}, {"last_year", last_year},
                  {"content_hash", content_hash}};
  auto& a = j["artifacts"] = ordered_json::array();
  for (const auto& [name, path] : artifacts) a.push_back({{"name", name}, {"path", path.string()}});
  auto& t = j["stage_seconds"] = ordered_json::object();
  for (const auto& s : timings) t[s.stage] = s.seconds;
  return j;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return hex64(fnv1a64(bytes));
}

class StageRunner {
 public:
  explicit StageRunner(RunManifest& manifest) : manifest_(manifest) {}

  template <typename F>
  auto operator()(const std::string& stage, F&& body) {
    current_ = stage;
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record(stage, start);
    } else {
      auto result = body();
      record(stage, start);
      return result;
    }
  }

  const std::string& current() const noexcept { return current_; }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest_.timings.push_back({stage, elapsed.count()});
  }

  RunManifest& manifest_;
  std::string current_;
};

}  // namespace

RunManifest run_pipeline(const PipelineConfig& input_config) {
  input_config.validate();
  const PipelineConfig cfg = input_config.with_derived_seeds();
  const auto& out_dir = cfg.output_dir;

  RunManifest manifest;
  manifest.config = config_to_json(input_config);
  StageRunner stage(manifest);

  auto emit = [&](const std::string& name, const std::filesystem::path& rel, const std::string& content) {
    write_atomic(out_dir / rel, content);
    manifest.artifacts.emplace_back(name, rel);
  };
  auto write_manifest = [&] { write_atomic(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n"); };

  try {
    std::filesystem::create_directories(out_dir);

    const LoadResult loaded = stage("load", [&] {
      if (!std::filesystem::exists(cfg.input)) throw Error(ErrorCode::MissingFile, cfg.input.string());
      manifest.content_hash = file_hash(cfg.input);
      return load_dataset(cfg.input, cfg.schema);
    });
    const Dataset& data = loaded.dataset;
    manifest.row_count = data.size();
    manifest.first_year = data.years().front();
    manifest.last_year = data.years().back();
    {
      std::ostringstream rej;
      rej << "line,reason\n";
      for (const auto& r : loaded.rejected) rej << r.line << ',' << csv::escape(r.reason) << '\n';
      emit("rejections", "rejections.csv", rej.str());
    }

    stage("outliers", [&] {
      const OutlierReport report = detect_outliers(data, cfg.outliers);
      std::ostringstream csv_out;
      write_outliers_csv(csv_out, report);
      emit("outliers", "outliers.csv", csv_out.str());
      emit("outliers_json", "outliers.json", outliers_json(report, cfg.outliers) + "\n");
    });

    const ClusterStage clusters = stage("cluster", [&] {
      ClusterStage s = run_cluster_stage(data, cfg.kmeans);
      emit("clusters", "clusters.json", clusters_json(s.model, s.standardized.matrix, cfg.kmeans) + "\n");
      return s;
    });

    const TransductionRun transduction = stage("spread", [&] {
      TransductionRun run =
          run_spread_stage(data, clusters.standardized.matrix, clusters.model.assignments, cfg.spread, cfg.spread_scope);
      const auto& rows = clusters.standardized.matrix.rows;
      emit("transduction", "transduction.json", transduction_json(run, rows, cfg.spread) + "\n");
      emit("transduction_csv", "transduction.csv", transduction_csv(run, rows, clusters.model.assignments));
      return run;
    });

    const PcaModel pca = stage("pca", [&] { return pca_fit(clusters.standardized.matrix, 2); });

    {
      MetricsReport metrics;
      if (cfg.kmeans.k >= 2) metrics.validity = clusters.validity;
      metrics.confusion = transduction.evaluation.confusion;
      metrics.accuracy = transduction.evaluation.accuracy;
      metrics.auc = transduction.evaluation.auc;
      ordered_json j = ordered_json::parse(metrics_json(metrics));
      j["kmeans_inertia"] = clusters.model.inertia;
      j["spread_converged"] = transduction.result.converged;
      j["spread_iterations"] = transduction.result.iterations_run;
      j["hidden_count"] = transduction.evaluation.hidden_count;
      std::vector<double> ratio(static_cast<std::size_t>(pca.components.rows()));
      for (Eigen::Index c = 0; c < pca.components.rows(); ++c) ratio[static_cast<std::size_t>(c)] = pca.explained_variance_ratio()(c);
      j["pca_explained_variance_ratio"] = ratio;
      emit("metrics", "metrics.json", j.dump(2) + "\n");
    }

    const std::vector<int>& target =
        cfg.label_source == LabelSource::Transduction ? transduction.result.labels : clusters.model.assignments;
    const LabelTable labels = label_table(clusters.standardized.matrix.rows, target);

    const auto experiments = stage("classify", [&] {
      auto ex = run_classification_stage(data, labels, cfg.horizons, cfg.models, cfg.experiment);
      std::vector<HorizonResult> results;
      for (const auto& e : ex) results.push_back(e.result);
      emit("table2", "table2.csv", horizon_results_csv(results));
      return ex;
    });

    stage("scenario", [&] {
      const TransitionReport report = run_scenario_stage(experiments, labels, cfg.scenario_model, cfg.kmeans.k);
      emit("table3", "table3.csv", transition_csv(report));
      emit("table3_json", "table3.json", transition_json(report) + "\n");
    });

    stage("plot", [&] {
      for (Indicator ind : kIndicators) {
        std::string file(indicator_name(ind));
        std::replace(file.begin(), file.end(), ' ', '_');
        std::transform(file.begin(), file.end(), file.begin(), [](unsigned char ch) { return std::tolower(ch); });
        emit("chart_" + file, std::filesystem::path("charts") / (file + ".svg"), emit_temporal_chart(data, ind));
      }
      emit("chart_clusters", std::filesystem::path("charts") / "clusters_pca.svg",
           emit_cluster_scatter(pca_transform(pca, clusters.standardized.matrix), transduction.result.labels));
    });

    manifest.complete = true;
    write_manifest();
  } catch (const Error& e) {
    manifest.failed_stage = stage.current();
    manifest.failure = e.what();
    try {
      write_manifest();
    } catch (...) {
    }
    throw Error(e.code(), "stage '" + stage.current() + "': " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    manifest.failed_stage = stage.current();
    manifest.failure = e.what();
    throw Error(ErrorCode::Io, "stage '" + stage.current() + "': " + e.what());
  }
  return manifest;
}

}  // namespace riskdyn
