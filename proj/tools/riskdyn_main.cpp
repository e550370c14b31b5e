// riskdyn: temporal disaster-risk cluster analysis from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "riskdyn/charts.hpp"
#include "riskdyn/clustering.hpp"
#include "riskdyn/csv.hpp"
#include "riskdyn/data_model.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/evaluation.hpp"
#include "riskdyn/label_spreading.hpp"
#include "riskdyn/pipeline.hpp"
#include "riskdyn/preprocess.hpp"
#include "riskdyn/scenario.hpp"

using namespace riskdyn;

namespace {

struct Flags {
  std::string input;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<double> alpha;
  std::optional<int> neighbors;
  std::optional<double> hide_fraction;
  std::optional<int> horizon;
  std::optional<std::string> model;
  std::string clusters;
  std::string transduction;
  std::string variable;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "Panel CSV (country-year risk indicators)");
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--seed", f.seed, "Top-level random seed");
  cmd->add_option("--k", f.k, "Number of KMeans clusters")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", f.alpha, "Label spreading clamping factor in (0,1)");
  cmd->add_option("--neighbors", f.neighbors, "KNN graph neighbors")->check(CLI::PositiveNumber);
  cmd->add_option("--hide-fraction", f.hide_fraction, "Share of labels hidden before spreading");
  cmd->add_option("--horizon", f.horizon, "Temporal horizon in years")->check(CLI::IsMember({1, 3, 5}));
  cmd->add_option("--model", f.model, "Classifier")->check(CLI::IsMember({"lr", "dt", "rf", "gbt"}));
}

// Config file first, then flag overrides. Seeds are not derived yet.
PipelineConfig apply_flags(const Flags& f) {
  PipelineConfig c;
  if (!f.config.empty()) c = load_config(f.config, c);
  if (!f.input.empty()) c.input = f.input;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.k) c.kmeans.k = *f.k;
  if (f.alpha) c.spread.alpha = *f.alpha;
  if (f.neighbors) c.spread.n_neighbors = *f.neighbors;
  if (f.hide_fraction) c.spread.hide_fraction = *f.hide_fraction;
  if (f.horizon) c.horizons = {*parse_horizon(std::to_string(*f.horizon))};
  if (f.model) {
    c.models = {*parse_model(*f.model)};
    c.scenario_model = c.models.front();
  }
  if (c.input.empty()) throw Error(ErrorCode::InvalidConfig, "--input (or config 'input') is required");
  return c;
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c = apply_flags(f);
  c.validate();
  return c.with_derived_seeds();
}

Dataset load(const PipelineConfig& c) {
  LoadResult r = load_dataset(c.input, c.schema);
  if (!r.rejected.empty()) std::cerr << r.rejected.size() << " row(s) rejected\n";
  return std::move(r.dataset);
}

void write_out(const PipelineConfig& c, const std::string& name, const std::string& content) {
  write_atomic(c.output_dir / name, content);
  std::cout << "wrote " << (c.output_dir / name).string() << '\n';
}

// Labels for downstream stages: a prior artifact when given, otherwise recomputed.
LabelTable stage_labels(const Flags& f, const PipelineConfig& c, const Dataset& data) {
  if (!f.transduction.empty()) return read_label_table(f.transduction);
  if (!f.clusters.empty() && c.label_source == LabelSource::KMeans) return read_label_table(f.clusters);
  const ClusterStage cs = run_cluster_stage(data, c.kmeans);
  std::vector<int> km = cs.model.assignments;
  if (!f.clusters.empty()) {
    const LabelTable prior = read_label_table(f.clusters);
    for (std::size_t i = 0; i < km.size(); ++i) km[i] = prior.at(cs.standardized.matrix.rows[i]);
  }
  if (c.label_source == LabelSource::KMeans) return label_table(cs.standardized.matrix.rows, km);
  const TransductionRun run = run_spread_stage(data, cs.standardized.matrix, km, c.spread, c.spread_scope);
  return label_table(cs.standardized.matrix.rows, run.result.labels);
}

std::vector<int> aligned(const LabelTable& table, const std::vector<RowKey>& rows) {
  std::vector<int> out;
  for (const auto& r : rows) {
    const auto it = table.find(r);
    if (it == table.end()) throw Error(ErrorCode::MissingAssignment, "(" + r.country + ", " + std::to_string(r.year) + ")");
    out.push_back(it->second);
  }
  return out;
}

std::string slug(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), ' ', '_');
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

int cmd_ingest(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const LoadResult r = load_dataset(c.input, c.schema);
  const auto& d = r.dataset;
  std::cout << "rows: " << d.size() << "\ncountries: " << d.countries().size() << "\nyears: " << d.years().front()
            << "-" << d.years().back() << " (" << d.years().size() << ")\nrejected: " << r.rejected.size() << '\n';
  for (const auto& rej : r.rejected) std::cout << "  line " << rej.line << ": " << rej.reason << '\n';
  if (!f.out.empty()) {
    std::ostringstream ds;
    write_dataset_csv(ds, d, c.schema.columns);
    write_out(c, "dataset.csv", ds.str());
    std::ostringstream rej;
    rej << "line,reason\n";
    for (const auto& x : r.rejected) rej << x.line << ',' << csv::escape(x.reason) << '\n';
    write_out(c, "rejections.csv", rej.str());
  }
  return 0;
}

int cmd_outliers(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  const OutlierReport report = detect_outliers(data, c.outliers);
  std::cout << report.flagged.size() << " flagged value(s) across " << report.distinct_countries.size()
            << " countries:\n";
  for (const auto& country : report.distinct_countries) std::cout << "  " << country << '\n';
  std::ostringstream out;
  write_outliers_csv(out, report);
  write_out(c, "outliers.csv", out.str());
  write_out(c, "outliers.json", outliers_json(report, c.outliers) + "\n");
  return 0;
}

int cmd_cluster(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  const ClusterStage s = run_cluster_stage(data, c.kmeans);
  std::cout << "k=" << c.kmeans.k << " inertia=" << csv::format_fixed(s.model.inertia, 4)
            << " iterations=" << s.model.iterations_run << '\n';
  MetricsReport m;
  if (c.kmeans.k >= 2) {
    m.validity = s.validity;
    std::cout << "silhouette=" << csv::format_fixed(s.validity.silhouette, 4)
              << " calinski_harabasz=" << csv::format_fixed(s.validity.calinski_harabasz.value, 2)
              << " davies_bouldin=" << csv::format_fixed(s.validity.davies_bouldin.value, 4) << '\n';
  }
  write_out(c, "clusters.json", clusters_json(s.model, s.standardized.matrix, c.kmeans) + "\n");
  write_out(c, "metrics.json", metrics_json(m) + "\n");
  return 0;
}

int cmd_spread(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  const Standardized z = standardize(indicator_matrix(data));
  std::vector<int> labels;
  if (!f.clusters.empty()) {
    labels = aligned(read_label_table(f.clusters), z.matrix.rows);
  } else {
    labels = kmeans_fit(z.matrix, c.kmeans).assignments;
  }
  const TransductionRun run = run_spread_stage(data, z.matrix, labels, c.spread, c.spread_scope);
  const auto& ev = run.evaluation;
  std::cout << "converged=" << (run.result.converged ? "yes" : "no") << " iterations=" << run.result.iterations_run
            << " hidden=" << ev.hidden_count << " accuracy=" << csv::format_fixed(ev.accuracy, 4);
  if (ev.auc) std::cout << " auc=" << csv::format_fixed(*ev.auc, 4);
  std::cout << '\n';
  if (ev.confusion) {
    std::cout << "confusion (rows true, cols predicted): [[" << ev.confusion->c00 << ", " << ev.confusion->c01
              << "], [" << ev.confusion->c10 << ", " << ev.confusion->c11 << "]]\n";
  }
  write_out(c, "transduction.json", transduction_json(run, z.matrix.rows, c.spread) + "\n");
  write_out(c, "transduction.csv", transduction_csv(run, z.matrix.rows, labels));
  return 0;
}

int cmd_classify(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  const LabelTable labels = stage_labels(f, c, data);
  const auto experiments = run_classification_stage(data, labels, c.horizons, c.models, c.experiment);
  std::vector<HorizonResult> results;
  for (const auto& e : experiments) results.push_back(e.result);
  const std::string table = horizon_results_csv(results);
  std::cout << table;
  write_out(c, "table2.csv", table);
  return 0;
}

int cmd_scenario(const Flags& f) {
  PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  const LabelTable labels = stage_labels(f, c, data);
  const auto experiments = run_classification_stage(data, labels, c.horizons, {c.scenario_model}, c.experiment);
  const TransitionReport report = run_scenario_stage(experiments, labels, c.scenario_model, c.kmeans.k);
  const std::string table = transition_csv(report);
  std::cout << table;
  write_out(c, "table3.csv", table);
  write_out(c, "table3.json", transition_json(report) + "\n");
  return 0;
}

int cmd_plot(const Flags& f) {
  const PipelineConfig c = resolve(f);
  const Dataset data = load(c);
  std::vector<Indicator> vars(kIndicators.begin(), kIndicators.end());
  if (!f.variable.empty()) {
    const auto v = parse_indicator(f.variable);
    if (!v) throw Error(ErrorCode::UnknownVariable, f.variable);
    vars = {*v};
  }
  for (Indicator v : vars) {
    write_out(c, "charts/" + slug(indicator_name(v)) + ".svg", emit_temporal_chart(data, v));
  }
  if (f.variable.empty()) {
    const Standardized z = standardize(indicator_matrix(data));
    const LabelTable labels = stage_labels(f, c, data);
    const PcaModel pca = pca_fit(z.matrix, 2);
    write_out(c, "charts/clusters_pca.svg",
              emit_cluster_scatter(pca_transform(pca, z.matrix), aligned(labels, z.matrix.rows)));
  }
  return 0;
}

int cmd_run(const Flags& f) {
  const PipelineConfig c = apply_flags(f);
  const RunManifest m = run_pipeline(c);
  std::cout << "pipeline complete: " << m.row_count << " rows, " << m.artifacts.size() << " artifacts in "
            << c.output_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal disaster-risk cluster analysis"};
  app.require_subcommand(1);
  Flags f;

  auto* ingest = app.add_subcommand("ingest", "Validate and summarize the input panel");
  auto* outliers = app.add_subcommand("outliers", "Z-score outlier report");
  auto* cluster = app.add_subcommand("cluster", "KMeans clustering with validity indices");
  auto* spread = app.add_subcommand("spread", "Semi-supervised label spreading over KMeans labels");
  auto* classify = app.add_subcommand("classify", "Temporal-split classification per horizon and model");
  auto* scenario = app.add_subcommand("scenario", "Cluster transition probabilities per horizon");
  auto* plot = app.add_subcommand("plot", "SVG charts");
  auto* run = app.add_subcommand("run", "Full pipeline");
  for (auto* cmd : {ingest, outliers, cluster, spread, classify, scenario, plot, run}) add_common(cmd, f);
  for (auto* cmd : {spread, classify, scenario, plot}) {
    cmd->add_option("--clusters", f.clusters, "Prior clusters.json");
  }
  for (auto* cmd : {classify, scenario, plot}) {
    cmd->add_option("--transduction", f.transduction, "Prior transduction.json");
  }
  plot->add_option("--variable", f.variable, "Single indicator to chart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*ingest) return cmd_ingest(f);
    if (*outliers) return cmd_outliers(f);
    if (*cluster) return cmd_cluster(f);
    if (*spread) return cmd_spread(f);
    if (*classify) return cmd_classify(f);
    if (*scenario) return cmd_scenario(f);
    if (*plot) return cmd_plot(f);
    if (*run) return cmd_run(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
