#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "riskdyn/classifiers.hpp"
#include "riskdyn/data_model.hpp"

namespace riskdyn {

struct CountryTrajectory {
  std::string country;
  std::vector<std::pair<int, int>> points;  // (year, cluster), years strictly increasing
};

/// One trajectory per country in dataset order. Throws MissingAssignment when a
/// dataset row has no entry in the table.
std::vector<CountryTrajectory> country_trajectories(const Dataset& dataset, const LabelTable& assignments);

struct Migration {
  std::string country;
  int start = 0;  // cluster at the anchor (last training) year
  int end = 0;    // predicted cluster at the evaluated year
};

struct TransitionCount {
  double probability = 0.0;
  long migrated = 0;
  long total = 0;
};

/// Share of countries starting in `from` that end in `to`. Throws EmptySourceCluster.
TransitionCount transition_probability(const std::vector<Migration>& migrations, int from, int to);

struct TransitionMatrix {
  int k = 0;
  Eigen::MatrixXd probability;          // k x k, rows = source cluster; zero rows when total is 0
  std::vector<std::vector<long>> counts;  // counts[from][to]
  std::vector<long> totals;               // countries per source cluster
};

TransitionMatrix transition_matrix(const std::vector<Migration>& migrations, int k);

// Inputs for one horizon: current clusters at the last training year and the
// classifier's predictions for the test rows.
struct ScenarioInput {
  Horizon horizon = Horizon::One;
  int anchor_year = 0;
  std::map<std::string, int> start_clusters;
  std::vector<std::pair<RowKey, int>> predictions;
};

struct HorizonTransitions {
  Horizon horizon = Horizon::One;
  int anchor_year = 0;
  int terminal_year = 0;
  TransitionMatrix terminal;
  std::map<int, TransitionMatrix> per_year;  // every test year, for inspection
  std::vector<std::string> excluded;         // countries lacking a start or terminal assignment
};

struct TransitionReport {
  int k = 0;
  std::vector<HorizonTransitions> horizons;
};

/// Start cluster = assignment at the anchor year; end cluster = prediction in the
/// final test year. Countries without both are listed as excluded.
TransitionReport build_transition_report(const std::vector<ScenarioInput>& inputs, int k);

/// Scenario input from a horizon experiment and the labels used for training.
ScenarioInput scenario_input(const HorizonExperiment& experiment, const LabelTable& labels);

/// CSV header: horizon,from,to,probability,migrated,total (terminal year only).
std::string transition_csv(const TransitionReport& report);
std::string transition_json(const TransitionReport& report);

}  // namespace riskdyn
