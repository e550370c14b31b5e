#include "riskdyn/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"

namespace riskdyn {

std::vector<CountryTrajectory> country_trajectories(const Dataset& dataset, const LabelTable& assignments) {
  std::vector<CountryTrajectory> out;
  for (const auto& r : dataset.records()) {
    const auto it = assignments.find({r.country, r.year});
    if (it == assignments.end()) {
      throw Error(ErrorCode::MissingAssignment, "(" + r.country + ", " + std::to_string(r.year) + ")");
    }
    if (out.empty() || out.back().country != r.country) out.push_back({r.country, {}});
    out.back().points.emplace_back(r.year, it->second);
  }
  return out;
}

TransitionCount transition_probability(const std::vector<Migration>& migrations, int from, int to) {
  TransitionCount c;
  for (const auto& m : migrations) {
    if (m.start != from) continue;
    ++c.total;
    if (m.end == to) ++c.migrated;
  }
  if (c.total == 0) throw Error(ErrorCode::EmptySourceCluster, "no country starts in cluster " + std::to_string(from));
  c.probability = static_cast<double>(c.migrated) / static_cast<double>(c.total);
  return c;
}

TransitionMatrix transition_matrix(const std::vector<Migration>& migrations, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  TransitionMatrix t;
  t.k = k;
  t.counts.assign(static_cast<std::size_t>(k), std::vector<long>(static_cast<std::size_t>(k), 0));
  t.totals.assign(static_cast<std::size_t>(k), 0);
  for (const auto& m : migrations) {
    if (m.start < 0 || m.start >= k || m.end < 0 || m.end >= k) {
      throw Error(ErrorCode::InvalidConfig, "cluster id out of range for " + m.country);
    }
    ++t.counts[static_cast<std::size_t>(m.start)][static_cast<std::size_t>(m.end)];
    ++t.totals[static_cast<std::size_t>(m.start)];
  }
  t.probability = Eigen::MatrixXd::Zero(k, k);
  for (int from = 0; from < k; ++from) {
    const long total = t.totals[static_cast<std::size_t>(from)];
    if (total == 0) continue;
    for (int to = 0; to < k; ++to) {
      t.probability(from, to) = static_cast<double>(t.counts[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]) /
                                static_cast<double>(total);
    }
  }
  return t;
}

namespace {

std::vector<Migration> migrations_at(const ScenarioInput& in, int year, std::set<std::string>* missing) {
  std::map<std::string, int> ends;
  for (const auto& [key, cluster] : in.predictions) {
    if (key.year == year) ends[key.country] = cluster;
  }
  std::vector<Migration> out;
  std::set<std::string> countries;
  for (const auto& [c, v] : in.start_clusters) countries.insert(c);
  for (const auto& [c, v] : ends) countries.insert(c);
  for (const auto& country : countries) {
    const auto s = in.start_clusters.find(country);
    const auto e = ends.find(country);
    if (s == in.start_clusters.end() || e == ends.end()) {
      if (missing) missing->insert(country);
      continue;
    }
    out.push_back({country, s->second, e->second});
  }
  return out;
}

}  // namespace

TransitionReport build_transition_report(const std::vector<ScenarioInput>& inputs, int k) {
  TransitionReport report;
  report.k = k;
  for (const auto& in : inputs) {
    if (in.predictions.empty()) throw Error(ErrorCode::EmptySplit, "no predictions for horizon " + std::string(horizon_name(in.horizon)));
    std::set<int> years;
    for (const auto& [key, cluster] : in.predictions) years.insert(key.year);

    HorizonTransitions h;
    h.horizon = in.horizon;
    h.anchor_year = in.anchor_year;
    h.terminal_year = *years.rbegin();
    std::set<std::string> missing;
    h.terminal = transition_matrix(migrations_at(in, h.terminal_year, &missing), k);
    h.excluded.assign(missing.begin(), missing.end());
    for (int y : years) h.per_year.emplace(y, transition_matrix(migrations_at(in, y, nullptr), k));
    report.horizons.push_back(std::move(h));
  }
  return report;
}

ScenarioInput scenario_input(const HorizonExperiment& experiment, const LabelTable& labels) {
  ScenarioInput in;
  in.horizon = experiment.result.horizon;
  in.anchor_year = experiment.last_train_year;
  for (const auto& [key, cluster] : labels) {
    if (key.year == in.anchor_year) in.start_clusters[key.country] = cluster;
  }
  for (std::size_t i = 0; i < experiment.test_rows.size(); ++i) {
    in.predictions.emplace_back(experiment.test_rows[i], experiment.test_predicted[i]);
  }
  return in;
}

std::string transition_csv(const TransitionReport& report) {
  std::ostringstream out;
  out << "horizon,from,to,probability,migrated,total\n";
  for (const auto& h : report.horizons) {
    for (int from = 0; from < report.k; ++from) {
      for (int to = 0; to < report.k; ++to) {
        const auto total = h.terminal.totals[static_cast<std::size_t>(from)];
        out << horizon_name(h.horizon) << ',' << from << ',' << to << ','
            << (total > 0 ? csv::format_fixed(h.terminal.probability(from, to), 6) : "") << ','
            << h.terminal.counts[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)] << ',' << total << '\n';
      }
    }
  }
  return out.str();
}

namespace {

nlohmann::ordered_json matrix_json(const TransitionMatrix& t) {
  nlohmann::ordered_json j;
  auto& prob = j["probability"] = nlohmann::ordered_json::array();
  for (int from = 0; from < t.k; ++from) {
    auto row = nlohmann::ordered_json::array();
    for (int to = 0; to < t.k; ++to) {
      if (t.totals[static_cast<std::size_t>(from)] > 0) {
        row.push_back(t.probability(from, to));
      } else {
        row.push_back(nullptr);
      }
    }
    prob.push_back(row);
  }
  j["counts"] = t.counts;
  j["totals"] = t.totals;
  return j;
}

}  // namespace

std::string transition_json(const TransitionReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  auto& hs = j["horizons"] = nlohmann::ordered_json::array();
  for (const auto& h : report.horizons) {
    nlohmann::ordered_json e;
    e["horizon"] = std::string(horizon_name(h.horizon));
    e["anchor_year"] = h.anchor_year;
    e["terminal_year"] = h.terminal_year;
    e["terminal"] = matrix_json(h.terminal);
    auto& py = e["per_year"] = nlohmann::ordered_json::object();
    for (const auto& [year, m] : h.per_year) py[std::to_string(year)] = matrix_json(m);
    e["excluded"] = h.excluded;
    hs.push_back(std::move(e));
  }
  return j.dump(2);
}

}  // namespace riskdyn
