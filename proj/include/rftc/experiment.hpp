#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rftc/sim.hpp"

namespace rftc {

struct ExperimentPlan {
  std::vector<std::string> conditions;
  std::vector<std::string> controllers;
  std::vector<std::uint64_t> seeds;
  std::int64_t horizon = 20000;
  std::string mf_file;  // membership document for mix-opt
  int threads = 0;

  void validate() const;
};

struct RunRecord {
  std::string condition;
  std::string controller;
  std::uint64_t seed = 0;
  SimMetrics metrics;
  double veh_delay_s = 0.0;
};

struct Aggregate {
  double miss_mean = 0.0, miss_min = 0.0, miss_max = 0.0;
  double pass_mean = 0.0;
  double delay_mean = 0.0, delay_min = 0.0, delay_max = 0.0;
  int runs = 0;
};

struct ComparisonReport {
  std::vector<RunRecord> runs;
  // (condition, controller) -> aggregate over seeds.
  std::map<std::pair<std::string, std::string>, Aggregate> cells;
  std::map<std::string, double> grand_mean_delay;  // per controller
};

// Runs every (condition, controller, seed) combination of the plan.
// Independent runs execute concurrently; assembly order is fixed.
ComparisonReport run_plan(const ExperimentPlan& plan);

std::string metrics_csv_header();
std::string metrics_csv_row(const RunRecord& r);
std::string report_csv(const ComparisonReport& report);
std::string report_table(const ComparisonReport& report);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& doc);

}  // namespace rftc
