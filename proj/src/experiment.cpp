#include "rftc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rftc/conditions.hpp"
#include "rftc/controllers.hpp"

namespace rftc {

void ExperimentPlan::validate() const {
  if (conditions.empty()) throw ConfigError("plan has no conditions");
  if (controllers.empty()) throw ConfigError("plan has no controllers");
  if (seeds.empty()) throw ConfigError("plan has no seeds");
  if (horizon <= 0) throw ConfigError("plan horizon must be positive");
}

ComparisonReport run_plan(const ExperimentPlan& plan) {
  plan.validate();
  nlohmann::json mf_doc;
  const bool has_mf = !plan.mf_file.empty();
  if (has_mf) {
    std::ifstream in(plan.mf_file);
    if (!in) throw ConfigError("cannot open membership file " + plan.mf_file);
    in >> mf_doc;
  }

  struct Job {
    std::string condition, controller;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const std::string& cond : plan.conditions) {
    for (const std::string& ctrl : plan.controllers) {
      for (std::uint64_t seed : plan.seeds) jobs.push_back({cond, ctrl, seed});
    }
  }

  ComparisonReport report;
  report.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      const Scenario scenario = make_scenario(job.condition, plan.horizon, job.seed);
      auto controller =
          make_controller(job.controller, {}, has_mf ? &mf_doc : nullptr);
      RunRecord& rec = report.runs[i];
      rec.condition = job.condition;
      rec.controller = job.controller;
      rec.seed = job.seed;
      rec.metrics = run(scenario, *controller);
      rec.veh_delay_s = rec.metrics.veh_delay_seconds(scenario.time_unit_seconds);
    }
  };
  int threads = plan.threads > 0 ? plan.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Aggregate in deterministic order.
  for (const RunRecord& rec : report.runs) {
    Aggregate& a = report.cells[{rec.condition, rec.controller}];
    const double miss = static_cast<double>(rec.metrics.veh_miss);
    if (a.runs == 0) {
      a.miss_min = a.miss_max = miss;
      a.delay_min = a.delay_max = rec.veh_delay_s;
    }
    a.miss_mean += miss;
    a.miss_min = std::min(a.miss_min, miss);
    a.miss_max = std::max(a.miss_max, miss);
    a.pass_mean += static_cast<double>(rec.metrics.veh_pass);
    a.delay_mean += rec.veh_delay_s;
    a.delay_min = std::min(a.delay_min, rec.veh_delay_s);
    a.delay_max = std::max(a.delay_max, rec.veh_delay_s);
    ++a.runs;
  }
  for (auto& [key, a] : report.cells) {
    a.miss_mean /= a.runs;
    a.pass_mean /= a.runs;
    a.delay_mean /= a.runs;
  }
  for (const std::string& ctrl : plan.controllers) {
    double total = 0.0;
    int n = 0;
    for (const std::string& cond : plan.conditions) {
      total += report.cells.at({cond, ctrl}).delay_mean;
      ++n;
    }
    report.grand_mean_delay[ctrl] = total / n;
  }
  return report;
}

std::string metrics_csv_header() {
  return "condition,controller,seed,veh_miss,veh_pass,veh_delay_s";
}

std::string metrics_csv_row(const RunRecord& r) {
  std::ostringstream os;
  os << r.condition << ',' << r.controller << ',' << r.seed << ',' << r.metrics.veh_miss << ','
     << r.metrics.veh_pass << ',' << std::setprecision(17) << r.veh_delay_s;
  return os.str();
}

std::string report_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "condition,controller,runs,miss_mean,miss_min,miss_max,pass_mean,"
        "delay_mean_s,delay_min_s,delay_max_s\n";
  os << std::setprecision(17);
  for (const auto& [key, a] : report.cells) {
    os << key.first << ',' << key.second << ',' << a.runs << ',' << a.miss_mean << ','
       << a.miss_min << ',' << a.miss_max << ',' << a.pass_mean << ',' << a.delay_mean << ','
       << a.delay_min << ',' << a.delay_max << '\n';
  }
  return os.str();
}

namespace {
std::vector<std::string> ordered_keys(const ComparisonReport& report, bool conditions) {
  std::vector<std::string> keys;
  for (const auto& [key, a] : report.cells) {
    const std::string& k = conditions ? key.first : key.second;
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}
}  // namespace

std::string report_table(const ComparisonReport& report) {
  const auto conditions = ordered_keys(report, true);
  const auto controllers = ordered_keys(report, false);
  std::ostringstream os;
  auto block = [&](const std::string& title, auto value) {
    os << title << "\n" << std::left << std::setw(11) << "condition";
    for (const auto& c : controllers) os << std::right << std::setw(14) << c;
    os << "\n" << std::fixed << std::setprecision(3);
    for (const auto& cond : conditions) {
      os << std::left << std::setw(11) << cond;
      for (const auto& ctrl : controllers) {
        os << std::right << std::setw(14) << value(report.cells.at({cond, ctrl}));
      }
      os << "\n";
    }
  };
  block("Mean undetected vehicles (vehMiss)", [](const Aggregate& a) { return a.miss_mean; });
  os << "\n";
  block("Mean vehicle delay (seconds)", [](const Aggregate& a) { return a.delay_mean; });
  os << std::left << std::setw(11) << "Mean";
  for (const auto& ctrl : controllers) {
    os << std::right << std::setw(14) << report.grand_mean_delay.at(ctrl);
  }
  os << "\n";
  return os.str();
}

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  return nlohmann::json{{"conditions", plan.conditions}, {"controllers", plan.controllers},
                        {"seeds", plan.seeds},           {"horizon", plan.horizon},
                        {"mf_file", plan.mf_file},       {"threads", plan.threads}};
}

ExperimentPlan plan_from_json(const nlohmann::json& doc) {
  ExperimentPlan plan;
  try {
    plan.conditions = doc.at("conditions").get<std::vector<std::string>>();
    plan.controllers = doc.at("controllers").get<std::vector<std::string>>();
    plan.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    plan.horizon = doc.value("horizon", plan.horizon);
    plan.mf_file = doc.value("mf_file", plan.mf_file);
    plan.threads = doc.value("threads", plan.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

}  // namespace rftc
