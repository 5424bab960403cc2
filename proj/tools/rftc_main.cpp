// Command-line experiment runner for the roundabout signal-control suite.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rftc/conditions.hpp"
#include "rftc/controllers.hpp"
#include "rftc/experiment.hpp"
#include "rftc/pso.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::int64_t kDeskHorizon = 20000;
constexpr std::int64_t kFullHorizon = 100000;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  in >> doc;
  return doc;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, int replications) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < replications; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

int cmd_simulate(const std::string& condition, const std::string& scenario_file,
                 const std::string& controller_name, const std::string& mf_file,
                 std::uint64_t seed, std::int64_t horizon, bool full,
                 const std::string& out_file, const std::string& trace_file,
                 const std::string& log_file, const std::string& manifest_file) {
  rftc::Scenario scenario;
  if (!scenario_file.empty()) {
    scenario = rftc::scenario_from_json(load_json(scenario_file));
    scenario.rng_seed = seed;
    if (horizon > 0) scenario.horizon = horizon;
  } else {
    std::int64_t h = horizon > 0 ? horizon : (full ? kFullHorizon : kDeskHorizon);
    scenario = rftc::make_scenario(condition, h, seed);
  }

  json mf_doc;
  if (!mf_file.empty()) mf_doc = load_json(mf_file);
  auto controller =
      rftc::make_controller(controller_name, {}, mf_file.empty() ? nullptr : &mf_doc);

  rftc::DecisionLog log;
  const rftc::SimMetrics metrics =
      rftc::run(scenario, *controller, log_file.empty() ? nullptr : &log);

  rftc::RunRecord rec{scenario.name, controller_name, scenario.rng_seed, metrics,
                      metrics.veh_delay_seconds(scenario.time_unit_seconds)};
  std::ostringstream csv;
  csv << rftc::metrics_csv_header() << '\n' << rftc::metrics_csv_row(rec) << '\n';
  if (out_file.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_file, csv.str());
  }

  if (!trace_file.empty()) {
    std::ostringstream os;
    os << "t,mean_queue_len\n" << std::setprecision(17);
    for (const auto& [t, q] : metrics.queue_trace) os << t << ',' << q << '\n';
    write_file(trace_file, os.str());
  }
  if (!log_file.empty()) {
    std::ostringstream os;
    os << "t,event,phase,duration\n";
    for (const auto& ev : log) {
      os << ev.t << ',' << ev.event << ',' << rftc::phase_index(ev.phase) << ',' << ev.duration
         << '\n';
    }
    write_file(log_file, os.str());
  }
  if (!manifest_file.empty()) {
    json manifest{{"command", "simulate"},
                  {"scenario", rftc::scenario_to_json(scenario)},
                  {"controller", controller_name},
                  {"mf_file", mf_file},
                  {"seed", scenario.rng_seed}};
    write_file(manifest_file, manifest.dump(2) + "\n");
  }
  return 0;
}

int cmd_compare(rftc::ExperimentPlan plan, const std::string& plan_file,
                const std::string& out_dir) {
  if (!plan_file.empty()) plan = rftc::plan_from_json(load_json(plan_file));
  const rftc::ComparisonReport report = rftc::run_plan(plan);

  std::ostringstream runs_csv;
  runs_csv << rftc::metrics_csv_header() << '\n';
  for (const rftc::RunRecord& rec : report.runs) runs_csv << rftc::metrics_csv_row(rec) << '\n';

  const std::string table = rftc::report_table(report);
  if (out_dir.empty()) {
    std::cout << table;
  } else {
    const fs::path dir(out_dir);
    write_file(dir / "runs.csv", runs_csv.str());
    write_file(dir / "report.csv", rftc::report_csv(report));
    write_file(dir / "report.txt", table);
    write_file(dir / "manifest.json", rftc::plan_to_json(plan).dump(2) + "\n");
    std::cout << table;
  }
  return 0;
}

json optimize_config_json(const rftc::SwarmConfig& config) {
  json training = json::array();
  for (const auto& t : config.training) {
    training.push_back({{"condition", t.condition}, {"seed", t.seed}, {"horizon", t.horizon}});
  }
  return json{{"particles", config.particles},
              {"iterations", config.iterations},
              {"omega_start", config.omega_start},
              {"omega_end", config.omega_end},
              {"c1", config.c1},
              {"c2", config.c2},
              {"w1", config.w1},
              {"w2", config.w2},
              {"rng_seed", config.rng_seed},
              {"seed_default_position", config.seed_default_position},
              {"threads", config.threads},
              {"training", training}};
}

rftc::SwarmConfig optimize_config_from_json(const json& doc) {
  rftc::SwarmConfig config;
  config.particles = doc.value("particles", config.particles);
  config.iterations = doc.value("iterations", config.iterations);
  config.omega_start = doc.value("omega_start", config.omega_start);
  config.omega_end = doc.value("omega_end", config.omega_end);
  config.c1 = doc.value("c1", config.c1);
  config.c2 = doc.value("c2", config.c2);
  config.w1 = doc.value("w1", config.w1);
  config.w2 = doc.value("w2", config.w2);
  config.rng_seed = doc.value("rng_seed", config.rng_seed);
  config.seed_default_position =
      doc.value("seed_default_position", config.seed_default_position);
  config.threads = doc.value("threads", config.threads);
  if (doc.contains("training")) {
    config.training.clear();
    for (const auto& t : doc["training"]) {
      config.training.push_back({t.at("condition").get<std::string>(),
                                 t.value("seed", std::uint64_t{1}),
                                 t.value("horizon", std::int64_t{20000})});
    }
  }
  return config;
}

int cmd_optimize(const std::string& config_file, const std::string& replay_file,
                 int iterations, int particles, std::int64_t horizon,
                 const std::vector<std::string>& conditions, std::uint64_t seed,
                 const std::string& out_dir) {
  rftc::SwarmConfig config;
  // Desk-scale training defaults; override via --config or flags.
  config.iterations = 100;
  config.training = {{"C5", 11, 10000}, {"C8", 12, 10000}};
  if (!replay_file.empty()) {
    config = optimize_config_from_json(load_json(replay_file).at("config"));
  } else if (!config_file.empty()) {
    config = optimize_config_from_json(load_json(config_file));
  } else {
    if (iterations > 0) config.iterations = iterations;
    if (particles > 0) config.particles = particles;
    config.rng_seed = seed;
    if (!conditions.empty()) {
      config.training.clear();
      std::uint64_t s = 11;
      for (const std::string& c : conditions) {
        config.training.push_back({c, s++, horizon > 0 ? horizon : 10000});
      }
    } else if (horizon > 0) {
      for (auto& t : config.training) t.horizon = horizon;
    }
  }

  const rftc::OptimizeResult result = rftc::optimize(config, rftc::make_traffic_fitness(config));

  const fs::path dir(out_dir.empty() ? "optimize_out" : out_dir);
  const rftc::MembershipSet best = rftc::decode_mf_set(result.g_best);
  write_file(dir / "gbest_mf.json", rftc::mf_set_to_json(best).dump(2) + "\n");

  std::ostringstream history;
  history << "iteration,gbest_fitness\n" << std::setprecision(17);
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    history << i << ',' << result.history[i] << '\n';
  }
  write_file(dir / "fitness_history.csv", history.str());

  json manifest{{"command", "optimize"}, {"config", optimize_config_json(config)}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "gbest fitness " << std::setprecision(17) << result.g_best_fitness << " after "
            << config.iterations << " iterations; artifacts in " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signalized-roundabout simulation, fuzzy controllers, and PSO tuning"};
  app.require_subcommand(1);

  // simulate
  std::string condition = "C1", scenario_file, controller = "mix", mf_file;
  std::uint64_t seed = 1;
  std::int64_t horizon = 0;
  bool full = false;
  std::string out_file, trace_file, log_file, manifest_file;
  auto* sim = app.add_subcommand("simulate", "Run one condition under one controller");
  sim->add_option("--condition", condition, "Built-in condition C1..C16");
  sim->add_option("--scenario", scenario_file, "Scenario JSON file (overrides --condition)");
  sim->add_option("--controller", controller, "va|turn|jump|mix|mix-opt");
  sim->add_option("--mf-file", mf_file, "Membership document (mix-opt)");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--horizon", horizon, "Horizon in time units");
  sim->add_flag("--full", full, "Full 100,000-unit horizon");
  sim->add_option("--out", out_file, "Metrics CSV path (default stdout)");
  sim->add_option("--trace", trace_file, "Queue-trace CSV path");
  sim->add_option("--log", log_file, "Decision-log CSV path");
  sim->add_option("--manifest", manifest_file, "Manifest JSON path");

  // compare
  rftc::ExperimentPlan plan;
  plan.conditions = {"C5", "C6", "C7", "C8"};
  plan.controllers = {"va", "turn", "jump", "mix"};
  std::string plan_file, out_dir;
  std::uint64_t base_seed = 1;
  int replications = 10;
  bool cmp_full = false;
  auto* cmp = app.add_subcommand("compare", "Run a controller-comparison plan");
  cmp->add_option("--conditions", plan.conditions, "Conditions to run")->delimiter(',');
  cmp->add_option("--controllers", plan.controllers, "Controllers to run")->delimiter(',');
  cmp->add_option("--seeds", replications, "Replications per cell");
  cmp->add_option("--base-seed", base_seed, "First seed");
  cmp->add_option("--horizon", plan.horizon, "Horizon in time units");
  cmp->add_flag("--full", cmp_full, "Full 100,000-unit horizon");
  cmp->add_option("--mf-file", plan.mf_file, "Membership document (mix-opt)");
  cmp->add_option("--threads", plan.threads, "Worker threads (0 = all cores)");
  cmp->add_option("--plan", plan_file, "Plan JSON file (overrides flags)");
  cmp->add_option("--out-dir", out_dir, "Output directory for CSV/report/manifest");

  // optimize
  std::string opt_config, opt_replay, opt_out;
  int opt_iterations = 0, opt_particles = 0;
  std::int64_t opt_horizon = 0;
  std::uint64_t opt_seed = 1;
  std::vector<std::string> opt_conditions;
  auto* opt = app.add_subcommand("optimize", "Tune membership functions with PSO");
  opt->add_option("--config", opt_config, "Swarm config JSON");
  opt->add_option("--replay", opt_replay, "Replay a manifest JSON exactly");
  opt->add_option("--iterations", opt_iterations, "Iterations (G)");
  opt->add_option("--particles", opt_particles, "Particles (M)");
  opt->add_option("--horizon", opt_horizon, "Training horizon");
  opt->add_option("--conditions", opt_conditions, "Training conditions")->delimiter(',');
  opt->add_option("--seed", opt_seed, "Optimizer RNG seed");
  opt->add_option("--out-dir", opt_out, "Output directory");

  // conditions
  std::string export_dir;
  auto* conds = app.add_subcommand("conditions", "Print the built-in traffic conditions");
  conds->add_option("--export", export_dir, "Also write scenario JSON files to a directory");
  conds->add_option("--horizon", horizon, "Horizon used for exported waypoint times");

  app.add_subcommand("phases", "Print the phase-table reference");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(condition, scenario_file, controller, mf_file, seed, horizon, full,
                          out_file, trace_file, log_file, manifest_file);
    }
    if (cmp->parsed()) {
      if (cmp_full) plan.horizon = kFullHorizon;
      plan.seeds = seed_list(base_seed, replications);
      return cmd_compare(plan, plan_file, out_dir);
    }
    if (opt->parsed()) {
      return cmd_optimize(opt_config, opt_replay, opt_iterations, opt_particles, opt_horizon,
                          opt_conditions, opt_seed, opt_out);
    }
    if (conds->parsed()) {
      std::cout << rftc::conditions_reference();
      if (!export_dir.empty()) {
        const std::int64_t h = horizon > 0 ? horizon : kFullHorizon;
        for (const rftc::Condition& c : rftc::builtin_conditions()) {
          const rftc::Scenario s = rftc::make_scenario(c, h, 1);
          write_file(fs::path(export_dir) / (c.name + ".json"),
                     rftc::scenario_to_json(s).dump(2) + "\n");
        }
      }
      return 0;
    }
    std::cout << rftc::phase_table_reference();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
