// sumoss: plan, simulate and benchmark sensor-scattering missions.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumoss/config.hpp"
#include "sumoss/errors.hpp"
#include "sumoss/experiments.hpp"
#include "sumoss/export.hpp"
#include "sumoss/planners.hpp"
#include "sumoss/simulator.hpp"
#include "sumoss/verify.hpp"

namespace fs = std::filesystem;
using namespace sumoss;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kDegenerate = 3,
  kCapacity = 4,
  kValidation = 5,
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> method;
  std::optional<std::size_t> samples;
  std::size_t threads = default_threads();
};

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? parse_config("", "<defaults>") : load_config(c.config_path);
  if (c.seed) {
    cfg.mission.seed = *c.seed;
    cfg.sweep.master_seed = *c.seed;
  }
  if (c.method) {
    const auto m = parse_method(*c.method);
    if (!m) throw ConfigError("--method: unknown method '" + *c.method + "'");
    cfg.mission.method = *m;
    cfg.compare.methods = {*m};
  }
  if (c.samples) {
    if (*c.samples < 1) throw ConfigError("--samples must be >= 1");
    cfg.mission.sumoss.samples = *c.samples;
  }
  cfg.mission.validate();
  cfg.sweep.base = cfg.mission;
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void add_common(CLI::App* sub, Common& c, bool with_method) {
  sub->add_option("--config", c.config_path, "YAML configuration file");
  sub->add_option("--seed", c.seed, "mission seed (sweep: master seed)");
  sub->add_option("--out", c.out_dir, "output directory");
  if (with_method) sub->add_option("--method", c.method, "sumoss | baseline | random");
  sub->add_option("--samples", c.samples, "expectation samples for SuMo-SS");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

int cmd_plan(const Common& common, const std::string& state_path) {
  const RunConfig cfg = resolve(common);
  const CandidateSet v = make_grid(cfg.mission.grid);
  std::ifstream in(state_path);
  if (!in) throw ConfigError("cannot open state file " + state_path);
  const PlanState state = read_plan_state(in, v);
  const MissionConfig& m = cfg.mission;
  const std::size_t step = state.chosen.size() + 1;

  const PlanResult result = plan_next(m, state, v, step);
  const nlohmann::json out = {{"method", std::string(to_string(m.method))},
                              {"step", step},
                              {"index", result.index},
                              {"target", {v[result.index].x, v[result.index].y}},
                              {"gain", result.gain}};
  std::cout << out.dump() << '\n';
  return kOk;
}

int cmd_simulate(const Common& common) {
  const RunConfig cfg = resolve(common);
  const MissionLog log = run_mission(cfg.mission);
  const fs::path path = fs::path(common.out_dir) / ("mission_" + std::string(to_string(log.config.method)) +
                                                   "_seed" + std::to_string(log.config.seed) + ".jsonl");
  auto out = open_out(path);
  write_mission_log(out, log);
  std::cout << path.string() << ": MI(A_" << log.steps.size()
            << ") = " << format_number(log.steps.back().mi_cumulative) << '\n';
  return kOk;
}

int cmd_compare(const Common& common) {
  const RunConfig cfg = resolve(common);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cfg.compare.runs; ++i) seeds.push_back(cfg.mission.seed + i);
  const Comparison cmp = compare_methods(cfg.mission, cfg.compare.methods, seeds, common.threads);
  const fs::path dir(common.out_dir);
  {
    auto out = open_out(dir / "curves.csv");
    write_curve_csv(out, cmp);
  }
  {
    auto out = open_out(dir / "curves.json");
    write_curve_json(out, cmp);
  }
  int status = kOk;
  for (const auto& m : cmp.methods) {
    std::cout << to_string(m.method) << ": mean MI(A_" << cfg.mission.n_max
              << ") = " << format_number(m.mean_curve.back()) << " over " << m.seeds.size()
              << " runs";
    if (!m.failures.empty()) {
      std::cout << " (" << m.failures.size() << " failed)";
      status = kFailure;
    }
    std::cout << '\n';
  }
  return status;
}

int cmd_sweep(const Common& common) {
  const RunConfig cfg = resolve(common);
  const SweepResult result = sensitivity_sweep(cfg.sweep, common.threads);
  const fs::path dir(common.out_dir);
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, result);
  }
  {
    auto out = open_out(dir / "sweep.json");
    write_sweep_json(out, result);
  }
  std::cout << result.missions_run << " missions\n";
  int status = kOk;
  for (auto n : cfg.sweep.checkpoints) {
    std::cout << "delta_" << n << " > 0 in " << result.positive_cells(n) << "/"
              << result.cells.size() << " cells\n";
  }
  for (const auto& c : result.cells) {
    if (!c.complete()) status = kFailure;
  }
  return status;
}

int cmd_verify(bool small, std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : run_verification(small, seed)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-scattering planner and simulation benchmark"};
  app.require_subcommand(1);

  Common common;
  std::string state_path;
  bool small = false;
  std::uint64_t verify_seed = 0;

  auto* plan = app.add_subcommand("plan", "print the next drop target for a state file");
  add_common(plan, common, true);
  plan->add_option("--state", state_path, "JSON state file of prior targets")->required();

  auto* simulate = app.add_subcommand("simulate", "run one mission and write its log");
  add_common(simulate, common, true);

  auto* compare = app.add_subcommand("compare", "compare methods on paired seeds (CSV + JSON)");
  add_common(compare, common, true);

  auto* sweep = app.add_subcommand("sweep", "run the (w1, w2) sensitivity sweep (CSV + JSON)");
  add_common(sweep, common, false);

  auto* verify = app.add_subcommand("verify", "run the oracle self-checks");
  verify->add_flag("--small", small, "reduced instance counts");
  verify->add_option("--seed", verify_seed, "seed for random instances");

  auto* defaults = app.add_subcommand("defaults", "print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*plan) return cmd_plan(common, state_path);
    if (*simulate) return cmd_simulate(common);
    if (*compare) return cmd_compare(common);
    if (*sweep) return cmd_sweep(common);
    if (*verify) return cmd_verify(small, verify_seed);
    if (*defaults) {
      std::cout << default_config_yaml();
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DegenerateInputError& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return kDegenerate;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
