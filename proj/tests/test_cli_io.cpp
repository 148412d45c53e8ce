#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "sumoss/config.hpp"
#include "sumoss/errors.hpp"
#include "sumoss/export.hpp"

using namespace sumoss;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string config_error(const std::string& yaml) {
  try {
    parse_config(yaml, "c.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(format_number(22.14) == "22.14");
  CHECK(format_number(123456789012.0) == "1.23456789e+11");
  CHECK(format_number(1e-12) == "1e-12");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(INFINITY) == "inf");
}

TEST_CASE("parse_config defaults") {
  const RunConfig empty = parse_config("", "x");
  const RunConfig dflt = parse_config(default_config_yaml(), "defaults");
  CHECK(empty.mission.kernel.phi == 1.5);
  CHECK(empty.mission.n_max == 12);
  CHECK(empty.mission.deviation.loading_pos == Position{-3.0, 2.5});
  CHECK(dflt.mission.kernel.phi == empty.mission.kernel.phi);
  CHECK(dflt.mission.kernel.jitter == empty.mission.kernel.jitter);
  CHECK(dflt.mission.deviation.w1 == empty.mission.deviation.w1);
  CHECK(dflt.mission.deviation.regularization == empty.mission.deviation.regularization);
  CHECK(dflt.mission.sumoss.samples == empty.mission.sumoss.samples);
  CHECK(dflt.sweep.w1_values == empty.sweep.w1_values);
  CHECK(dflt.sweep.checkpoints == empty.sweep.checkpoints);
  CHECK(dflt.compare.methods == empty.compare.methods);
}

TEST_CASE("parse_config overrides") {
  const auto cfg = parse_config(R"(area:
  origin: [10, 20]
  rows: 3
  cols: 3
kernel:
  phi: 2.0
deviation:
  w1: 0.35
  loading_pos: [-1, 0]
planner:
  method: baseline
  objective: ratio
  expectation_samples: 64
  expectation: mesh
mission:
  n_max: 4
  seed: 42
  first_sensor: 0
compare:
  runs: 3
  methods: [random]
sweep:
  w1_values: [0.2]
  w2_values: [0.3, 0.4]
  checkpoints: [2, 4]
  seed: 9
)",
                                "o.yaml");
  const auto& m = cfg.mission;
  CHECK(m.grid.rows == 3);
  CHECK(m.kernel.phi == 2.0);
  CHECK(m.deviation.w1 == 0.35);
  CHECK(m.deviation.w2 == 0.2);
  CHECK(m.deviation.loading_pos == Position{9.0, 20.0});
  CHECK(m.method == Method::baseline);
  CHECK(m.sumoss.objective == Objective::ratio);
  CHECK(m.sumoss.scheme == ExpectationScheme::mesh);
  CHECK(m.sumoss.samples == 64);
  CHECK(m.n_max == 4);
  CHECK(m.seed == 42);
  CHECK(m.first_target == std::size_t{0});
  CHECK(cfg.compare.runs == 3);
  CHECK(cfg.compare.methods == std::vector<Method>{Method::random});
  CHECK(cfg.sweep.w2_values.size() == 2);
  CHECK(cfg.sweep.master_seed == 9);
  CHECK(cfg.sweep.base.n_max == 4);
}

TEST_CASE("parse_config errors name the line and key") {
  CHECK(config_error("kernel:\n  phi: 1.0\n  bogus: 2\n") == "c.yaml:3: kernel.bogus: unknown key");
  CHECK(config_error("colors: 1\n") == "c.yaml:1: colors: unknown key");
  CHECK(config_error("kernel:\n  phi: abc\n").starts_with("c.yaml:2: kernel.phi:"));
  CHECK(config_error("kernel:\n  phi: -1\n").starts_with("c.yaml:2: kernel.phi: must be > 0"));
  CHECK(config_error("mission:\n  n_max: 13\n").find("n_max") != std::string::npos);
  CHECK(config_error("planner:\n  method: greedy\n").starts_with("c.yaml:2: planner.method:"));
  CHECK(config_error("deviation:\n  loading_pos: [1]\n").starts_with("c.yaml:2: deviation.loading_pos"));
  CHECK(config_error("sweep:\n  checkpoints: [3, 15]\n").starts_with("c.yaml:2: sweep.checkpoints"));
  CHECK(config_error("kernel: [1, 2\n").starts_with("c.yaml:"));
  CHECK(config_error("kernel: 3\n").find("expected a mapping") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("mission log round trip") {
  MissionConfig c;
  c.seed = 21;
  c.n_max = 5;
  c.sumoss.samples = 8;
  const auto log = run_mission(c);
  std::stringstream buf;
  write_mission_log(buf, log);
  const std::string text = buf.str();

  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 7);
  CHECK(nlohmann::json::parse(lines.front()).at("record") == "config");
  CHECK(nlohmann::json::parse(lines.back()).at("record") == "summary");

  std::istringstream in(text);
  const auto back = read_mission_log(in);
  REQUIRE(back.steps.size() == log.steps.size());
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    CHECK(back.steps[i].landing == log.steps[i].landing);
    CHECK(back.steps[i].mi_cumulative == log.steps[i].mi_cumulative);
    CHECK(back.steps[i].planner_gain == log.steps[i].planner_gain);
  }
  CHECK(back.config.seed == 21);
  CHECK(back.config.deviation.w1 == c.deviation.w1);
  const auto curve = evaluate_log(back, back.config.kernel);
  for (std::size_t i = 0; i < curve.size(); ++i)
    CHECK(std::abs(curve[i] - log.steps[i].mi_cumulative) <= 1e-9);

  std::stringstream again;
  write_mission_log(again, back);
  CHECK(again.str() == text);

  std::istringstream junk("{\"record\":\"config\"}\nnot json\n");
  CHECK_THROWS_AS(read_mission_log(junk), ValidationError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_mission_log(empty), ValidationError);
}

TEST_CASE("curve CSV and JSON") {
  MissionConfig c;
  c.n_max = 3;
  c.sumoss.samples = 8;
  const auto cmp = compare_methods(c, {Method::random, Method::baseline}, {2, 1}, 1);
  std::ostringstream csv;
  write_curve_csv(csv, cmp);
  const auto rows = lines_of(csv.str());
  REQUIRE(rows.size() == 1 + 2 * 2 * 3);
  CHECK(rows[0] == kCurveCsvHeader);
  CHECK(rows[1].starts_with("baseline,1,1,2.5,2.5,"));
  CHECK(rows[4].starts_with("baseline,2,1,"));
  CHECK(rows[7].starts_with("random,1,1,"));

  std::ostringstream js;
  write_curve_json(js, cmp);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j.dump().find("\"baseline\"") != std::string::npos);
}

TEST_CASE("sweep CSV has one row per cell and checkpoint") {
  SweepSpec spec;
  spec.base.n_max = 3;
  spec.base.sumoss.samples = 4;
  spec.w1_values = {0.2, 0.3};
  spec.w2_values = {0.2, 0.3, 0.4};
  spec.runs = 1;
  spec.checkpoints = {1, 3};
  const auto r = sensitivity_sweep(spec, 1);
  std::ostringstream csv;
  write_sweep_csv(csv, r);
  const auto rows = lines_of(csv.str());
  REQUIRE(rows.size() == 1 + 6 * 2);
  CHECK(rows[0] == kSweepCsvHeader);
  CHECK(rows[1].starts_with("0.2,0.2,1,"));
  CHECK(rows.back().starts_with("0.3,0.4,3,"));

  std::ostringstream js;
  write_sweep_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(js.str().find("rank") != std::string::npos);
  CHECK(j.dump().find("delta_n") != std::string::npos);
}

TEST_CASE("read_plan_state") {
  const auto v = make_grid(GridSpec{});
  auto parse = [&](const std::string& s) {
    std::istringstream in(s);
    return read_plan_state(in, v);
  };
  CHECK(parse(R"({"chosen": [12, 0]})").chosen == std::vector<std::size_t>{12, 0});
  CHECK(parse(R"({"targets": [[2.5, 2.5], [0.5, 0.5]]})").chosen == std::vector<std::size_t>{12, 0});
  CHECK(parse(R"({"chosen": []})").chosen.empty());
  CHECK_THROWS_AS(parse(R"({"targets": [[2.4, 2.5]]})"), ValidationError);
  CHECK_THROWS_AS(parse(R"({"chosen": [25]})"), ValidationError);
  CHECK_THROWS_AS(parse(R"({"picked": [1]})"), ValidationError);
  CHECK_THROWS_AS(parse(R"([1, 2])"), ValidationError);
  CHECK_THROWS_AS(parse("{"), ValidationError);
}
