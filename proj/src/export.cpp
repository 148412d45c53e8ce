#include "sumoss/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sumoss/errors.hpp"

namespace sumoss {

using nlohmann::json;

namespace {

json position_json(const Position& p) { return json::array({p.x, p.y}); }

Position position_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("expected [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json config_json(const MissionConfig& c) {
  const Position origin = c.grid.area.origin;
  json first = c.first_target ? json(*c.first_target) : json("center");
  return {
      {"area",
       {{"origin", position_json(origin)},
        {"width", c.grid.area.width},
        {"height", c.grid.area.height},
        {"rows", c.grid.rows},
        {"cols", c.grid.cols},
        {"layout", std::string(to_string(c.grid.layout))}}},
      {"kernel", {{"phi", c.kernel.phi}, {"jitter", c.kernel.jitter}}},
      {"deviation",
       {{"w1", c.deviation.w1},
        {"w2", c.deviation.w2},
        {"gamma", c.deviation.gamma},
        {"regularization", c.deviation.regularization},
        {"loading_pos", position_json(c.deviation.loading_pos)}}},
      {"planner",
       {{"method", std::string(to_string(c.method))},
        {"objective", std::string(to_string(c.sumoss.objective))},
        {"expectation_samples", c.sumoss.samples},
        {"expectation", std::string(to_string(c.sumoss.scheme))},
        {"reuse_samples", c.reuse_samples}}},
      {"mission", {{"n_max", c.n_max}, {"seed", c.seed}, {"first_sensor", first}}},
  };
}

MissionConfig config_from(const json& j) {
  MissionConfig c;
  const json& area = j.at("area");
  c.grid.area.origin = position_from(area.at("origin"));
  c.grid.area.width = area.at("width").get<double>();
  c.grid.area.height = area.at("height").get<double>();
  c.grid.rows = area.at("rows").get<std::size_t>();
  c.grid.cols = area.at("cols").get<std::size_t>();
  const auto layout = area.at("layout").get<std::string>();
  if (layout == "cell_center") {
    c.grid.layout = GridLayout::cell_center;
  } else if (layout == "edge_inclusive") {
    c.grid.layout = GridLayout::edge_inclusive;
  } else {
    throw ValidationError("unknown grid layout " + layout);
  }
  c.kernel.phi = j.at("kernel").at("phi").get<double>();
  c.kernel.jitter = j.at("kernel").at("jitter").get<double>();
  const json& dev = j.at("deviation");
  c.deviation.w1 = dev.at("w1").get<double>();
  c.deviation.w2 = dev.at("w2").get<double>();
  c.deviation.gamma = dev.at("gamma").get<double>();
  c.deviation.regularization = dev.at("regularization").get<double>();
  c.deviation.loading_pos = position_from(dev.at("loading_pos"));
  const json& planner = j.at("planner");
  const auto method = parse_method(planner.at("method").get<std::string>());
  if (!method) throw ValidationError("unknown method in log");
  c.method = *method;
  c.sumoss.objective =
      planner.at("objective").get<std::string>() == "ratio" ? Objective::ratio : Objective::log;
  c.sumoss.samples = planner.at("expectation_samples").get<std::size_t>();
  c.sumoss.scheme = planner.at("expectation").get<std::string>() == "mesh"
                        ? ExpectationScheme::mesh
                        : ExpectationScheme::monte_carlo;
  c.reuse_samples = planner.at("reuse_samples").get<bool>();
  const json& mission = j.at("mission");
  c.n_max = mission.at("n_max").get<std::size_t>();
  c.seed = mission.at("seed").get<std::uint64_t>();
  if (mission.at("first_sensor").is_number_unsigned()) {
    c.first_target = mission.at("first_sensor").get<std::size_t>();
  }
  return c;
}

json step_json(const MissionStep& s) {
  return {{"record", "step"},
          {"n", s.n},
          {"target_index", s.target_index},
          {"target", position_json(s.target)},
          {"landing", position_json(s.landing)},
          {"planned", s.planned},
          {"planner_gain", s.planner_gain},
          {"true_gain", s.true_gain},
          {"mi_cumulative", s.mi_cumulative},
          {"landing_adjusted", s.landing_adjusted}};
}

MissionStep step_from(const json& j) {
  MissionStep s;
  s.n = j.at("n").get<std::size_t>();
  s.target_index = j.at("target_index").get<std::size_t>();
  s.target = position_from(j.at("target"));
  s.landing = position_from(j.at("landing"));
  s.planned = j.at("planned").get<bool>();
  s.planner_gain = j.at("planner_gain").get<double>();
  s.true_gain = j.at("true_gain").get<double>();
  s.mi_cumulative = j.at("mi_cumulative").get<double>();
  s.landing_adjusted = j.at("landing_adjusted").get<bool>();
  return s;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

void write_mission_log(std::ostream& out, const MissionLog& log) {
  json head = config_json(log.config);
  head["record"] = "config";
  out << head.dump() << '\n';
  for (const auto& s : log.steps) out << step_json(s).dump() << '\n';
  const auto curve = log.mi_curve();
  json summary = {{"record", "summary"},
                  {"steps", log.steps.size()},
                  {"seed", log.config.seed},
                  {"method", std::string(to_string(log.config.method))},
                  {"mi_curve", curve},
                  {"mi_final", curve.empty() ? 0.0 : curve.back()}};
  out << summary.dump() << '\n';
}

MissionLog read_mission_log(std::istream& in) {
  MissionLog log;
  bool have_config = false;
  bool have_summary = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto kind = j.at("record").get<std::string>();
      if (have_summary) throw ValidationError("record after summary");
      if (kind == "config") {
        if (have_config) throw ValidationError("duplicate config record");
        log.config = config_from(j);
        have_config = true;
      } else if (kind == "step") {
        if (!have_config) throw ValidationError("step before config record");
        log.steps.push_back(step_from(j));
      } else if (kind == "summary") {
        if (j.at("steps").get<std::size_t>() != log.steps.size())
          throw ValidationError("summary step count mismatch");
        have_summary = true;
      } else {
        throw ValidationError("unknown record type " + kind);
      }
    } catch (const json::exception& e) {
      throw ValidationError("mission log line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("mission log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_config || !have_summary) throw ValidationError("mission log is incomplete");
  return log;
}

void write_curve_csv(std::ostream& out, const Comparison& comparison) {
  out << kCurveCsvHeader << '\n';
  for (const auto& m : comparison.methods) {
    for (std::size_t r = 0; r < m.runs.size(); ++r) {
      for (const auto& s : m.runs[r].steps) {
        out << to_string(m.method) << ',' << m.seeds[r] << ',' << s.n << ','
            << format_number(s.target.x) << ',' << format_number(s.target.y) << ','
            << format_number(s.landing.x) << ',' << format_number(s.landing.y) << ','
            << format_number(s.planner_gain) << ',' << format_number(s.true_gain) << ','
            << format_number(s.mi_cumulative) << '\n';
      }
    }
  }
}

void write_curve_json(std::ostream& out, const Comparison& comparison) {
  json methods = json::array();
  for (const auto& m : comparison.methods) {
    json runs = json::array();
    for (std::size_t r = 0; r < m.runs.size(); ++r) {
      json steps = json::array();
      for (const auto& s : m.runs[r].steps) {
        json row = step_json(s);
        row.erase("record");
        steps.push_back(std::move(row));
      }
      runs.push_back({{"seed", m.seeds[r]}, {"steps", std::move(steps)}});
    }
    methods.push_back({{"method", std::string(to_string(m.method))},
                       {"seeds", m.seeds},
                       {"mean_curve", m.mean_curve},
                       {"failures", m.failures},
                       {"runs", std::move(runs)}});
  }
  out << json{{"methods", std::move(methods)}}.dump(1) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << format_number(r.w1) << ',' << format_number(r.w2) << ',' << r.n << ','
        << format_number(r.mean_mi_proposed) << ',' << format_number(r.mean_mi_baseline) << ','
        << format_number(r.delta_n) << ',' << r.runs << '\n';
  }
}

void write_sweep_json(std::ostream& out, const SweepResult& result) {
  // Rank of delta_n within each checkpoint; equal values share the better rank.
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& r : result.rows) by_n[r.n].push_back(r.delta_n);
  for (auto& [n, deltas] : by_n) std::sort(deltas.begin(), deltas.end(), std::greater<>());

  json rows = json::array();
  for (const auto& r : result.rows) {
    const auto& sorted = by_n[r.n];
    const auto rank = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), r.delta_n, std::greater<>()) -
        sorted.begin()) + 1;
    rows.push_back({{"w1", r.w1},
                    {"w2", r.w2},
                    {"n", r.n},
                    {"mean_mi_proposed", r.mean_mi_proposed},
                    {"mean_mi_baseline", r.mean_mi_baseline},
                    {"delta_n", r.delta_n},
                    {"runs", r.runs},
                    {"rank", rank}});
  }
  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"w1", c.w1},
                     {"w2", c.w2},
                     {"seeds", c.seeds},
                     {"complete", c.complete()},
                     {"failures", c.failures}});
  }
  json summary = json::object();
  for (const auto& [n, deltas] : by_n) {
    summary[std::to_string(n)] = {{"positive_cells", result.positive_cells(n)},
                                  {"cells", deltas.size()}};
  }
  out << json{{"missions_run", result.missions_run},
              {"positive_delta", std::move(summary)},
              {"rows", std::move(rows)},
              {"cells", std::move(cells)}}
             .dump(1)
      << '\n';
}

PlanState read_plan_state(std::istream& in, const CandidateSet& v) {
  PlanState state;
  try {
    const json j = json::parse(in);
    if (!j.is_object()) throw ValidationError("state file must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (key != "chosen" && key != "targets")
        throw ValidationError("unknown key '" + key + "' in state file");
    }
    if (j.contains("chosen") && j.contains("targets"))
      throw ValidationError("state file must give either 'chosen' or 'targets'");
    if (j.contains("chosen")) {
      state.chosen = j.at("chosen").get<std::vector<std::size_t>>();
    } else if (j.contains("targets")) {
      for (const auto& t : j.at("targets")) {
        const Position p = position_from(t);
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i) {
          if (squared_distance(v[i], p) < squared_distance(v[best], p)) best = i;
        }
        if (distance(v[best], p) > 1e-6) {
          throw ValidationError("target (" + format_number(p.x) + ", " + format_number(p.y) +
                                ") is not a candidate position");
        }
        state.chosen.push_back(best);
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("state file: ") + e.what());
  }
  for (auto i : state.chosen) {
    if (i >= v.size()) throw ValidationError("state file index out of range");
  }
  return state;
}

}  // namespace sumoss
