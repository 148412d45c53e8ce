#include "sumoss/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sumoss/errors.hpp"

namespace sumoss {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& key,
                         const std::string& message) const {
    std::ostringstream os;
    os << source_;
    if (node.Mark().line >= 0) os << ":" << node.Mark().line + 1;
    os << ": " << key << ": " << message;
    throw ConfigError(os.str());
  }

  /// Rejects keys of `map` not listed in `allowed`.
  void check_keys(const YAML::Node& map, const std::string& section,
                  const std::set<std::string>& allowed) const {
    if (!map.IsMap()) fail(map, section, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) {
        fail(kv.first, section.empty() ? key : section + "." + key, "unknown key");
      }
    }
  }

  template <typename T>
  void read(const YAML::Node& map, const std::string& section, const char* key, T& out) const {
    const YAML::Node node = map[key];
    if (!node) return;
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, section + "." + key, "has the wrong type");
    }
  }

  void read_position(const YAML::Node& map, const std::string& section, const char* key,
                     Position& out) const {
    const YAML::Node node = map[key];
    if (!node) return;
    std::vector<double> xy;
    read(map, section, key, xy);
    if (xy.size() != 2) fail(node, section + "." + key, "expected [x, y]");
    out = {xy[0], xy[1]};
  }

  template <typename Check>
  void require(const YAML::Node& map, const std::string& section, const char* key, bool ok,
               Check&& message) const {
    if (!ok) fail(map[key] ? map[key] : map, section + "." + key, message());
  }

 private:
  std::string source_;
};

Method read_method(const Reader& r, const YAML::Node& node, const std::string& key) {
  const auto name = node.as<std::string>();
  const auto m = parse_method(name);
  if (!m) r.fail(node, key, "unknown method '" + name + "' (sumoss | baseline | random)");
  return *m;
}

RunConfig parse_document(std::string_view text, std::string_view source) {
  const Reader r{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": syntax error: " << e.msg;
    throw ConfigError(os.str());
  }

  RunConfig cfg;
  if (root.IsNull()) {
    cfg.sweep.base = cfg.mission;
    return cfg;
  }
  r.check_keys(root, "",
               {"area", "kernel", "deviation", "planner", "mission", "compare", "sweep"});

  MissionConfig& m = cfg.mission;
  Position loading_rel = m.deviation.loading_pos;

  if (const auto area = root["area"]) {
    r.check_keys(area, "area", {"origin", "width", "height", "rows", "cols", "layout"});
    r.read_position(area, "area", "origin", m.grid.area.origin);
    r.read(area, "area", "width", m.grid.area.width);
    r.read(area, "area", "height", m.grid.area.height);
    r.read(area, "area", "rows", m.grid.rows);
    r.read(area, "area", "cols", m.grid.cols);
    std::string layout(to_string(m.grid.layout));
    r.read(area, "area", "layout", layout);
    if (layout == "cell_center") {
      m.grid.layout = GridLayout::cell_center;
    } else if (layout == "edge_inclusive") {
      m.grid.layout = GridLayout::edge_inclusive;
    } else {
      r.fail(area["layout"], "area.layout", "expected cell_center | edge_inclusive");
    }
    r.require(area, "area", "width", m.grid.area.width > 0, [] { return "must be > 0"; });
    r.require(area, "area", "height", m.grid.area.height > 0, [] { return "must be > 0"; });
    r.require(area, "area", "rows", m.grid.rows >= 2, [] { return "must be >= 2"; });
    r.require(area, "area", "cols", m.grid.cols >= 2, [] { return "must be >= 2"; });
  }

  if (const auto kernel = root["kernel"]) {
    r.check_keys(kernel, "kernel", {"phi", "jitter"});
    r.read(kernel, "kernel", "phi", m.kernel.phi);
    r.read(kernel, "kernel", "jitter", m.kernel.jitter);
    r.require(kernel, "kernel", "phi", m.kernel.phi > 0, [] { return "must be > 0"; });
    r.require(kernel, "kernel", "jitter", m.kernel.jitter >= 0, [] { return "must be >= 0"; });
  }

  if (const auto dev = root["deviation"]) {
    r.check_keys(dev, "deviation", {"w1", "w2", "gamma", "regularization", "loading_pos"});
    r.read(dev, "deviation", "w1", m.deviation.w1);
    r.read(dev, "deviation", "w2", m.deviation.w2);
    r.read(dev, "deviation", "gamma", m.deviation.gamma);
    r.read(dev, "deviation", "regularization", m.deviation.regularization);
    r.read_position(dev, "deviation", "loading_pos", loading_rel);
    r.require(dev, "deviation", "w1", m.deviation.w1 >= 0, [] { return "must be >= 0"; });
    r.require(dev, "deviation", "w2", m.deviation.w2 >= 0, [] { return "must be >= 0"; });
    r.require(dev, "deviation", "gamma", m.deviation.gamma > 0, [] { return "must be > 0"; });
    r.require(dev, "deviation", "regularization", m.deviation.regularization >= 0,
              [] { return "must be >= 0"; });
  }
  m.deviation.loading_pos = {m.grid.area.origin.x + loading_rel.x,
                             m.grid.area.origin.y + loading_rel.y};

  if (const auto planner = root["planner"]) {
    r.check_keys(planner, "planner",
                 {"method", "objective", "expectation_samples", "expectation", "reuse_samples"});
    if (planner["method"]) m.method = read_method(r, planner["method"], "planner.method");
    std::string objective(to_string(m.sumoss.objective));
    r.read(planner, "planner", "objective", objective);
    if (objective == "log") {
      m.sumoss.objective = Objective::log;
    } else if (objective == "ratio") {
      m.sumoss.objective = Objective::ratio;
    } else {
      r.fail(planner["objective"], "planner.objective", "expected log | ratio");
    }
    r.read(planner, "planner", "expectation_samples", m.sumoss.samples);
    r.require(planner, "planner", "expectation_samples", m.sumoss.samples >= 1,
              [] { return "must be >= 1"; });
    std::string scheme(to_string(m.sumoss.scheme));
    r.read(planner, "planner", "expectation", scheme);
    if (scheme == "mc") {
      m.sumoss.scheme = ExpectationScheme::monte_carlo;
    } else if (scheme == "mesh") {
      m.sumoss.scheme = ExpectationScheme::mesh;
    } else {
      r.fail(planner["expectation"], "planner.expectation", "expected mc | mesh");
    }
    r.read(planner, "planner", "reuse_samples", m.reuse_samples);
  }

  if (const auto mission = root["mission"]) {
    r.check_keys(mission, "mission", {"n_max", "seed", "first_sensor"});
    r.read(mission, "mission", "n_max", m.n_max);
    r.read(mission, "mission", "seed", m.seed);
    if (const auto first = mission["first_sensor"]) {
      if (first.as<std::string>() == "center") {
        m.first_target.reset();
      } else {
        std::size_t idx = 0;
        r.read(mission, "mission", "first_sensor", idx);
        m.first_target = idx;
      }
    }
  }

  if (const auto compare = root["compare"]) {
    r.check_keys(compare, "compare", {"runs", "methods"});
    r.read(compare, "compare", "runs", cfg.compare.runs);
    r.require(compare, "compare", "runs", cfg.compare.runs >= 1, [] { return "must be >= 1"; });
    if (const auto methods = compare["methods"]) {
      if (!methods.IsSequence() || methods.size() == 0)
        r.fail(methods, "compare.methods", "expected a non-empty list");
      cfg.compare.methods.clear();
      for (const auto& item : methods) {
        cfg.compare.methods.push_back(read_method(r, item, "compare.methods"));
      }
    }
  }

  if (const auto sweep = root["sweep"]) {
    r.check_keys(sweep, "sweep", {"w1_values", "w2_values", "runs", "checkpoints", "seed"});
    r.read(sweep, "sweep", "w1_values", cfg.sweep.w1_values);
    r.read(sweep, "sweep", "w2_values", cfg.sweep.w2_values);
    r.read(sweep, "sweep", "runs", cfg.sweep.runs);
    r.read(sweep, "sweep", "checkpoints", cfg.sweep.checkpoints);
    r.read(sweep, "sweep", "seed", cfg.sweep.master_seed);
    r.require(sweep, "sweep", "runs", cfg.sweep.runs >= 1, [] { return "must be >= 1"; });
    r.require(sweep, "sweep", "w1_values", !cfg.sweep.w1_values.empty(),
              [] { return "must not be empty"; });
    r.require(sweep, "sweep", "w2_values", !cfg.sweep.w2_values.empty(),
              [] { return "must not be empty"; });
    for (auto n : cfg.sweep.checkpoints) {
      r.require(sweep, "sweep", "checkpoints", n >= 1 && n <= m.n_max,
                [] { return "checkpoints must lie in 1..n_max"; });
    }
  }

  try {
    m.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  cfg.sweep.base = m;
  return cfg;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
  try {
    return parse_document(text, source);
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string default_config_yaml() {
  return R"(area:
  origin: [0.0, 0.0]
  width: 5.0
  height: 5.0
  rows: 5
  cols: 5
  layout: cell_center
kernel:
  phi: 1.5
  jitter: 1.0e-9
deviation:
  w1: 0.3
  w2: 0.2
  gamma: 0.01
  regularization: 1.0e-6
  loading_pos: [-3.0, 2.5]   # relative to area.origin
planner:
  method: sumoss
  objective: log             # log | ratio
  expectation_samples: 128
  expectation: mc            # mc | mesh
  reuse_samples: false
mission:
  n_max: 12
  seed: 0
  first_sensor: center       # or a candidate index
compare:
  runs: 10
  methods: [sumoss, baseline, random]
sweep:
  w1_values: [0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
  w2_values: [0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
  runs: 10
  checkpoints: [3, 6, 9, 12]
  seed: 0
)";
}

}  // namespace sumoss
