#include "sumoss/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sumoss/errors.hpp"
#include "sumoss/rng.hpp"

namespace sumoss {

namespace {

constexpr double kCoincidence = 1e-9;
constexpr double kNudge = 1e-6;
constexpr double kLogTolerance = 1e-9;

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::sumoss: return "sumoss";
    case Method::baseline: return "baseline";
    case Method::random: return "random";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "sumoss") return Method::sumoss;
  if (name == "baseline") return Method::baseline;
  if (name == "random") return Method::random;
  return std::nullopt;
}

std::size_t max_sensors(std::size_t candidates) { return (candidates - 1) / 2; }

void MissionConfig::validate() const {
  kernel.validate();
  deviation.validate();
  if (grid.rows < 2 || grid.cols < 2) throw ConfigError("grid dimensions must be at least 2x2");
  const std::size_t v = grid.rows * grid.cols;
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (n_max > max_sensors(v)) {
    throw ConfigError("n_max = " + std::to_string(n_max) +
                      " exceeds the largest integer below |V|/2 (" +
                      std::to_string(max_sensors(v)) + ")");
  }
  if (sumoss.samples < 1) throw ConfigError("expectation_samples must be >= 1");
  if (first_target && *first_target >= v) throw ConfigError("first target index out of range");
}

std::vector<double> MissionLog::mi_curve() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.mi_cumulative);
  return out;
}

std::size_t center_candidate(const CandidateSet& v) {
  const Position c = v.area.center();
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (squared_distance(v[i], c) < squared_distance(v[best], c)) best = i;
  }
  return best;
}

double true_gain(const Position& landing, std::span<const Position> previous_landings,
                 const CandidateSet& v, std::span<const std::size_t> chosen_targets,
                 const KernelModel& kernel) {
  std::vector<bool> chosen(v.size(), false);
  for (auto i : chosen_targets) chosen[i] = true;
  std::vector<Position> others;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!chosen[i]) others.push_back(v[i]);
  }
  return delta_gain(landing, previous_landings, others, kernel);
}

PlanResult plan_next(const MissionConfig& config, const PlanState& state, const CandidateSet& v,
                     std::size_t n) {
  switch (config.method) {
    case Method::baseline:
      return plan_baseline(state, v, config.kernel);
    case Method::sumoss: {
      const std::uint64_t seed =
          stream_seed(config.seed, Stream::sumoss, config.reuse_samples ? 0 : n);
      return plan_sumoss(state, v, config.kernel, config.deviation, config.sumoss, seed);
    }
    case Method::random: {
      Rng rng(stream_seed(config.seed, Stream::random, n));
      PlanResult r{plan_random(state, v, rng), 0.0};
      for (const auto& g : baseline_gains(state, v, config.kernel)) {
        if (g.index == r.index) r.gain = g.gain;
      }
      return r;
    }
  }
  throw std::logic_error("unhandled planner method");
}

MissionLog run_mission(const MissionConfig& config) {
  config.validate();
  const CandidateSet v = make_grid(config.grid);

  MissionLog log;
  log.config = config;
  PlanState state;
  std::vector<Position> landings;
  double mi = 0.0;

  for (std::size_t n = 1; n <= config.n_max; ++n) {
    MissionStep step;
    step.n = n;
    if (n == 1) {
      step.target_index = config.first_target.value_or(center_candidate(v));
    } else {
      const PlanResult r = plan_next(config, state, v, n);
      step.target_index = r.index;
      step.planner_gain = r.gain;
      step.planned = true;
    }
    step.target = v[step.target_index];

    Rng landing_rng(stream_seed(config.seed, Stream::landing, n));
    Position landing = sample_landing(step.target, config.deviation, landing_rng);
    for (bool clash = true; clash;) {
      clash = false;
      for (const auto& p : landings) {
        if (distance(p, landing) <= kCoincidence) {
          landing.x += kNudge;
          step.landing_adjusted = true;
          clash = true;
        }
      }
    }
    step.landing = landing;

    state.chosen.push_back(step.target_index);
    if (n >= 2) step.true_gain = true_gain(landing, landings, v, state.chosen, config.kernel);
    landings.push_back(landing);
    mi += step.true_gain;
    step.mi_cumulative = mi;
    log.steps.push_back(step);
  }
  return log;
}

std::vector<double> evaluate_log(const MissionLog& log, const KernelModel& kernel) {
  const CandidateSet v = make_grid(log.config.grid);
  if (log.steps.size() > log.config.n_max) {
    throw ValidationError("log has more steps than n_max");
  }
  std::vector<std::size_t> chosen;
  std::vector<Position> landings;
  std::vector<double> curve;
  double mi = 0.0;
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const MissionStep& s = log.steps[k];
    std::ostringstream where;
    where << "step " << k + 1 << ": ";
    if (s.n != k + 1) throw ValidationError(where.str() + "step numbers out of sequence");
    if (s.target_index >= v.size()) throw ValidationError(where.str() + "target index out of range");
    if (!(v[s.target_index] == s.target))
      throw ValidationError(where.str() + "target does not match its candidate position");
    if (!s.landing.finite()) throw ValidationError(where.str() + "landing is not finite");
    for (auto c : chosen) {
      if (c == s.target_index) throw ValidationError(where.str() + "target chosen twice");
    }
    chosen.push_back(s.target_index);
    const double gain = k == 0 ? 0.0 : true_gain(s.landing, landings, v, chosen, kernel);
    landings.push_back(s.landing);
    mi += gain;
    if (std::abs(mi - s.mi_cumulative) > kLogTolerance) {
      std::ostringstream os;
      os << where.str() << "stored MI " << s.mi_cumulative << " differs from recomputed " << mi;
      throw ValidationError(os.str());
    }
    curve.push_back(mi);
  }
  return curve;
}

}  // namespace sumoss
