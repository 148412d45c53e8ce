#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sumoss/deviation.hpp"
#include "sumoss/gp_model.hpp"
#include "sumoss/planners.hpp"

namespace sumoss {

enum class Method { sumoss, baseline, random };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct MissionConfig {
  GridSpec grid;
  KernelModel kernel;
  DeviationModel deviation;
  Method method = Method::sumoss;
  SumossOptions sumoss;
  /// Reuse one joint-sample set for every planning step instead of drawing
  /// fresh samples per step.
  bool reuse_samples = false;
  std::size_t n_max = 12;
  std::uint64_t seed = 0;
  /// Candidate index of the manually placed first sensor; empty means the
  /// candidate nearest the area center.
  std::optional<std::size_t> first_target;

  void validate() const;
};

/// Largest n with n < |V|/2.
std::size_t max_sensors(std::size_t candidates);

struct MissionStep {
  std::size_t n = 0;  // 1-based sensor count after this step
  std::size_t target_index = 0;
  Position target;
  Position landing;
  bool planned = false;  // false for the manually placed first sensor
  double planner_gain = 0.0;
  double true_gain = 0.0;
  double mi_cumulative = 0.0;
  bool landing_adjusted = false;  // landing nudged off a coincident sensor
};

struct MissionLog {
  MissionConfig config;
  std::vector<MissionStep> steps;

  std::vector<double> mi_curve() const;
};

/// Candidate nearest the area center; lowest index on ties.
std::size_t center_candidate(const CandidateSet& v);

/// One planning step of the configured method for the sensor that will make
/// the count `n` (n >= 2). Random picks are credited with the delta an
/// exact-position planner would assign them.
PlanResult plan_next(const MissionConfig& config, const PlanState& state, const CandidateSet& v,
                     std::size_t n);

/// Runs the plan -> drop -> return loop. The first sensor goes to the center
/// candidate unplanned; every later target comes from the configured planner,
/// which only sees previously chosen targets. True landings are sampled per
/// step from a stream derived from (seed, step), so methods sharing a seed
/// also share their landing noise.
MissionLog run_mission(const MissionConfig& config);

/// Ground-truth delta of a landed sensor: chosen sensors at their true
/// landings, unchosen candidates at their nominal positions.
double true_gain(const Position& landing, std::span<const Position> previous_landings,
                 const CandidateSet& v, std::span<const std::size_t> chosen_targets,
                 const KernelModel& kernel);

/// Recomputes MI(A_n) for n = 1..steps from the recorded targets and landings
/// and checks it against the stored curve (1e-9). Throws ValidationError on a
/// malformed or inconsistent log.
std::vector<double> evaluate_log(const MissionLog& log, const KernelModel& kernel);

}  // namespace sumoss
