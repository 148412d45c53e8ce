#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sumoss/experiments.hpp"
#include "sumoss/simulator.hpp"

namespace sumoss {

/// Locale-independent decimal with 10 significant digits ("nan"/"inf" for
/// non-finite values).
std::string format_number(double value);

inline constexpr const char* kCurveCsvHeader =
    "method,seed,n,target_x,target_y,landing_x,landing_y,planner_gain,true_gain,mi_cumulative";
inline constexpr const char* kSweepCsvHeader =
    "w1,w2,n,mean_mi_proposed,mean_mi_baseline,delta_n,runs";

/// Mission log as JSON lines: one "config" record, one "step" record per
/// sensor, one "summary" record. Doubles are written with round-trip
/// precision.
void write_mission_log(std::ostream& out, const MissionLog& log);

/// Inverse of write_mission_log. Throws ValidationError on malformed input.
MissionLog read_mission_log(std::istream& in);

void write_curve_csv(std::ostream& out, const Comparison& comparison);
void write_curve_json(std::ostream& out, const Comparison& comparison);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// JSON mirror of the sweep CSV plus, per row, the rank of delta_n among all
/// cells at the same checkpoint (1 = largest) and the cell's seeds.
void write_sweep_json(std::ostream& out, const SweepResult& result);

/// Planning state file for the `plan` subcommand:
///   {"chosen": [12, 7]}            candidate indices in drop order, or
///   {"targets": [[2.5, 2.5], ...]} positions matched to candidates (1e-6 m).
PlanState read_plan_state(std::istream& in, const CandidateSet& v);

}  // namespace sumoss
