#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sumoss/deviation.hpp"
#include "sumoss/geometry.hpp"
#include "sumoss/gp_model.hpp"
#include "sumoss/rng.hpp"

namespace sumoss {

/// The finite set V of drop targets.
struct CandidateSet {
  std::vector<Position> candidates;
  Rect area;

  std::size_t size() const { return candidates.size(); }
  const Position& operator[](std::size_t i) const { return candidates[i]; }
  void validate() const;
};

enum class GridLayout { cell_center, edge_inclusive };

struct GridSpec {
  Rect area{{0.0, 0.0}, 5.0, 5.0};
  std::size_t rows = 5;
  std::size_t cols = 5;
  GridLayout layout = GridLayout::cell_center;
};

/// Row-major grid (index = row * cols + col, row along y).
CandidateSet make_grid(const GridSpec& spec);

/// Targets chosen so far, as candidate indices in drop order. Never holds true
/// landing positions.
struct PlanState {
  std::vector<std::size_t> chosen;

  std::size_t step() const { return chosen.size(); }
};

/// Throws CapacityError when another sensor may not be planned for `state`:
/// no free candidate, or more than |V|/2 targets already chosen. Throws
/// std::invalid_argument for repeated or out-of-range indices.
void check_plannable(const PlanState& state, const CandidateSet& v);

struct PlanResult {
  std::size_t index = 0;
  double gain = 0.0;
};

struct CandidateGain {
  std::size_t index = 0;
  double gain = 0.0;
};

/// delta_y of every free candidate with the chosen targets taken as exact
/// sensor positions, ascending by index.
std::vector<CandidateGain> baseline_gains(const PlanState& state, const CandidateSet& v,
                                          const KernelModel& kernel);

/// argmax_y delta_y over free candidates; lowest index wins ties.
PlanResult plan_baseline(const PlanState& state, const CandidateSet& v, const KernelModel& kernel);

enum class Objective {
  /// E[1/2 log(sigma^2_{y|A} / sigma^2_{y|Abar})], the expected delta.
  log,
  /// E[sigma^2_{y|A} / sigma^2_{y|Abar}].
  ratio,
};

struct SumossOptions {
  Objective objective = Objective::log;
  std::size_t samples = 128;
  ExpectationScheme scheme = ExpectationScheme::monte_carlo;
};

/// Per-sample objective values behind one SuMo-SS planning step.
struct SumossEvaluation {
  std::vector<std::size_t> candidates;  // free candidates, ascending
  Eigen::MatrixXd values;               // candidates x joint samples
  std::vector<double> weights;          // joint-sample weights, sum to 1
  std::vector<double> expected;         // weighted row sums of `values`
};

/// Each joint sample perturbs every chosen target and the evaluated candidate
/// by that sensor's own deviation draw. Draws are indexed by candidate, so a
/// sensor keeps its offset across candidates and across nested chosen sets.
/// The remaining candidates stay at their nominal positions.
SumossEvaluation evaluate_sumoss(const PlanState& state, const CandidateSet& v,
                                 const KernelModel& kernel, const DeviationModel& dev,
                                 const SumossOptions& options, std::uint64_t seed);

PlanResult plan_sumoss(const PlanState& state, const CandidateSet& v, const KernelModel& kernel,
                       const DeviationModel& dev, const SumossOptions& options,
                       std::uint64_t seed);

std::size_t plan_random(const PlanState& state, const CandidateSet& v, Rng& rng);

std::string_view to_string(Objective o);
std::string_view to_string(ExpectationScheme s);
std::string_view to_string(GridLayout l);

}  // namespace sumoss
