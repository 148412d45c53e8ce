#include "sumoss/planners.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "sumoss/errors.hpp"

namespace sumoss {

namespace {

std::vector<bool> chosen_mask(const PlanState& state, std::size_t n) {
  std::vector<bool> mask(n, false);
  for (auto i : state.chosen) mask[i] = true;
  return mask;
}

std::vector<Position> positions_of(const CandidateSet& v, std::span<const std::size_t> idx) {
  std::vector<Position> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

/// Nominal positions of V \ (A u {y}).
std::vector<Position> others_of(const CandidateSet& v, const std::vector<bool>& chosen,
                                std::size_t y) {
  std::vector<Position> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!chosen[i] && i != y) out.push_back(v[i]);
  }
  return out;
}

// Gains within a relative 1e-12 count as tied, so symmetric candidates
// resolve to the lowest index despite rounding noise.
constexpr double kTieTolerance = 1e-12;

template <typename Gains>
PlanResult argmax_lowest_index(const Gains& gains) {
  std::optional<PlanResult> best;
  for (const auto& g : gains) {
    if (!best || g.gain > best->gain + kTieTolerance * std::max(1.0, std::abs(best->gain)))
      best = PlanResult{g.index, g.gain};
  }
  return *best;
}

}  // namespace

void CandidateSet::validate() const {
  if (candidates.size() < 2) throw std::invalid_argument("candidate set needs at least 2 points");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].finite()) throw std::invalid_argument("candidate position not finite");
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (candidates[i] == candidates[j]) {
        throw std::invalid_argument("candidates " + std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      }
    }
  }
}

CandidateSet make_grid(const GridSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw std::invalid_argument("grid must be at least 2x2");
  if (!(spec.area.width > 0.0) || !(spec.area.height > 0.0))
    throw std::invalid_argument("grid area must have positive extent");
  auto coord = [&](std::size_t i, std::size_t count, double extent) {
    if (spec.layout == GridLayout::cell_center) {
      return (static_cast<double>(i) + 0.5) * extent / static_cast<double>(count);
    }
    return static_cast<double>(i) * extent / static_cast<double>(count - 1);
  };
  CandidateSet v;
  v.area = spec.area;
  v.candidates.reserve(spec.rows * spec.cols);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      v.candidates.push_back({spec.area.origin.x + coord(c, spec.cols, spec.area.width),
                              spec.area.origin.y + coord(r, spec.rows, spec.area.height)});
    }
  }
  return v;
}

void check_plannable(const PlanState& state, const CandidateSet& v) {
  const std::size_t n = v.size();
  std::vector<bool> seen(n, false);
  for (auto i : state.chosen) {
    if (i >= n) throw std::invalid_argument("chosen index " + std::to_string(i) + " out of range");
    if (seen[i]) throw std::invalid_argument("chosen index " + std::to_string(i) + " repeated");
    seen[i] = true;
  }
  if (state.chosen.size() >= n) throw CapacityError("no unchosen candidate left");
  if (2 * state.chosen.size() > n) {
    std::ostringstream os;
    os << state.chosen.size() << " targets already chosen exceeds |V|/2 = " << n / 2.0;
    throw CapacityError(os.str());
  }
}

std::vector<CandidateGain> baseline_gains(const PlanState& state, const CandidateSet& v,
                                          const KernelModel& kernel) {
  check_plannable(state, v);
  const auto chosen = chosen_mask(state, v.size());
  const ConditioningFactor given_selected(positions_of(v, state.chosen), kernel);
  std::vector<CandidateGain> gains;
  for (std::size_t y = 0; y < v.size(); ++y) {
    if (chosen[y]) continue;
    const ConditioningFactor given_others(others_of(v, chosen, y), kernel);
    gains.push_back(
        {y, delta_from_variances(given_selected.variance(v[y]), given_others.variance(v[y]))});
  }
  return gains;
}

PlanResult plan_baseline(const PlanState& state, const CandidateSet& v, const KernelModel& kernel) {
  return argmax_lowest_index(baseline_gains(state, v, kernel));
}

SumossEvaluation evaluate_sumoss(const PlanState& state, const CandidateSet& v,
                                 const KernelModel& kernel, const DeviationModel& dev,
                                 const SumossOptions& options, std::uint64_t seed) {
  check_plannable(state, v);
  const std::size_t n = v.size();
  const auto chosen = chosen_mask(state, n);

  JointDraws draws;
  if (options.scheme == ExpectationScheme::mesh && state.chosen.size() <= 1) {
    // Group 0: the chosen sensor (if any). Last group: whichever candidate is
    // being evaluated.
    std::vector<std::size_t> group_of(n, state.chosen.empty() ? 0 : 1);
    if (!state.chosen.empty()) group_of[state.chosen.front()] = 0;
    draws = JointDraws::mesh(group_of, state.chosen.empty() ? 1 : 2);
  } else {
    draws = JointDraws::monte_carlo(n, options.samples, seed);
  }

  std::vector<Eigen::Matrix2d> factor(n);
  for (std::size_t i = 0; i < n; ++i) factor[i] = sigma_dev_factor(v[i], dev);
  auto perturbed = [&](std::size_t s, std::size_t i) {
    const Eigen::Vector2d eps = factor[i] * draws.draw(s, i);
    return Position{v[i].x + eps(0), v[i].y + eps(1)};
  };

  SumossEvaluation out;
  for (std::size_t y = 0; y < n; ++y) {
    if (!chosen[y]) out.candidates.push_back(y);
  }
  const std::size_t samples = draws.samples();
  out.weights.assign(draws.weights().begin(), draws.weights().end());
  out.values.resize(static_cast<Eigen::Index>(out.candidates.size()),
                    static_cast<Eigen::Index>(samples));

  std::vector<ConditioningFactor> given_others;
  given_others.reserve(out.candidates.size());
  for (auto y : out.candidates) given_others.emplace_back(others_of(v, chosen, y), kernel);

  std::vector<Position> selected(state.chosen.size());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < state.chosen.size(); ++j) selected[j] = perturbed(s, state.chosen[j]);
    const ConditioningFactor given_selected(selected, kernel);
    for (std::size_t c = 0; c < out.candidates.size(); ++c) {
      const Position y = perturbed(s, out.candidates[c]);
      const double num = given_selected.variance(y);
      const double den = given_others[c].variance(y);
      out.values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(s)) =
          options.objective == Objective::log ? delta_from_variances(num, den) : num / den;
    }
  }

  out.expected.resize(out.candidates.size());
  for (std::size_t c = 0; c < out.candidates.size(); ++c) {
    double acc = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      acc += out.weights[s] * out.values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(s));
    }
    out.expected[c] = acc;
  }
  return out;
}

PlanResult plan_sumoss(const PlanState& state, const CandidateSet& v, const KernelModel& kernel,
                       const DeviationModel& dev, const SumossOptions& options,
                       std::uint64_t seed) {
  const SumossEvaluation eval = evaluate_sumoss(state, v, kernel, dev, options, seed);
  std::vector<CandidateGain> gains;
  gains.reserve(eval.candidates.size());
  for (std::size_t c = 0; c < eval.candidates.size(); ++c) {
    gains.push_back({eval.candidates[c], eval.expected[c]});
  }
  return argmax_lowest_index(gains);
}

std::size_t plan_random(const PlanState& state, const CandidateSet& v, Rng& rng) {
  check_plannable(state, v);
  const auto chosen = chosen_mask(state, v.size());
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!chosen[i]) free.push_back(i);
  }
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  return free[pick(rng)];
}

std::string_view to_string(Objective o) { return o == Objective::log ? "log" : "ratio"; }

std::string_view to_string(ExpectationScheme s) {
  return s == ExpectationScheme::monte_carlo ? "mc" : "mesh";
}

std::string_view to_string(GridLayout l) {
  return l == GridLayout::cell_center ? "cell_center" : "edge_inclusive";
}

}  // namespace sumoss
