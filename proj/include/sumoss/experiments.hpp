#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sumoss/simulator.hpp"

namespace sumoss {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into pre-sized slots, so the
/// outcome never depends on scheduling.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

std::size_t default_threads();

struct MethodRuns {
  Method method = Method::sumoss;
  std::vector<std::uint64_t> seeds;    // seeds of successful runs, ascending
  std::vector<MissionLog> runs;        // parallel to `seeds`
  std::vector<double> mean_curve;      // mean MI(A_n), n = 1..n_max
  std::vector<std::string> failures;   // "seed: message" for excluded runs
};

struct Comparison {
  std::vector<MethodRuns> methods;     // sorted by method name

  const MethodRuns* find(Method m) const;
};

/// Runs every method on the same seed list. Methods share landing noise per
/// (seed, step), so runs are paired. A failing run is excluded from the mean
/// and recorded in `failures`.
Comparison compare_methods(const MissionConfig& base, std::vector<Method> methods,
                           std::vector<std::uint64_t> seeds, std::size_t threads);

struct SweepSpec {
  std::vector<double> w1_values{0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::vector<double> w2_values{0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::size_t runs = 10;
  MissionConfig base;
  std::vector<std::size_t> checkpoints{3, 6, 9, 12};
  std::uint64_t master_seed = 0;

  void validate() const;
};

/// Seed of run `run` in cell (w1, w2): derived from the master seed and the
/// bit patterns of w1 and w2, so adding cells never moves existing seeds.
std::uint64_t sweep_seed(std::uint64_t master, double w1, double w2, std::size_t run);

struct SweepRow {
  double w1 = 0.0;
  double w2 = 0.0;
  std::size_t n = 0;
  double mean_mi_proposed = 0.0;
  double mean_mi_baseline = 0.0;
  double delta_n = 0.0;
  std::size_t runs = 0;  // paired runs that completed for both methods
};

struct SweepCell {
  double w1 = 0.0;
  double w2 = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> proposed_curves;  // per completed seed
  std::vector<std::vector<double>> baseline_curves;
  std::vector<std::string> failures;
  bool complete() const { return failures.empty(); }
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (w1, w2)
  std::vector<SweepRow> rows;    // ordered by (w1, w2, n)
  std::size_t missions_run = 0;

  /// Number of cells with delta_n > 0 at checkpoint n.
  std::size_t positive_cells(std::size_t n) const;
};

/// Runs SuMo-SS and the baseline on the shared per-cell seed list of every
/// (w1, w2) cell and tabulates delta_n = mean proposed - mean baseline at each
/// checkpoint. A pair whose either run fails is dropped from that cell's means
/// and the cell is marked incomplete.
SweepResult sensitivity_sweep(const SweepSpec& spec, std::size_t threads);

}  // namespace sumoss
