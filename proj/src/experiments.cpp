#include "sumoss/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "sumoss/errors.hpp"
#include "sumoss/rng.hpp"

namespace sumoss {

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::size_t default_threads() {
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

const MethodRuns* Comparison::find(Method m) const {
  for (const auto& r : methods) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

namespace {

std::vector<double> mean_of(const std::vector<std::vector<double>>& curves, std::size_t len) {
  std::vector<double> mean(len, 0.0);
  if (curves.empty()) return mean;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < len; ++i) mean[i] += c[i];
  }
  for (auto& m : mean) m /= static_cast<double>(curves.size());
  return mean;
}

struct Outcome {
  std::vector<double> curve;
  std::optional<MissionLog> log;
  std::string error;
};

Outcome run_one(MissionConfig config, bool keep_log) {
  Outcome out;
  try {
    MissionLog log = run_mission(config);
    out.curve = log.mi_curve();
    if (keep_log) out.log = std::move(log);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

Comparison compare_methods(const MissionConfig& base, std::vector<Method> methods,
                           std::vector<std::uint64_t> seeds, std::size_t threads) {
  if (seeds.empty()) throw std::invalid_argument("compare_methods needs at least one seed");
  base.validate();
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return to_string(a) < to_string(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<Outcome> outcomes(methods.size() * seeds.size());
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    MissionConfig c = base;
    c.method = methods[i / seeds.size()];
    c.seed = seeds[i % seeds.size()];
    outcomes[i] = run_one(c, true);
  });

  Comparison result;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodRuns runs;
    runs.method = methods[m];
    std::vector<std::vector<double>> curves;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      Outcome& o = outcomes[m * seeds.size() + s];
      if (!o.error.empty()) {
        runs.failures.push_back(std::to_string(seeds[s]) + ": " + o.error);
        continue;
      }
      runs.seeds.push_back(seeds[s]);
      curves.push_back(o.curve);
      runs.runs.push_back(std::move(*o.log));
    }
    runs.mean_curve = mean_of(curves, base.n_max);
    result.methods.push_back(std::move(runs));
  }
  return result;
}

void SweepSpec::validate() const {
  if (runs < 1) throw ConfigError("sweep runs must be >= 1");
  if (w1_values.empty() || w2_values.empty()) throw ConfigError("sweep needs w1 and w2 values");
  for (auto n : checkpoints) {
    if (n < 1 || n > base.n_max) {
      throw ConfigError("sweep checkpoint " + std::to_string(n) + " outside 1..n_max");
    }
  }
  base.validate();
}

std::uint64_t sweep_seed(std::uint64_t master, double w1, double w2, std::size_t run) {
  return derive_seed(master, {static_cast<std::uint64_t>(Stream::sweep),
                              std::bit_cast<std::uint64_t>(w1), std::bit_cast<std::uint64_t>(w2),
                              static_cast<std::uint64_t>(run)});
}

std::size_t SweepResult::positive_cells(std::size_t n) const {
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.n == n && r.delta_n > 0.0) ++count;
  }
  return count;
}

SweepResult sensitivity_sweep(const SweepSpec& spec, std::size_t threads) {
  spec.validate();
  std::vector<double> w1s = spec.w1_values;
  std::vector<double> w2s = spec.w2_values;
  std::sort(w1s.begin(), w1s.end());
  std::sort(w2s.begin(), w2s.end());
  std::vector<std::size_t> checkpoints = spec.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  constexpr Method kMethods[2] = {Method::sumoss, Method::baseline};
  const std::size_t cells = w1s.size() * w2s.size();
  const std::size_t per_cell = spec.runs * 2;
  std::vector<Outcome> outcomes(cells * per_cell);
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    const std::size_t cell = i / per_cell;
    const std::size_t run = (i % per_cell) / 2;
    MissionConfig c = spec.base;
    c.deviation.w1 = w1s[cell / w2s.size()];
    c.deviation.w2 = w2s[cell % w2s.size()];
    c.method = kMethods[i % 2];
    c.seed = sweep_seed(spec.master_seed, c.deviation.w1, c.deviation.w2, run);
    outcomes[i] = run_one(c, false);
  });

  SweepResult result;
  result.missions_run = outcomes.size();
  for (std::size_t cell = 0; cell < cells; ++cell) {
    SweepCell sc;
    sc.w1 = w1s[cell / w2s.size()];
    sc.w2 = w2s[cell % w2s.size()];
    for (std::size_t run = 0; run < spec.runs; ++run) {
      const Outcome& proposed = outcomes[cell * per_cell + run * 2];
      const Outcome& baseline = outcomes[cell * per_cell + run * 2 + 1];
      const std::uint64_t seed = sweep_seed(spec.master_seed, sc.w1, sc.w2, run);
      if (!proposed.error.empty() || !baseline.error.empty()) {
        sc.failures.push_back(std::to_string(seed) + ": " +
                              (proposed.error.empty() ? baseline.error : proposed.error));
        continue;
      }
      sc.seeds.push_back(seed);
      sc.proposed_curves.push_back(proposed.curve);
      sc.baseline_curves.push_back(baseline.curve);
    }
    const auto mean_p = mean_of(sc.proposed_curves, spec.base.n_max);
    const auto mean_b = mean_of(sc.baseline_curves, spec.base.n_max);
    for (auto n : checkpoints) {
      SweepRow row;
      row.w1 = sc.w1;
      row.w2 = sc.w2;
      row.n = n;
      row.mean_mi_proposed = mean_p[n - 1];
      row.mean_mi_baseline = mean_b[n - 1];
      row.delta_n = row.mean_mi_proposed - row.mean_mi_baseline;
      row.runs = sc.seeds.size();
      result.rows.push_back(row);
    }
    result.cells.push_back(std::move(sc));
  }
  return result;
}

}  // namespace sumoss
