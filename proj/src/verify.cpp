#include "sumoss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sumoss/deviation.hpp"
#include "sumoss/gp_model.hpp"
#include "sumoss/planners.hpp"
#include "sumoss/rng.hpp"
#include "sumoss/simulator.hpp"

namespace sumoss {

namespace {

std::vector<Position> random_positions(Rng& rng, std::size_t n, double box) {
  std::uniform_real_distribution<double> u(0.0, box);
  std::vector<Position> out(n);
  for (auto& p : out) p = {u(rng), u(rng)};
  return out;
}

SuiteReport oracle_suite(std::size_t instances, Rng& rng) {
  std::uniform_real_distribution<double> phi(0.5, 3.0);
  double worst = 0.0;
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 4 + rng() % 7;
    KernelModel model;
    model.phi = phi(rng);
    const auto v = random_positions(rng, n, 5.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t k = 1 + rng() % (n - 2);
    std::vector<std::size_t> a(order.begin(), order.begin() + static_cast<long>(k));
    const std::size_t y = order[k];
    std::vector<Position> sel;
    std::vector<Position> others;
    for (auto i : a) sel.push_back(v[i]);
    for (std::size_t i = k + 1; i < n; ++i) others.push_back(v[order[i]]);
    auto ay = a;
    ay.push_back(y);
    const double err = std::abs(delta_gain(v[y], sel, others, model) -
                                (mi_exact(ay, v, model) - mi_exact(a, v, model)));
    worst = std::max(worst, err);
  }
  std::ostringstream os;
  os << instances << " instances, worst |error| = " << worst;
  return {"delta_gain vs log-det MI", worst <= 1e-8, os.str()};
}

SuiteReport greedy_suite(std::size_t instances, Rng& rng) {
  const double bound = 1.0 - std::exp(-1.0);
  std::size_t violations = 0;
  double ratio_sum = 0.0;
  for (std::size_t t = 0; t < instances; ++t) {
    CandidateSet v;
    v.candidates = random_positions(rng, 8, 5.0);
    KernelModel model;
    PlanState state;
    state.chosen.push_back(plan_baseline(state, v, model).index);
    while (state.chosen.size() < 3) state.chosen.push_back(plan_baseline(state, v, model).index);
    const double greedy = mi_exact(state.chosen, v.candidates, model);
    double best = -1e300;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        for (std::size_t k = j + 1; k < 8; ++k) {
          const std::size_t s[3] = {i, j, k};
          best = std::max(best, mi_exact(s, v.candidates, model));
        }
    if (greedy < bound * best) ++violations;
    ratio_sum += greedy / best;
  }
  std::ostringstream os;
  os << instances << " instances, violations = " << violations
     << ", mean greedy/optimal = " << ratio_sum / static_cast<double>(instances);
  return {"greedy vs exhaustive (|V|=8, k=3)", violations == 0, os.str()};
}

SuiteReport moment_suite(Rng& rng) {
  DeviationModel model;
  model.w1 = 0.3;
  model.w2 = 0.2;
  model.gamma = 0.01;
  model.loading_pos = {0.0, 0.0};
  const Position target{2.0, 0.0};
  const Eigen::Matrix2d expected = sigma_dev(target, model);
  constexpr int samples = 10000;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> xs;
  xs.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const Position p = sample_landing(target, model, rng);
    xs.emplace_back(p.x - target.x, p.y - target.y);
    mean += xs.back();
  }
  mean /= samples;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& x : xs) cov += (x - mean) * (x - mean).transpose();
  cov /= samples - 1;
  bool ok = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double tol = std::max(0.1 * std::abs(expected(i, j)), 0.02);
      ok = ok && std::abs(cov(i, j) - expected(i, j)) <= tol;
    }
  std::ostringstream os;
  os << "sample cov [[" << cov(0, 0) << ", " << cov(0, 1) << "], [" << cov(1, 0) << ", "
     << cov(1, 1) << "]] vs [[" << expected(0, 0) << ", " << expected(0, 1) << "], ["
     << expected(1, 0) << ", " << expected(1, 1) << "]]";
  return {"landing sampler moments", ok, os.str()};
}

SuiteReport submodularity_suite(std::size_t pairs, Rng& rng) {
  GridSpec spec;
  const CandidateSet v = make_grid(spec);
  const KernelModel kernel;
  DeviationModel dev;
  SumossOptions options;
  options.samples = 64;
  double worst = -1e300;
  std::size_t violations = 0;
  for (std::size_t t = 0; t < pairs; ++t) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t b_size = 2 + rng() % (max_sensors(v.size()) - 1);
    const std::size_t a_size = 1 + rng() % (b_size - 1);
    PlanState a{{order.begin(), order.begin() + static_cast<long>(a_size)}};
    PlanState b{{order.begin(), order.begin() + static_cast<long>(b_size)}};
    const std::uint64_t seed = rng();
    const auto ea = evaluate_sumoss(a, v, kernel, dev, options, seed);
    const auto eb = evaluate_sumoss(b, v, kernel, dev, options, seed);
    for (std::size_t cb = 0; cb < eb.candidates.size(); ++cb) {
      const auto it = std::find(ea.candidates.begin(), ea.candidates.end(), eb.candidates[cb]);
      const auto ca = static_cast<std::size_t>(it - ea.candidates.begin());
      const double diff = eb.expected[cb] - ea.expected[ca];
      worst = std::max(worst, diff);
      if (diff > 1e-6) ++violations;
    }
  }
  std::ostringstream os;
  os << pairs << " nested pairs, violations = " << violations
     << ", max gain(y|B) - gain(y|A) = " << worst;
  return {"expected-gain submodularity", violations == 0, os.str()};
}

}  // namespace

std::vector<SuiteReport> run_verification(bool small, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SuiteReport> out;
  out.push_back(oracle_suite(small ? 40 : 200, rng));
  out.push_back(greedy_suite(small ? 10 : 50, rng));
  out.push_back(moment_suite(rng));
  out.push_back(submodularity_suite(small ? 10 : 100, rng));
  return out;
}

}  // namespace sumoss
