#include "sumoss/deviation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sumoss/errors.hpp"

namespace sumoss {

void DeviationModel::validate() const {
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
    throw std::invalid_argument("deviation weights w1, w2 must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("deviation gamma must be > 0");
  if (!(regularization >= 0.0) || !std::isfinite(regularization))
    throw std::invalid_argument("deviation regularization must be >= 0");
  if (!loading_pos.finite()) throw std::invalid_argument("loading position must be finite");
}

Eigen::Matrix2d sigma_dev(const Position& target, const DeviationModel& model) {
  model.validate();
  if (!target.finite()) throw std::invalid_argument("deviation target must be finite");
  const double d = distance(target, model.loading_pos);
  Eigen::Matrix2d s;
  s << model.w1 * d + model.gamma, model.gamma, model.gamma, model.w2 * d + model.gamma;
  s.diagonal().array() += model.regularization;
  // [[a, g], [g, c]] is PD iff a > 0 and ac - g^2 > 0. At d = 0 (or w = 0)
  // without regularization ac - g^2 is exactly zero.
  const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  if (!(det > 1e-14 * s(0, 0) * s(1, 1))) {
    std::ostringstream os;
    os << "deviation covariance is singular at d = " << d << " (w1 = " << model.w1
       << ", w2 = " << model.w2 << ", gamma = " << model.gamma
       << ", regularization = " << model.regularization << ")";
    throw DegenerateInputError(os.str());
  }
  return s;
}

Eigen::Matrix2d sigma_dev_factor(const Position& target, const DeviationModel& model) {
  const Eigen::Matrix2d s = sigma_dev(target, model);
  Eigen::Matrix2d l = Eigen::Matrix2d::Zero();
  l(0, 0) = std::sqrt(s(0, 0));
  l(1, 0) = s(1, 0) / l(0, 0);
  l(1, 1) = std::sqrt(s(1, 1) - l(1, 0) * l(1, 0));
  return l;
}

Position sample_landing(const Position& target, const DeviationModel& model, Rng& rng) {
  const Eigen::Matrix2d l = sigma_dev_factor(target, model);
  std::normal_distribution<double> normal;
  Eigen::Vector2d z;
  z(0) = normal(rng);
  z(1) = normal(rng);
  const Eigen::Vector2d eps = l * z;
  return {target.x + eps(0), target.y + eps(1)};
}

JointDraws JointDraws::monte_carlo(std::size_t slots, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be >= 1");
  JointDraws out;
  out.slots_ = slots;
  out.seed_ = seed;
  out.draws_.assign(slots * samples, Eigen::Vector2d::Zero());
  out.weights_.assign(samples, 1.0 / static_cast<double>(samples));
  if (samples == 1) return out;

  Rng rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t s = 0; s < samples; s += 2) {
    for (std::size_t slot = 0; slot < slots; ++slot) {
      Eigen::Vector2d z;
      z(0) = normal(rng);
      z(1) = normal(rng);
      out.draws_[s * slots + slot] = z;
      if (s + 1 < samples) out.draws_[(s + 1) * slots + slot] = -z;
    }
  }
  return out;
}

JointDraws JointDraws::mesh(std::span<const std::size_t> group_of, std::size_t groups) {
  if (groups == 0 || groups > 2) {
    throw std::invalid_argument("tensor mesh supports one or two uncertain sensors");
  }
  for (auto g : group_of) {
    if (g >= groups) throw std::invalid_argument("mesh group index out of range");
  }
  constexpr std::size_t per_sensor = 25;
  std::size_t samples = 1;
  for (std::size_t g = 0; g < groups; ++g) samples *= per_sensor;

  JointDraws out;
  out.slots_ = group_of.size();
  out.draws_.assign(out.slots_ * samples, Eigen::Vector2d::Zero());
  out.weights_.assign(samples, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t rem = s;
    Eigen::Vector2d node[2];
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t local = rem % per_sensor;
      rem /= per_sensor;
      const std::size_t ix = local % 5;
      const std::size_t iy = local / 5;
      node[g] = {GaussHermite5::nodes[ix], GaussHermite5::nodes[iy]};
      out.weights_[s] *= GaussHermite5::weights[ix] * GaussHermite5::weights[iy];
    }
    for (std::size_t slot = 0; slot < out.slots_; ++slot) {
      out.draws_[s * out.slots_ + slot] = node[group_of[slot]];
    }
  }
  return out;
}

DeviationSampleSet build_sample_set(std::span<const Position> targets, const DeviationModel& model,
                                    std::size_t samples_per_config, std::uint64_t seed) {
  const JointDraws draws = JointDraws::monte_carlo(targets.size(), samples_per_config, seed);
  DeviationSampleSet set;
  set.seed = seed;
  set.weights.assign(draws.weights().begin(), draws.weights().end());
  set.offsets.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Eigen::Matrix2d l = sigma_dev_factor(targets[i], model);
    set.offsets[i].reserve(draws.samples());
    for (std::size_t s = 0; s < draws.samples(); ++s) {
      set.offsets[i].push_back(l * draws.draw(s, i));
    }
  }
  return set;
}

}  // namespace sumoss
