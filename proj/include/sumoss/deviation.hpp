#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sumoss/geometry.hpp"
#include "sumoss/rng.hpp"

namespace sumoss {

/// Landing-offset model: a sensor dropped at a target that lies d meters from
/// the loading position lands at target + eps, eps ~ N(0, Sigma_dev(d)) with
///
///   Sigma_dev(d) = [[w1 d + gamma, gamma], [gamma, w2 d + gamma]] + rho I.
///
/// rho (`regularization`) keeps Sigma_dev positive definite at d = 0 and for
/// w1 = w2 = 0; set it to zero to get a DegenerateInputError instead.
struct DeviationModel {
  double w1 = 0.3;
  double w2 = 0.2;
  double gamma = 0.01;
  Position loading_pos{-3.0, 2.5};
  double regularization = 1e-6;

  void validate() const;
};

Eigen::Matrix2d sigma_dev(const Position& target, const DeviationModel& model);

/// Lower Cholesky factor of sigma_dev(target).
Eigen::Matrix2d sigma_dev_factor(const Position& target, const DeviationModel& model);

Position sample_landing(const Position& target, const DeviationModel& model, Rng& rng);

enum class ExpectationScheme {
  /// Seeded Monte Carlo draws, antithetic pairs, uniform weights.
  monte_carlo,
  /// 5x5 Gauss-Hermite tensor mesh per uncertain sensor; at most two of them.
  mesh,
};

/// Standard-normal 2-vectors for a batch of joint samples. Entry (s, slot) is
/// the draw that sample s assigns to `slot`; callers map slots to sensors and
/// scale each draw by that sensor's Sigma_dev factor. Weights are per joint
/// sample and sum to one.
class JointDraws {
 public:
  JointDraws() = default;

  /// Monte Carlo. One sample yields the all-zero draw (quadrature at the
  /// mean). Otherwise draws come in antithetic pairs (z, -z).
  static JointDraws monte_carlo(std::size_t slots, std::size_t samples, std::uint64_t seed);

  /// Tensor Gauss-Hermite mesh over one or two groups of slots (25 or 625
  /// samples). Slot i belongs to group `group_of[i]`; slots in one group share
  /// a node.
  static JointDraws mesh(std::span<const std::size_t> group_of, std::size_t groups);

  std::size_t samples() const { return weights_.size(); }
  std::size_t slots() const { return slots_; }
  double weight(std::size_t sample) const { return weights_[sample]; }
  std::span<const double> weights() const { return weights_; }
  Eigen::Vector2d draw(std::size_t sample, std::size_t slot) const {
    return draws_[sample * slots_ + slot];
  }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t slots_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Eigen::Vector2d> draws_;
  std::vector<double> weights_;
};

/// Per-target weighted offsets representing each target's deviation
/// distribution. Joint sample s assigns offsets[i][s] to target i; every
/// target shares the joint weights.
struct DeviationSampleSet {
  std::vector<std::vector<Eigen::Vector2d>> offsets;
  std::vector<double> weights;
  std::uint64_t seed = 0;

  std::size_t samples() const { return weights.size(); }
};

DeviationSampleSet build_sample_set(std::span<const Position> targets, const DeviationModel& model,
                                    std::size_t samples_per_config, std::uint64_t seed);

/// Probabilists' Gauss-Hermite rule, 5 nodes: E[f(Z)] ~ sum w_i f(x_i), Z ~ N(0,1).
struct GaussHermite5 {
  static constexpr double nodes[5] = {-2.8569700138728056, -1.3556261799742657, 0.0,
                                      1.3556261799742657, 2.8569700138728056};
  static constexpr double weights[5] = {0.011257411327720689, 0.22207592200561266,
                                        0.53333333333333333, 0.22207592200561266,
                                        0.011257411327720689};
};

}  // namespace sumoss
