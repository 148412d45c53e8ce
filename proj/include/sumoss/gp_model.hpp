#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sumoss/geometry.hpp"

namespace sumoss {

/// Squared-exponential sensor model. Covariances between sensor observations
/// depend only on the sensor positions: k(a, b) = exp(-|a - b|^2 / (2 phi^2)).
struct KernelModel {
  double phi = 1.5;
  double jitter = 1e-9;
  /// Mean of a single observation. Carried for completeness; no quantity in
  /// this library depends on it.
  double prior_mean = 0.0;

  double prior_variance() const { return 1.0 + jitter; }
  void validate() const;
};

double kernel_cov(const Position& a, const Position& b, const KernelModel& model);

struct CovMatrix {
  std::vector<Position> labels;
  Eigen::MatrixXd entries;
};

/// Full covariance of the observations at `positions`, jitter on the diagonal.
/// Throws DegenerateInputError for coincident positions when jitter is zero.
CovMatrix build_cov(std::span<const Position> positions, const KernelModel& model);

/// Cholesky factor of a conditioning set, reusable for many targets.
class ConditioningFactor {
 public:
  ConditioningFactor(std::span<const Position> conditioning, const KernelModel& model);

  /// sigma^2_{y|S} for a target y; equals prior_variance() when S is empty.
  double variance(const Position& target) const;
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Position> points_;
  KernelModel model_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

double conditional_variance(const Position& target, std::span<const Position> conditioning,
                            const KernelModel& model);

/// delta_y = 1/2 log(sigma^2_{y|selected} / sigma^2_{y|others}).
/// `others` are the positions of the candidates that are neither selected nor
/// the candidate itself.
double delta_gain(const Position& candidate, std::span<const Position> selected,
                  std::span<const Position> others, const KernelModel& model);

/// Same as delta_gain, from already computed conditional variances.
double delta_from_variances(double var_given_selected, double var_given_others);

/// MI(A) = H(A) + H(V \ A) - H(V) from Gaussian log-determinants.
/// `selected` indexes into `all_candidates`; it must be non-empty and proper.
/// Independent of the conditional-variance route above; used as an oracle and
/// for reporting.
double mi_exact(std::span<const std::size_t> selected, std::span<const Position> all_candidates,
                const KernelModel& model);

/// Gaussian differential entropy 1/2 log((2 pi e)^k det cov).
double gaussian_entropy(const Eigen::MatrixXd& cov);

}  // namespace sumoss
