#include "sumoss/gp_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sumoss/errors.hpp"

namespace sumoss {

namespace {

void require_finite(const Position& p, const char* what) {
  if (!p.finite()) {
    std::ostringstream os;
    os << what << " has a non-finite coordinate (" << p.x << ", " << p.y << ")";
    throw std::invalid_argument(os.str());
  }
}

Eigen::MatrixXd kernel_matrix(std::span<const Position> positions, const KernelModel& model) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require_finite(positions[i], "position");
    k(i, i) = model.prior_variance();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = kernel_cov(positions[i], positions[j], model);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

void reject_coincident(std::span<const Position> positions, const KernelModel& model) {
  if (model.jitter > 0.0) return;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (positions[i] == positions[j]) {
        std::ostringstream os;
        os << "positions " << i << " and " << j << " coincide at (" << positions[i].x << ", "
           << positions[i].y << ") with zero jitter; covariance is singular";
        throw DegenerateInputError(os.str());
      }
    }
  }
}

}  // namespace

void KernelModel::validate() const {
  if (!(phi > 0.0) || !std::isfinite(phi)) throw std::invalid_argument("kernel phi must be > 0");
  if (!(jitter >= 0.0) || !std::isfinite(jitter))
    throw std::invalid_argument("kernel jitter must be >= 0");
}

double kernel_cov(const Position& a, const Position& b, const KernelModel& model) {
  require_finite(a, "kernel argument");
  require_finite(b, "kernel argument");
  return std::exp(-squared_distance(a, b) / (2.0 * model.phi * model.phi));
}

CovMatrix build_cov(std::span<const Position> positions, const KernelModel& model) {
  model.validate();
  if (positions.empty()) throw std::invalid_argument("build_cov needs at least one position");
  reject_coincident(positions, model);
  return {std::vector<Position>(positions.begin(), positions.end()),
          kernel_matrix(positions, model)};
}

ConditioningFactor::ConditioningFactor(std::span<const Position> conditioning,
                                       const KernelModel& model)
    : points_(conditioning.begin(), conditioning.end()), model_(model) {
  model_.validate();
  if (points_.empty()) return;
  reject_coincident(points_, model_);
  llt_.compute(kernel_matrix(points_, model_));
  if (llt_.info() != Eigen::Success) {
    throw DegenerateInputError("conditioning covariance is not positive definite (" +
                               std::to_string(points_.size()) + " points)");
  }
}

double ConditioningFactor::variance(const Position& target) const {
  const double prior = model_.prior_variance();
  if (points_.empty()) return prior;
  const auto n = static_cast<Eigen::Index>(points_.size());
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel_cov(target, points_[i], model_);
  llt_.matrixL().solveInPlace(k);
  const double v = prior - k.squaredNorm();
  if (!(v > 0.0)) {
    throw DegenerateInputError("conditional variance underflowed to " + std::to_string(v));
  }
  return v;
}

double conditional_variance(const Position& target, std::span<const Position> conditioning,
                            const KernelModel& model) {
  require_finite(target, "target");
  return ConditioningFactor(conditioning, model).variance(target);
}

double delta_from_variances(double var_given_selected, double var_given_others) {
  if (!(var_given_selected > 0.0) || !(var_given_others > 0.0)) {
    throw DegenerateInputError("non-positive conditional variance in delta gain");
  }
  return 0.5 * std::log(var_given_selected / var_given_others);
}

double delta_gain(const Position& candidate, std::span<const Position> selected,
                  std::span<const Position> others, const KernelModel& model) {
  return delta_from_variances(conditional_variance(candidate, selected, model),
                              conditional_variance(candidate, others, model));
}

double gaussian_entropy(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DegenerateInputError("covariance is not positive definite in entropy evaluation");
  }
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) log_det += 2.0 * std::log(diag(i));
  const double k = static_cast<double>(cov.rows());
  return 0.5 * (k * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det);
}

double mi_exact(std::span<const std::size_t> selected, std::span<const Position> all_candidates,
                const KernelModel& model) {
  const std::size_t n = all_candidates.size();
  std::vector<bool> in_a(n, false);
  for (auto idx : selected) {
    if (idx >= n) throw std::out_of_range("selected index outside the candidate set");
    if (in_a[idx]) throw std::invalid_argument("selected index repeated");
    in_a[idx] = true;
  }
  if (selected.empty() || selected.size() >= n) {
    throw std::invalid_argument("mi_exact needs a non-empty proper subset");
  }
  const CovMatrix full = build_cov(all_candidates, model);
  std::vector<Eigen::Index> a_idx;
  std::vector<Eigen::Index> rest_idx;
  for (std::size_t i = 0; i < n; ++i) {
    (in_a[i] ? a_idx : rest_idx).push_back(static_cast<Eigen::Index>(i));
  }
  const Eigen::MatrixXd cov_a = full.entries(a_idx, a_idx);
  const Eigen::MatrixXd cov_rest = full.entries(rest_idx, rest_idx);
  return gaussian_entropy(cov_a) + gaussian_entropy(cov_rest) - gaussian_entropy(full.entries);
}

}  // namespace sumoss
