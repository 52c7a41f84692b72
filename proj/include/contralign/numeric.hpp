#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace contralign {

/// log(sum(exp(x))) with max subtraction. Returns -inf for an empty input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar max = x.maxCoeff();
  if (!std::isfinite(max)) return max;
  return max + std::log((x.derived().array() - max).exp().sum());
}

/// Numerically stable logistic function.
template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Running log-sum-exp accumulator for streamed scores.
template <typename Scalar>
class LogSumExpAccumulator {
 public:
  void add(Scalar score) {
    if (score <= max_) {
      sum_ += std::exp(score - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - score) + Scalar(1);
      max_ = score;
    }
  }
  Scalar value() const {
    if (sum_ == Scalar(0)) return -std::numeric_limits<Scalar>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  Scalar max_ = -std::numeric_limits<Scalar>::infinity();
  Scalar sum_ = Scalar(0);
};

}  // namespace contralign
