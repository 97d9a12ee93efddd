#pragma once

#include "weaklab/linalg.hpp"

namespace weaklab {

// Smoothing coefficients alpha used by disambiguation, inference and the
// baselines. Three schemes:
//   knn  -- 1/k on the k nearest training points, distance ties broken
//           by the lowest training index
//   krr  -- alpha(x) = (K + n*lambda*I)^{-1} K_x with a Gaussian kernel
//           k(x,x') = exp(-|x-x'|^2 / (2 sigma^2)); entries may be
//           negative and rows need not sum to one
//   nw   -- exp(-|x-x_i|^2 / h) per point, optionally normalized
// A fitted scheme is immutable; weights_at is pure.
class WeightScheme {
 public:
  enum class Kind { Knn, Krr, NadarayaWatson };

  static WeightScheme knn(int k);
  static WeightScheme krr(double lambda, double sigma);
  static WeightScheme nadaraya_watson(double h, bool normalized = true);

  WeightScheme fit(const Mat& x) const;
  bool fitted() const { return fitted_; }

  Vec weights_at(const Vec& x) const;
  // A(i, j) = alpha_j(x_i), row i = weights_at(training point i)
  Mat weight_matrix() const;

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  double lambda() const { return lambda_; }
  double sigma() const { return sigma_; }
  double bandwidth() const { return h_; }
  bool normalized() const { return normalized_; }
  int train_size() const { return x_.rows; }
  const Mat& train_x() const { return x_; }

 private:
  WeightScheme() = default;

  Kind kind_ = Kind::Knn;
  int k_ = 0;
  double lambda_ = 0.0, sigma_ = 0.0, h_ = 0.0;
  bool normalized_ = true;
  bool fitted_ = false;
  Mat x_;
  Cholesky factor_;  // krr: (K + n*lambda*I)
};

}  // namespace weaklab
