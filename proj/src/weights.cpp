#include "weaklab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace weaklab {

WeightScheme WeightScheme::knn(int k) {
  if (k < 1) throw std::invalid_argument("knn: k must be positive");
  WeightScheme s;
  s.kind_ = Kind::Knn;
  s.k_ = k;
  return s;
}

WeightScheme WeightScheme::krr(double lambda, double sigma) {
  if (!(lambda > 0.0)) throw std::invalid_argument("krr: lambda must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("krr: sigma must be positive");
  WeightScheme s;
  s.kind_ = Kind::Krr;
  s.lambda_ = lambda;
  s.sigma_ = sigma;
  return s;
}

WeightScheme WeightScheme::nadaraya_watson(double h, bool normalized) {
  if (!(h > 0.0)) throw std::invalid_argument("nadaraya_watson: bandwidth must be positive");
  WeightScheme s;
  s.kind_ = Kind::NadarayaWatson;
  s.h_ = h;
  s.normalized_ = normalized;
  return s;
}

WeightScheme WeightScheme::fit(const Mat& x) const {
  if (x.rows < 1) throw std::invalid_argument("fit: need at least one training point");
  for (double v : x.data)
    if (!std::isfinite(v)) throw std::invalid_argument("fit: training features must be finite");
  if (kind_ == Kind::Knn && k_ > x.rows)
    throw std::invalid_argument("fit: k exceeds the number of training points");

  WeightScheme out = *this;
  out.x_ = x;
  if (kind_ == Kind::Krr) {
    int n = x.rows;
    Mat gram(n, n);
    double inv = 1.0 / (2.0 * sigma_ * sigma_);
    for (int i = 0; i < n; ++i) {
      gram(i, i) = 1.0 + n * lambda_;
      for (int j = i + 1; j < n; ++j) {
        double kij = std::exp(-squared_distance(&x.data[static_cast<size_t>(i) * x.cols],
                                                &x.data[static_cast<size_t>(j) * x.cols], x.cols) *
                              inv);
        gram(i, j) = kij;
        gram(j, i) = kij;
      }
    }
    out.factor_ = cholesky(gram);
  }
  out.fitted_ = true;
  return out;
}

Vec WeightScheme::weights_at(const Vec& x) const {
  if (!fitted_) throw std::logic_error("weights_at: scheme is not fitted");
  if (static_cast<int>(x.size()) != x_.cols) throw std::invalid_argument("weights_at: feature dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("weights_at: query features must be finite");

  int n = x_.rows;
  Vec alpha(n, 0.0);
  switch (kind_) {
    case Kind::Knn: {
      Vec d2(n);
      for (int i = 0; i < n; ++i) d2[i] = squared_distance(x.data(), &x_.data[static_cast<size_t>(i) * x_.cols], x_.cols);
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(),
                        [&](int a, int b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); });
      for (int r = 0; r < k_; ++r) alpha[idx[r]] = 1.0 / k_;
      break;
    }
    case Kind::Krr: {
      double inv = 1.0 / (2.0 * sigma_ * sigma_);
      Vec kx(n);
      for (int i = 0; i < n; ++i)
        kx[i] = std::exp(-squared_distance(x.data(), &x_.data[static_cast<size_t>(i) * x_.cols], x_.cols) * inv);
      alpha = factor_.solve(kx);
      break;
    }
    case Kind::NadarayaWatson: {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        alpha[i] = std::exp(-squared_distance(x.data(), &x_.data[static_cast<size_t>(i) * x_.cols], x_.cols) / h_);
        total += alpha[i];
      }
      if (normalized_ && total > 0.0)
        for (double& a : alpha) a /= total;
      break;
    }
  }
  return alpha;
}

Mat WeightScheme::weight_matrix() const {
  if (!fitted_) throw std::logic_error("weight_matrix: scheme is not fitted");
  Mat a(x_.rows, x_.rows);
  Vec row(x_.cols);
  for (int i = 0; i < x_.rows; ++i) {
    std::copy_n(&x_.data[static_cast<size_t>(i) * x_.cols], x_.cols, row.begin());
    Vec w = weights_at(row);
    std::copy(w.begin(), w.end(), &a.data[static_cast<size_t>(i) * a.cols]);
  }
  return a;
}

}  // namespace weaklab
