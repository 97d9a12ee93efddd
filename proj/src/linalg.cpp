#include "weaklab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace weaklab {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(Vec& a, double s, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

Vec matvec(const Mat& a, const Vec& x) {
  if (static_cast<int>(x.size()) != a.cols) throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    const double* row = &a.data[static_cast<size_t>(i) * a.cols];
    for (int j = 0; j < a.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

Mat symmetrize(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("symmetrize: matrix not square");
  Mat s(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

double squared_distance(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

Cholesky cholesky(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix not square");
  int n = a.rows;
  Cholesky f;
  f.lower = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (int k = 0; k < j; ++k) diag -= f.lower(j, k) * f.lower(j, k);
    if (diag <= 0.0) throw std::invalid_argument("cholesky: matrix not positive definite");
    double ljj = std::sqrt(diag);
    f.lower(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= f.lower(i, k) * f.lower(j, k);
      f.lower(i, j) = s / ljj;
    }
  }
  return f;
}

Vec Cholesky::solve(const Vec& b) const {
  int n = lower.rows;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cholesky solve: dimension mismatch");
  Vec y(n), x(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= lower(k, i) * x[k];
    x[i] = s / lower(i, i);
  }
  return x;
}

namespace {

double offdiag_mass(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const Mat& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

}  // namespace

EigenSym jacobi_eigen(Mat a, double tol, int max_sweeps) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi_eigen: matrix not square");
  int n = a.rows;
  Mat v = Mat::identity(n);
  double threshold = tol * std::max(1.0, frobenius(a));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_mass(a) <= threshold) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= threshold / (n * n + 1.0)) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenSym out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = v;
  return out;
}

double spectral_norm(const Mat& a, int max_iter, double tol) {
  if (a.rows == 0 || a.cols == 0) return 0.0;
  Mat at = transpose(a);
  Vec v(a.cols);
  for (int i = 0; i < a.cols; ++i) v[i] = 1.0 + 1e-3 * (i % 7);
  double nv = norm2(v);
  for (double& x : v) x /= nv;
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec av = matvec(a, v);
    Vec w = matvec(at, av);
    double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (double& x : w) x /= nw;
    double next = norm2(matvec(a, w));
    v = std::move(w);
    if (sigma > 0.0 && std::abs(next - sigma) <= tol * sigma) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

}  // namespace weaklab
