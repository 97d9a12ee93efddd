#pragma once

#include <vector>

// Small dense linear algebra kit. Everything here is sized for
// desk-scale problems (n up to a few thousand, label spaces up to a
// few dozen); no attempt is made at blocking or vectorization.

namespace weaklab {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n);
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
// a += s * b
void axpy(Vec& a, double s, const Vec& b);

Vec matvec(const Mat& a, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat symmetrize(const Mat& a);

double squared_distance(const double* a, const double* b, int d);

// Cholesky factorization of a symmetric positive definite matrix.
// Throws std::invalid_argument when the matrix is not positive definite.
struct Cholesky {
  Mat lower;
  Vec solve(const Vec& b) const;
};
Cholesky cholesky(const Mat& a);

// Symmetric eigendecomposition by cyclic Jacobi rotations.
// Sweeps until the off-diagonal Frobenius mass drops below
// tol * max(1, ||A||_F). Columns of `vectors` are eigenvectors,
// A = V diag(values) V^T.
struct EigenSym {
  Vec values;
  Mat vectors;
};
EigenSym jacobi_eigen(Mat a, double tol = 1e-12, int max_sweeps = 100);

// Spectral norm ||A||_2 by power iteration on A^T A; stops after
// max_iter iterations or when the relative change falls below tol.
double spectral_norm(const Mat& a, int max_iter = 200, double tol = 1e-10);

}  // namespace weaklab
