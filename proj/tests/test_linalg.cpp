#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "weaklab/linalg.hpp"
#include "weaklab/rng.hpp"

using namespace weaklab;

namespace {

Mat random_symmetric(int n, SplitMix64& rng) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = rng.next_uniform(-1.0, 1.0);
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

}  // namespace

TEST_CASE("cholesky solves SPD systems") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + rng.next_int(8);
    Mat b(n, n);
    for (double& v : b.data) v = rng.next_uniform(-1.0, 1.0);
    Mat a = matmul(transpose(b), b);
    for (int i = 0; i < n; ++i) a(i, i) += 1.0;
    Vec x(n);
    for (double& v : x) v = rng.next_uniform(-2.0, 2.0);
    Vec rhs = matvec(a, x);
    Vec got = cholesky(a).solve(rhs);
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-9));
  }
}

TEST_CASE("cholesky rejects indefinite matrices") {
  Mat a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  CHECK_THROWS_AS(cholesky(a), std::invalid_argument);
}

TEST_CASE("jacobi eigendecomposition reconstructs symmetric matrices") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + rng.next_int(8);
    Mat a = random_symmetric(n, rng);
    EigenSym eig = jacobi_eigen(a);
    // A = V diag(w) V^T
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double rec = 0.0;
        for (int k = 0; k < n; ++k) rec += eig.values[k] * eig.vectors(i, k) * eig.vectors(j, k);
        CHECK(rec == doctest::Approx(a(i, j)).epsilon(1e-10));
      }
    // orthonormal columns
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double d = 0.0;
        for (int k = 0; k < n; ++k) d += eig.vectors(k, p) * eig.vectors(k, q);
        CHECK(d == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-10));
      }
  }
}

TEST_CASE("spectral norm matches the largest eigenvalue magnitude") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + rng.next_int(7);
    Mat a = random_symmetric(n, rng);
    EigenSym eig = jacobi_eigen(a);
    double want = 0.0;
    for (double v : eig.values) want = std::max(want, std::abs(v));
    CHECK(spectral_norm(a) == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("spectral norm handles rectangular matrices") {
  Mat a(2, 3);
  a(0, 0) = 3.0;  // singular values 3 and 2
  a(1, 2) = 2.0;
  CHECK(spectral_norm(a) == doctest::Approx(3.0).epsilon(1e-9));
}
