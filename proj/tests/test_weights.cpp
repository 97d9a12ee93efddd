#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "weaklab/rng.hpp"
#include "weaklab/weights.hpp"

using namespace weaklab;

namespace {

Mat line_points(std::initializer_list<double> xs) {
  Mat m(static_cast<int>(xs.size()), 1);
  int i = 0;
  for (double v : xs) m(i++, 0) = v;
  return m;
}

Mat random_points(int n, int d, SplitMix64& rng) {
  Mat m(n, d);
  for (double& v : m.data) v = rng.next_uniform(0.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("knn weights pick the nearest points") {
  WeightScheme s = WeightScheme::knn(2).fit(line_points({0.0, 1.0, 10.0}));
  Vec w = s.weights_at({0.4});
  CHECK(w == Vec{0.5, 0.5, 0.0});
}

TEST_CASE("knn configuration and fit errors") {
  CHECK_THROWS_AS(WeightScheme::knn(0), std::invalid_argument);
  CHECK_THROWS_AS(WeightScheme::knn(5).fit(line_points({0.0, 1.0, 2.0})), std::invalid_argument);
  CHECK_NOTHROW(WeightScheme::knn(1).fit(line_points({0.7})));
  Mat bad(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(WeightScheme::knn(1).fit(bad), std::invalid_argument);
  CHECK_THROWS_AS(WeightScheme::knn(1).weights_at({0.0}), std::logic_error);
}

TEST_CASE("knn rows are k copies of 1/k") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + rng.next_int(30);
    int k = 1 + rng.next_int(n);
    WeightScheme s = WeightScheme::knn(k).fit(random_points(n, 2, rng));
    Mat a = s.weight_matrix();
    for (int i = 0; i < n; ++i) {
      int hits = 0;
      for (int j = 0; j < n; ++j) {
        if (a(i, j) == 0.0) continue;
        CHECK(a(i, j) == 1.0 / k);
        ++hits;
      }
      CHECK(hits == k);
      CHECK(a(i, i) == 1.0 / k);  // a point is its own nearest neighbor
    }
  }
}

TEST_CASE("knn tie-break by lowest index is permutation-stable on distinct distances") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + rng.next_int(10);
    Mat x = random_points(n, 3, rng);
    WeightScheme s = WeightScheme::knn(3).fit(x);
    Vec q(3);
    for (double& v : q) v = rng.next_unit();
    Vec w = s.weights_at(q);

    // reverse the training order, map the weights back
    Mat rev(n, 3);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) rev(i, c) = x(n - 1 - i, c);
    Vec wr = WeightScheme::knn(3).fit(rev).weights_at(q);
    for (int i = 0; i < n; ++i) CHECK(w[i] == wr[n - 1 - i]);
  }
}

TEST_CASE("krr closed form for a single training point") {
  // alpha(x) = k(x, x1) / (k(x1, x1) + lambda), with n = 1
  double lambda = 0.35, sigma = 0.4;
  WeightScheme s = WeightScheme::krr(lambda, sigma).fit(line_points({0.3}));
  for (double q : {0.3, 0.0, 1.2}) {
    double kq = std::exp(-(q - 0.3) * (q - 0.3) / (2 * sigma * sigma));
    Vec w = s.weights_at({q});
    CHECK(w[0] == doctest::Approx(kq / (1.0 + lambda)).epsilon(1e-12));
  }
}

TEST_CASE("krr factorization succeeds on the reference interval setup") {
  SplitMix64 rng(17);
  Mat x = random_points(10, 1, rng);
  CHECK_NOTHROW(WeightScheme::krr(1e-3, 0.1).fit(x));
  CHECK_THROWS_AS(WeightScheme::krr(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(WeightScheme::krr(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("krr weights approach interpolation as lambda decreases") {
  SplitMix64 rng(19);
  Mat x = random_points(5, 1, rng);
  // rows of A should reproduce constants better and better
  double prev = 1e100;
  for (double lambda : {1e-2, 1e-4, 1e-6}) {
    Mat a = WeightScheme::krr(lambda, 0.5).fit(x).weight_matrix();
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      double row = 0.0;
      for (int j = 0; j < 5; ++j) row += a(i, j);
      worst = std::max(worst, std::abs(row - 1.0));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("nadaraya-watson weights normalize and concentrate") {
  SplitMix64 rng(23);
  Mat x = random_points(20, 2, rng);
  WeightScheme s = WeightScheme::nadaraya_watson(0.08, true).fit(x);
  for (int trial = 0; trial < 100; ++trial) {
    Vec q = {rng.next_unit(), rng.next_unit()};
    Vec w = s.weights_at(q);
    double total = 0.0;
    for (double v : w) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }

  // query equal to a training point with all others far away
  Mat spread = line_points({0.0, 50.0, 80.0});
  Vec w = WeightScheme::nadaraya_watson(0.08, true).fit(spread).weights_at({0.0});
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("weight matrix rows equal pointwise weights") {
  SplitMix64 rng(29);
  Mat x = random_points(8, 2, rng);
  for (WeightScheme base :
       {WeightScheme::knn(3), WeightScheme::krr(1e-3, 0.3), WeightScheme::nadaraya_watson(0.1, false)}) {
    WeightScheme s = base.fit(x);
    Mat a = s.weight_matrix();
    for (int i = 0; i < 8; ++i) {
      Vec w = s.weights_at({x(i, 0), x(i, 1)});
      for (int j = 0; j < 8; ++j) CHECK(a(i, j) == w[j]);
    }
  }
}

TEST_CASE("query validation") {
  WeightScheme s = WeightScheme::knn(1).fit(line_points({0.0, 1.0}));
  CHECK_THROWS_AS(s.weights_at({0.0, 1.0}), std::invalid_argument);  // dimension mismatch
  CHECK_THROWS_AS(s.weights_at({std::nan("")}), std::invalid_argument);
}
