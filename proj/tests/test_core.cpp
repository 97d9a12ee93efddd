#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "weaklab/core.hpp"
#include "weaklab/rng.hpp"

using namespace weaklab;

namespace {

// the three-label simplex example: labels a=0, b=1, c=2
Mat simplex_matrix() {
  Mat l(3, 3);
  l(0, 1) = l(1, 0) = 1.0;
  l(0, 2) = l(2, 0) = 1.0;
  l(1, 2) = l(2, 1) = 2.0;
  return l;
}

Mat random_proper_matrix(int m, SplitMix64& rng) {
  Mat l(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = rng.next_uniform(0.1, 5.0);
      l(i, j) = v;
      l(j, i) = v;
    }
  return l;
}

double reconstruction_error(const Mat& l, const QuadraticDecomposition& d) {
  double worst = 0.0;
  for (int i = 0; i < l.rows; ++i)
    for (int j = 0; j < l.rows; ++j) {
      double rec = dot(d.psi[i], d.psi[j]) - dot(d.phi[i], d.phi[j]);
      worst = std::max(worst, std::abs(rec - l(i, j)));
    }
  return worst;
}

double norm_spread(const QuadraticDecomposition& d) {
  double worst = 0.0;
  for (size_t k = 0; k < d.psi.size(); ++k) {
    worst = std::max(worst, std::abs(norm2(d.psi[k]) - d.norm_const));
    worst = std::max(worst, std::abs(norm2(d.phi[k]) - d.norm_const));
  }
  return worst;
}

}  // namespace

TEST_CASE("label space validation and enumeration") {
  CHECK_THROWS_AS(LabelSpace::classes(0), std::invalid_argument);
  CHECK_THROWS_AS(LabelSpace::real_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(LabelSpace::real_grid(1.0, 0.0, 10), std::invalid_argument);

  CHECK(LabelSpace::classes(5).enumerate().size() == 5);
  CHECK(LabelSpace::permutations(4).enumerate().size() == 24);
  CHECK(LabelSpace::real_grid(0.0, 1.0, 11).enumerate().size() == 11);

  LabelSpace grid = LabelSpace::real_grid(-1.0, 1.0, 5);  // points -1,-.5,0,.5,1
  CHECK(grid.nearest_grid_index(0.1) == 2);
  CHECK(grid.nearest_grid_index(-2.0) == 0);
  CHECK(grid.nearest_grid_index(2.0) == 4);
  CHECK(grid.nearest_grid_index(0.25) == 2);  // exact midpoint resolves down

  CHECK(LabelSpace::classes(3).contains(Label(2)));
  CHECK_FALSE(LabelSpace::classes(3).contains(Label(3)));
  CHECK_FALSE(LabelSpace::classes(3).contains(Label(0.5)));
  CHECK(LabelSpace::permutations(3).contains(Label(Perm{2, 0, 1})));
  CHECK_FALSE(LabelSpace::permutations(3).contains(Label(Perm{2, 2, 1})));
}

TEST_CASE("weak set validation") {
  CHECK_THROWS_AS(WeakSet::explicit_set({}), std::invalid_argument);
  CHECK_THROWS_AS(WeakSet::interval(2.0, 1.0), std::invalid_argument);

  WeakSet dedup = WeakSet::explicit_set({Label(2), Label(0), Label(2)});
  CHECK(dedup.labels.size() == 2);
  CHECK(as_class(dedup.labels[0]) == 0);

  // antisymmetry: (0,1,+1) and (1,0,+1) claim both orders at once
  CHECK_THROWS_AS(WeakSet::partial_order(3, {{0, 1, 1}, {1, 0, 1}}), std::invalid_argument);
  // cycle: y0 > y1 > y2 > y0
  CHECK_THROWS_AS(WeakSet::partial_order(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}), std::invalid_argument);
  CHECK_NOTHROW(WeakSet::partial_order(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));

  WeakSet po = WeakSet::partial_order(3, {{2, 0, 1}});
  CHECK(po.observed_sign(2, 0) == 1);
  CHECK(po.observed_sign(0, 2) == -1);
  CHECK(po.observed_sign(0, 1) == 0);
  CHECK(po.consistent_with({0, 1, 2}));
  CHECK_FALSE(po.consistent_with({2, 1, 0}));
}

TEST_CASE("loss_eval on the simplex example") {
  LossPtr loss = matrix_loss(simplex_matrix());
  CHECK(loss_eval(*loss, Label(1), Label(2)) == 2.0);  // l(b, c)
  CHECK(loss_eval(*loss, Label(0), Label(1)) == 1.0);  // l(a, b)
  for (int y = 0; y < 3; ++y) CHECK(loss_eval(*loss, Label(y), Label(y)) == 0.0);
  CHECK_THROWS_AS(loss_eval(*loss, Label(3), Label(0)), std::invalid_argument);
}

TEST_CASE("loss diagonal is zero across kinds") {
  LossPtr k = kendall_loss(3);
  Perm id{0, 1, 2};
  CHECK(loss_eval(*k, Label(id), Label(id)) == 0.0);
  LossPtr sq = square_loss(-1.0, 1.0, 5);
  CHECK(loss_eval(*sq, Label(0.3), Label(0.3)) == 0.0);
  LossPtr z1 = zero_one_loss(4);
  CHECK(loss_eval(*z1, Label(2), Label(2)) == 0.0);
}

TEST_CASE("kendall loss of a full reversal") {
  LossPtr k = kendall_loss(3);
  Perm id{0, 1, 2};
  Perm rev = reverse_perm(id);
  CHECK(loss_eval(*k, Label(id), Label(rev)) == 6.0);
  Vec pid = kendall_embedding(3, id);
  Vec prev = kendall_embedding(3, rev);
  for (size_t i = 0; i < pid.size(); ++i) CHECK(prev[i] == -pid[i]);
  CHECK(dot(pid, pid) == 6.0);  // m^2 - m
}

TEST_CASE("kendall embedding sign pattern for m=2") {
  Vec v = kendall_embedding(2, {0, 1});
  CHECK(v == Vec{0.0, -1.0, 1.0, 0.0});
  CHECK_THROWS_AS(kendall_embedding(2, {0, 0}), std::invalid_argument);
}

TEST_CASE("kendall embedding norms and reversal over small symmetric groups") {
  for (const Perm& y : all_permutations(4)) {
    Vec v = kendall_embedding(4, y);
    CHECK(dot(v, v) == 12.0);  // m^2 - m = 12
  }
  for (const Perm& y : all_permutations(3)) {
    Vec v = kendall_embedding(3, y);
    Vec r = kendall_embedding(3, reverse_perm(y));
    for (size_t i = 0; i < v.size(); ++i) CHECK(r[i] == -v[i]);
  }
}

TEST_CASE("kendall correlation equals the discordant-pair count identity") {
  // -phi(y).phi(z) == 2 * (ordered discordant pairs) - (m^2 - m), all of S4
  for (const Perm& y : all_permutations(4))
    for (const Perm& z : all_permutations(4)) {
      double corr = -dot(kendall_embedding(4, y), kendall_embedding(4, z));
      CHECK(corr == 2.0 * discordant_pairs(y, z) - 12.0);
    }
}

TEST_CASE("kendall eval matches the embedding inner product plus offset") {
  LossPtr k = kendall_loss(4);
  for (const Perm& y : all_permutations(4))
    for (const Perm& z : all_permutations(4)) {
      double via_embed = dot(k->psi(Label(z)), k->phi(Label(y))) + k->inner_offset();
      CHECK(via_embed == doctest::Approx(loss_eval(*k, Label(z), Label(y))).epsilon(1e-12));
    }
}

TEST_CASE("quadratic decomposition of the 0-1 loss on two labels") {
  Mat l(2, 2);
  l(0, 1) = l(1, 0) = 1.0;
  QuadraticDecomposition d = quadratic_decomposition(l);
  CHECK(reconstruction_error(l, d) <= 1e-9);
  CHECK(d.norm_const * d.norm_const == doctest::Approx(1.0).epsilon(1e-9));  // eigenvalues +-1
  CHECK(d.psi[0].size() == 4);
}

TEST_CASE("quadratic decomposition of the simplex matrix") {
  Mat l = simplex_matrix();
  QuadraticDecomposition d = quadratic_decomposition(l);
  CHECK(reconstruction_error(l, d) <= 1e-9);
  CHECK(norm_spread(d) <= 1e-9);
}

TEST_CASE("decomposition of the reconstructed matrix is idempotent") {
  Mat l = simplex_matrix();
  QuadraticDecomposition d = quadratic_decomposition(l);
  Mat rec(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rec(i, j) = i == j ? 0.0 : dot(d.psi[i], d.psi[j]) - dot(d.phi[i], d.phi[j]);
  QuadraticDecomposition d2 = quadratic_decomposition(rec);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double r2 = dot(d2.psi[i], d2.psi[j]) - dot(d2.phi[i], d2.phi[j]);
      CHECK(r2 == doctest::Approx(rec(i, j)).epsilon(1e-10));
    }
}

TEST_CASE("quadratic decomposition rejects bad input") {
  Mat asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 2.0;
  CHECK_THROWS_AS(quadratic_decomposition(asym), std::invalid_argument);
  Mat negat(2, 2);
  negat(0, 1) = negat(1, 0) = -1.0;
  CHECK_THROWS_AS(quadratic_decomposition(negat), std::invalid_argument);
  Mat diag(2, 2);
  diag(0, 0) = 0.5;
  diag(0, 1) = diag(1, 0) = 1.0;
  CHECK_THROWS_AS(quadratic_decomposition(diag), std::invalid_argument);
}

TEST_CASE("decomposition soundness over random proper matrices") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + rng.next_int(7);  // m <= 8
    Mat l = random_proper_matrix(m, rng);
    QuadraticDecomposition d = quadratic_decomposition(l);
    CHECK(reconstruction_error(l, d) <= 1e-8);
    CHECK(norm_spread(d) <= 1e-8);
  }
}

TEST_CASE("infimum over interval clamps under the square loss") {
  LossPtr sq = square_loss(-6.0, 6.0, 1000);
  auto [v, y] = infimum_over_set(*sq, Label(0.5), WeakSet::interval(1.0, 2.0));
  CHECK(v == doctest::Approx(0.25));
  CHECK(as_real(y) == doctest::Approx(1.0));
  CHECK_THROWS_AS(infimum_over_set(*zero_one_loss(3), Label(0), WeakSet::interval(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("infimum over explicit sets and membership") {
  LossPtr z1 = zero_one_loss(3);
  auto [v, y] = infimum_over_set(*z1, Label(0), WeakSet::explicit_set({Label(0), Label(1)}));
  CHECK(v == 0.0);
  CHECK(as_class(y) == 0);
  // membership yields zero for every label
  LossPtr simplex = matrix_loss(simplex_matrix());
  for (int z = 0; z < 3; ++z)
    CHECK(infimum_over_set(*simplex, Label(z), WeakSet::explicit_set({Label(z)})).first == 0.0);
}

TEST_CASE("infimum over partial orders matches brute force on S3") {
  LossPtr k = kendall_loss(3);
  Perm id{0, 1, 2};
  WeakSet po = WeakSet::partial_order(3, {{2, 0, 1}});  // item 2 above item 0
  auto [v, y] = infimum_over_set(*k, Label(id), po);
  double best = 1e100;
  for (const Perm& cand : all_permutations(3)) {
    if (!po.consistent_with(cand)) continue;
    best = std::min(best, loss_eval(*k, Label(id), Label(cand)));
  }
  CHECK(v == best);
  CHECK(po.consistent_with(as_perm(y)));
}

TEST_CASE("constrained infimum agrees between enumeration and arcset decoding") {
  SplitMix64 rng(55);
  LossPtr k5 = kendall_loss(5);
  LossPtr k7 = kendall_loss(7);
  auto perms5 = all_permutations(5);
  auto perms7 = all_permutations(7);
  for (int trial = 0; trial < 25; ++trial) {
    for (int m : {5, 7}) {
      const auto& perms = m == 5 ? perms5 : perms7;
      const LossPtr& loss = m == 5 ? k5 : k7;
      const Perm& truth = perms[rng.next_int(static_cast<int>(perms.size()))];
      std::vector<std::tuple<int, int, int>> kept;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (rng.next_bernoulli(0.4)) kept.emplace_back(i, j, (truth[i] > truth[j]) - (truth[i] < truth[j]));
      if (kept.empty()) continue;
      WeakSet po = WeakSet::partial_order(m, kept);
      const Perm& z = perms[rng.next_int(static_cast<int>(perms.size()))];
      // m = 5 goes through enumeration, m = 7 through the constrained DP
      auto [v, y] = infimum_over_set(*loss, Label(z), po);
      double best = 1e100;
      for (const Perm& cand : perms)
        if (po.consistent_with(cand)) best = std::min(best, loss->eval(Label(z), Label(cand)));
      CHECK(v == best);
      CHECK(po.consistent_with(as_perm(y)));
    }
  }
}

TEST_CASE("supremum over sets") {
  LossPtr sq = square_loss(-6.0, 6.0, 1000);
  auto [v, y] = supremum_over_set(*sq, Label(0.0), WeakSet::interval(1.0, 3.0));
  CHECK(v == doctest::Approx(9.0));
  CHECK(as_real(y) == doctest::Approx(3.0));
  LossPtr simplex = matrix_loss(simplex_matrix());
  CHECK(supremum_over_set(*simplex, Label(1), WeakSet::full()).first == 2.0);
}

TEST_CASE("wellbehaved_init: explicit sets") {
  LossPtr simplex = matrix_loss(simplex_matrix());
  // singleton -> exactly phi(y)
  CHECK(wellbehaved_init(*simplex, WeakSet::explicit_set({Label(2)})) == Vec{0.0, 0.0, 1.0});
  // {a, b} -> the measure .5 delta_a + .5 delta_b
  CHECK(wellbehaved_init(*simplex, WeakSet::explicit_set({Label(0), Label(1)})) == Vec{0.5, 0.5, 0.0});
}

TEST_CASE("wellbehaved_init: interval midpoint and full set") {
  LossPtr sq = square_loss(-6.0, 6.0, 1000);
  Vec mid = wellbehaved_init(*sq, WeakSet::interval(1.0, 2.0));
  CHECK(mid == Vec{1.0, 1.5, 2.25});
  CHECK(wellbehaved_init(*sq, WeakSet::full()) == Vec(3, 0.0));
  LossPtr z1 = zero_one_loss(3);
  CHECK(wellbehaved_init(*z1, WeakSet::full()) == Vec(3, 0.0));
}

TEST_CASE("wellbehaved_init: partial order observed signs") {
  LossPtr k = kendall_loss(3);
  WeakSet po = WeakSet::partial_order(3, {{0, 1, 1}});
  Vec xi = wellbehaved_init(*k, po);
  CHECK(xi[0 * 3 + 1] == 1.0);
  CHECK(xi[1 * 3 + 0] == -1.0);
  int nonzero = 0;
  for (double v : xi) nonzero += v != 0.0;
  CHECK(nonzero == 2);

  // the induced score is minimized exactly on the consistent orders
  double best = 1e100;
  for (const Perm& z : all_permutations(3)) best = std::min(best, dot(k->psi(Label(z)), xi));
  for (const Perm& z : all_permutations(3)) {
    double score = dot(k->psi(Label(z)), xi);
    if (po.consistent_with(z))
      CHECK(score == best);
    else
      CHECK(score > best);
  }
}

TEST_CASE("wellbehaved_init partial orders: consistent orders are exact minimizers up to m=4") {
  SplitMix64 rng(77);
  for (int m : {2, 3, 4}) {
    LossPtr k = kendall_loss(m);
    auto perms = all_permutations(m);
    for (int trial = 0; trial < 50; ++trial) {
      const Perm& truth = perms[rng.next_int(static_cast<int>(perms.size()))];
      std::vector<std::tuple<int, int, int>> kept;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (rng.next_bernoulli(0.5)) kept.emplace_back(i, j, (truth[i] > truth[j]) - (truth[i] < truth[j]));
      if (kept.empty()) continue;
      WeakSet po = WeakSet::partial_order(m, kept);
      Vec xi = wellbehaved_init(*k, po);
      double best = 1e100;
      for (const Perm& z : perms) best = std::min(best, dot(k->psi(Label(z)), xi));
      for (const Perm& z : perms) {
        double score = dot(k->psi(Label(z)), xi);
        if (po.consistent_with(z))
          CHECK(score == best);
        else
          CHECK(score > best);
      }
    }
  }
}

TEST_CASE("loss matrix file round trip") {
  SplitMix64 rng(31);
  Mat l = random_proper_matrix(5, rng);
  std::string path = "loss_matrix_test.txt";
  write_matrix_file(l, path);
  LossPtr loaded = loss_from_matrix_file(path);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(loss_eval(*loaded, Label(i), Label(j)) == doctest::Approx(l(i, j)).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("embedded matrix loss validates its embeddings") {
  Mat l = simplex_matrix();
  QuadraticDecomposition d = quadratic_decomposition(l);
  // stack (psi, -phi) against (psi, phi): inner product reproduces the loss
  std::vector<Vec> psi, phi;
  for (int y = 0; y < 3; ++y) {
    Vec p = d.psi[y];
    Vec q = d.phi[y];
    Vec left = p;
    left.insert(left.end(), q.begin(), q.end());
    for (size_t i = p.size(); i < left.size(); ++i) left[i] = -left[i];
    Vec right = p;
    right.insert(right.end(), q.begin(), q.end());
    psi.push_back(left);
    phi.push_back(right);
  }
  LossPtr emb = matrix_loss_embedded(l, psi, phi);
  CHECK(loss_eval(*emb, Label(1), Label(2)) == 2.0);
  // corrupt one embedding: validation must fail
  for (double& v : psi[0]) v *= 1.1;
  CHECK_THROWS_AS(matrix_loss_embedded(l, psi, phi), std::invalid_argument);
}
