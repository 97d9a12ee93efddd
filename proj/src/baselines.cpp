#include "weaklab/baselines.hpp"

#include <limits>
#include <stdexcept>

namespace weaklab {

InfimumLossPredictor::InfimumLossPredictor(WeightScheme fitted_scheme, LossPtr loss, std::vector<WeakSet> train_sets)
    : scheme_(std::move(fitted_scheme)), loss_(std::move(loss)), sets_(std::move(train_sets)) {
  if (!scheme_.fitted()) throw std::logic_error("InfimumLossPredictor: scheme is not fitted");
  if (static_cast<int>(sets_.size()) != scheme_.train_size())
    throw std::invalid_argument("InfimumLossPredictor: one candidate set per training point required");
}

double InfimumLossPredictor::score_of(const Label& z, const Vec& alpha) const {
  double s = 0.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    double a = alpha[i];
    if (a == 0.0) continue;
    // inf over y of a * l(z, y): the signed rule of the joint optimum
    double extremum = a >= 0.0 ? infimum_over_set(*loss_, z, sets_[i]).first
                               : supremum_over_set(*loss_, z, sets_[i]).first;
    s += a * extremum;
  }
  return s;
}

Label InfimumLossPredictor::predict(const Vec& x) const {
  Vec alpha = scheme_.weights_at(x);
  const LabelSpace& space = loss_->space();
  switch (space.kind) {
    case SpaceKind::Classes: {
      Label best(0);
      double best_score = score_of(best, alpha);
      for (int z = 1; z < space.m; ++z) {
        double s = score_of(Label(z), alpha);
        if (s < best_score) {
          best_score = s;
          best = Label(z);
        }
      }
      return best;
    }
    case SpaceKind::Permutations: {
      if (space.m > 6)
        throw std::invalid_argument("infimum-loss ranking is limited to m <= 6 (exhaustive outer scan)");
      Label best;
      double best_score = std::numeric_limits<double>::infinity();
      for (const Perm& p : all_permutations(space.m)) {
        double s = score_of(Label(p), alpha);
        if (s < best_score) {
          best_score = s;
          best = Label(p);
        }
      }
      return best;
    }
    case SpaceKind::RealGrid: {
      Label best(space.grid_point(0));
      double best_score = score_of(best, alpha);
      for (int i = 1; i < space.count; ++i) {
        Label z(space.grid_point(i));
        double s = score_of(z, alpha);
        if (s < best_score) {
          best_score = s;
          best = z;
        }
      }
      return best;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Label> InfimumLossPredictor::predict_batch(const Mat& x) const {
  std::vector<Label> out;
  out.reserve(x.rows);
  Vec row(x.cols);
  for (int i = 0; i < x.rows; ++i) {
    std::copy_n(&x.data[static_cast<size_t>(i) * x.cols], x.cols, row.begin());
    out.push_back(predict(row));
  }
  return out;
}

InfimumLossPredictor fit_infimum_loss(const WeightScheme& scheme, LossPtr loss, const Mat& x,
                                      std::vector<WeakSet> sets) {
  return InfimumLossPredictor(scheme.fitted() ? scheme : scheme.fit(x), std::move(loss), std::move(sets));
}

Predictor fit_averaging_candidates(const WeightScheme& scheme, LossPtr loss, const Mat& x,
                                   const std::vector<WeakSet>& sets) {
  if (static_cast<int>(sets.size()) != x.rows)
    throw std::invalid_argument("fit_averaging_candidates: one candidate set per training point required");
  std::vector<Vec> xi;
  xi.reserve(sets.size());
  for (const WeakSet& s : sets) xi.push_back(wellbehaved_init(*loss, s));
  return fit_predictor_xi(scheme, std::move(loss), x, std::move(xi));
}

}  // namespace weaklab
