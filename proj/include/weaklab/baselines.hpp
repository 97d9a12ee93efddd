#pragma once

#include "weaklab/core.hpp"
#include "weaklab/infer.hpp"
#include "weaklab/weights.hpp"

namespace weaklab {

// Infimum-loss predictor: argmin_z of the per-point set-infimum of the
// weighted loss. The joint minimization over candidate tuples decouples
// per point; under negative weights the inner optimum of alpha * l flips
// to the set supremum, which is what the decoupled joint optimum
// demands. Ranking outputs are restricted to m <= 6 (exhaustive outer
// scan).
class InfimumLossPredictor {
 public:
  InfimumLossPredictor(WeightScheme fitted_scheme, LossPtr loss, std::vector<WeakSet> train_sets);

  Label predict(const Vec& x) const;
  std::vector<Label> predict_batch(const Mat& x) const;

  const WeightScheme& scheme() const { return scheme_; }
  const Loss& loss() const { return *loss_; }

 private:
  double score_of(const Label& z, const Vec& alpha) const;

  WeightScheme scheme_;
  LossPtr loss_;
  std::vector<WeakSet> sets_;
};

InfimumLossPredictor fit_infimum_loss(const WeightScheme& scheme, LossPtr loss, const Mat& x,
                                      std::vector<WeakSet> sets);

// Averaging-candidates baseline: each set is replaced by its mean
// candidate embedding (the wellbehaved_init vector) once, then the
// plain plug-in predictor takes over.
Predictor fit_averaging_candidates(const WeightScheme& scheme, LossPtr loss, const Mat& x,
                                   const std::vector<WeakSet>& sets);

}  // namespace weaklab
