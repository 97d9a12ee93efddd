#pragma once

#include <string>

#include "weaklab/arcset.hpp"
#include "weaklab/core.hpp"
#include "weaklab/weights.hpp"

namespace weaklab {

// Plug-in decoding: argmin_z <psi(z), g>. Classes scan the label set,
// permutations go through the exact feedback-arcset DP on the score
// matrix reshaped from g, the real grid takes the weighted mean snapped
// to the nearest grid point (falling back to a grid scan when the
// weight total is not positive). Ties resolve to the smallest label.
Label decode(const Loss& loss, const Vec& g);

// argmin over y in s of <h, phi(y)>; the workhorse of the candidate
// update step. all_tie reports that every candidate scored the same
// (no information in h), which callers may use to stay agnostic.
struct SetArgmin {
  double score = 0.0;
  Label label;
  bool all_tie = false;
};
SetArgmin min_inner_over_set(const Loss& loss, const Vec& h, const WeakSet& s);

// Trained plug-in predictor: surrogate g(x) = sum_i alpha_i(x) xi_i
// decoded through the loss. xi_i is phi(y_i) for disambiguated labels,
// or a set embedding for the warm-start / averaging variants.
class Predictor {
 public:
  Predictor(WeightScheme fitted_scheme, LossPtr loss, std::vector<Vec> train_xi);

  Vec surrogate_at(const Vec& x) const;
  Label predict(const Vec& x) const;
  std::vector<Label> predict_batch(const Mat& x) const;

  const WeightScheme& scheme() const { return scheme_; }
  const Loss& loss() const { return *loss_; }
  const LossPtr& loss_ptr() const { return loss_; }
  const std::vector<Vec>& train_xi() const { return xi_; }

  // Versioned flat archive, header line "WLB1" followed by a JSON body.
  void save(const std::string& path) const;
  static Predictor load(const std::string& path);

 private:
  WeightScheme scheme_;
  LossPtr loss_;
  std::vector<Vec> xi_;
};

Predictor fit_predictor(const WeightScheme& scheme, LossPtr loss, const Mat& x, const std::vector<Label>& labels);
Predictor fit_predictor_xi(const WeightScheme& scheme, LossPtr loss, const Mat& x, std::vector<Vec> xi);

}  // namespace weaklab
