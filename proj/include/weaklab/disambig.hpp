#pragma once

#include "weaklab/core.hpp"
#include "weaklab/infer.hpp"
#include "weaklab/linalg.hpp"

namespace weaklab {

struct DisambiguationResult {
  std::vector<Vec> xi;        // final surrogate vectors, one per sample
  std::vector<Label> labels;  // decoded labels, each inside its candidate set
  Vec objective_trace;        // one value per half-step, non-increasing
  int iterations = 0;         // full sweeps (alternating) or gradient steps (iqp)
  bool converged = false;
  double final_objective = 0.0;  // completed-dataset objective at the output labels
};

// sum_{i,j} A(i,j) * loss(z_i, y_j)
double objective(const Mat& a, const Loss& loss, const std::vector<Label>& y, const std::vector<Label>& z);
// same with the inner argument minimized out: sum_i min_z sum_j A(i,j) loss(z, y_j)
double completed_objective(const Mat& a, const Loss& loss, const std::vector<Label>& y);

// Alternating minimization on the relaxed surrogate objective
// sum_{i,j} A(i,j) <zeta_i, xi_j>: the zeta half-step decodes each row
// of A * Xi, the xi half-step minimizes each column against the frozen
// zetas inside its candidate set. Stops when the decrease over a full
// sweep falls below tol. A coordinate whose subproblem carries exactly
// no information (all-zero row sum, or a full set with all candidates
// tied) keeps its previous value instead of committing to a tie-break;
// this is what lets labels spread outward from anchors in
// semi-supervised data instead of collapsing onto the first label.
DisambiguationResult alternating_minimization(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets,
                                              std::vector<Vec> init, int max_iter = 200, double tol = 1e-6);
// init defaults to wellbehaved_init per sample
DisambiguationResult alternating_minimization(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets,
                                              int max_iter = 200, double tol = 1e-6);

enum class IqpStepRule {
  // 2/(t+2) capped by the exact line-search optimum, keeping the trace
  // non-increasing on the convex relaxation
  CappedLineSearch,
  Vanilla,  // plain 2/(t+2)
};

// Convexified quadratic relaxation: minimize
//   trace((|A|_* I + A_s) Psi Psi^T) + trace((|A|_* I - A_s) Phi Phi^T)
// over rows (psi_i, phi_i) constrained to the convex hull of the
// constant-norm decomposition vertices of each candidate set, by
// Frank-Wolfe with per-row vertex enumeration as the linear oracle;
// rows are rounded to their nearest vertex afterwards. A_s is the
// symmetric part of A. Requires a loss with the quadratic decomposition
// and explicit (or full) candidate sets.
DisambiguationResult iqp_disambiguation(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets,
                                        int steps = 200, IqpStepRule rule = IqpStepRule::CappedLineSearch);

}  // namespace weaklab
