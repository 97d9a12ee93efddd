#pragma once

#include "weaklab/core.hpp"
#include "weaklab/linalg.hpp"

namespace weaklab {

// Permutation maximizing sum_{i,j} scores(i,j) * sign(y(i) - y(j)),
// by exact dynamic programming over item subsets (state = set of items
// already assigned to the lowest ranks), O(2^m m^2) time. Exact for any
// m; refused above m = 20 where the state space becomes impractical --
// callers wanting larger m must opt into feedback_arcset_greedy.
Perm feedback_arcset_decode(const Mat& scores);

// Same objective restricted to total orders consistent with the
// observed signs of a PartialOrder set. Still exact.
Perm constrained_arcset_decode(const Mat& scores, const WeakSet& partial_order);

// Approximate fallback for m > 20: inserts items one by one at the
// position with the best pairwise score margin. No optimality guarantee.
Perm feedback_arcset_greedy(const Mat& scores);

}  // namespace weaklab
