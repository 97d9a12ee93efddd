#include "weaklab/arcset.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace weaklab {

namespace {

// delta(u, t) = contribution of placing u at a higher rank than t
Mat pair_delta(const Mat& s) {
  int m = s.rows;
  Mat d(m, m);
  for (int u = 0; u < m; ++u)
    for (int t = 0; t < m; ++t) d(u, t) = s(u, t) - s(t, u);
  return d;
}

// prereq[u] = bitmask of items that must take a lower rank than u
std::vector<uint32_t> prerequisites(const WeakSet& po, int m) {
  std::vector<uint32_t> pre(m, 0);
  for (const auto& [key, sgn] : po.observed) {
    auto [i, j] = key;
    if (sgn > 0)
      pre[i] |= 1u << j;  // y(i) > y(j): j below i
    else
      pre[j] |= 1u << i;
  }
  return pre;
}

Perm solve(const Mat& scores, const std::vector<uint32_t>& pre) {
  int m = scores.rows;
  if (m < 1) throw std::invalid_argument("arcset: need at least one item");
  if (scores.cols != m) throw std::invalid_argument("arcset: score matrix not square");
  if (m > 20) throw std::invalid_argument("arcset: m > 20 exceeds exact-DP capability, use feedback_arcset_greedy");

  Mat delta = pair_delta(scores);
  uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  std::vector<double> dp(full + 1, -std::numeric_limits<double>::infinity());
  std::vector<int8_t> choice(full + 1, -1);
  dp[0] = 0.0;

  // dp[T] = best score over orderings placing exactly the items of T at
  // ranks 0..|T|-1; the chosen u holds the top rank within T.
  for (uint32_t t = 1; t <= full; ++t) {
    for (int u = 0; u < m; ++u) {
      if (!(t & (1u << u))) continue;
      uint32_t rest = t & ~(1u << u);
      if (pre[u] & ~rest) continue;  // some required-lower item not yet placed
      if (dp[rest] == -std::numeric_limits<double>::infinity()) continue;
      double gain = 0.0;
      for (int v = 0; v < m; ++v)
        if (rest & (1u << v)) gain += delta(u, v);
      double cand = dp[rest] + gain;
      if (cand > dp[t] || (cand == dp[t] && (choice[t] < 0 || u < choice[t]))) {
        dp[t] = cand;
        choice[t] = static_cast<int8_t>(u);
      }
    }
  }
  if (choice[full] < 0) throw std::invalid_argument("arcset: constraints admit no total order");

  Perm rank(m, 0);
  uint32_t t = full;
  for (int r = m - 1; r >= 0; --r) {
    int u = choice[t];
    rank[u] = r;
    t &= ~(1u << u);
  }
  return rank;
}

}  // namespace

Perm feedback_arcset_decode(const Mat& scores) {
  return solve(scores, std::vector<uint32_t>(scores.rows, 0));
}

Perm constrained_arcset_decode(const Mat& scores, const WeakSet& partial_order) {
  if (partial_order.kind != WeakSet::Kind::PartialOrder)
    throw std::invalid_argument("constrained_arcset_decode: set is not a partial order");
  if (partial_order.m != scores.rows)
    throw std::invalid_argument("constrained_arcset_decode: item count mismatch");
  return solve(scores, prerequisites(partial_order, scores.rows));
}

Perm feedback_arcset_greedy(const Mat& scores) {
  int m = scores.rows;
  if (m < 1) throw std::invalid_argument("arcset: need at least one item");
  Mat delta = pair_delta(scores);
  std::vector<int> order;  // order[p] = item at rank p
  order.reserve(m);
  for (int u = 0; u < m; ++u) {
    int best_pos = 0;
    double best_margin = -std::numeric_limits<double>::infinity();
    // margin of inserting u at position p: u ranks above order[0..p), below the rest
    double margin = 0.0;
    for (int item : order) margin -= delta(u, item);
    for (int p = 0; p <= static_cast<int>(order.size()); ++p) {
      if (margin > best_margin) {
        best_margin = margin;
        best_pos = p;
      }
      if (p < static_cast<int>(order.size())) margin += 2.0 * delta(u, order[p]);
    }
    order.insert(order.begin() + best_pos, u);
  }
  Perm rank(m, 0);
  for (int p = 0; p < m; ++p) rank[order[p]] = p;
  return rank;
}

}  // namespace weaklab
