#pragma once

#include <cstdint>
#include <string>

#include "weaklab/core.hpp"
#include "weaklab/rng.hpp"

namespace weaklab {

// Synthetic generators and corruption processes. Every generator is a
// deterministic function of its parameters and seed (SplitMix64
// streams), and every generated set contains its hidden label.

struct Dataset {
  Mat x;                       // n x d features
  std::vector<WeakSet> sets;   // one candidate set per row
  std::vector<Label> hidden;   // ground truth kept for evaluation; may be empty
  int n() const { return x.rows; }
};

// Interval regression: x ~ U[0,1], y = sin(omega x), interval of radius
// r_i = r - gamma*log(u_i) shifted away from zero by c_i ~ U[0, r_i].
Dataset gen_interval_regression(int n, double omega, double r, double gamma, uint64_t seed);

// Skewed pair corruption: each label stays a singleton with probability
// gamma, otherwise the anchor label joins the set.
std::vector<WeakSet> corrupt_classification(const std::vector<int>& labels, double gamma, int anchor, int m,
                                            uint64_t seed);

// Most frequent label (smallest index on ties) -- the corruption anchor.
int most_frequent_label(const std::vector<int>& labels, int m);

// Ranking from m random lines over x in [0,1]: item ranks follow the
// line values at x.
struct RankingData {
  Mat x;  // n x 1
  std::vector<Perm> y;
};
RankingData gen_ranking_lines(int m, int n, uint64_t seed);

// Drops each unordered comparison independently with probability p and
// keeps the remaining signs; transitively implied pairs are NOT re-added.
WeakSet corrupt_ordering(const Perm& y, double p, SplitMix64& rng);
std::vector<WeakSet> corrupt_orderings(const std::vector<Perm>& ys, double p, uint64_t seed);

// Four concentric rings of radius 1..4 (2000 unlabelled points with full
// sets) plus the four fixed labelled points; hidden class = ring index.
Dataset gen_concentric_circles(uint64_t seed);

// Well-separated Gaussian blobs for classification benchmarks.
Dataset gen_gaussian_blobs(int n, int classes, double separation, double noise, uint64_t seed);

// LIBSVM text format: `label idx:val idx:val ...`, 1-based ascending
// indices, missing entries are zero. Labels are remapped to 0..m-1 by
// sorted order of the distinct raw values.
struct LibsvmData {
  Mat x;
  std::vector<int> y;
  std::vector<double> raw_labels;  // raw value for each dense class id
};
LibsvmData parse_libsvm(const std::string& path);
void write_libsvm(const Mat& x, const std::vector<double>& raw_labels, const std::string& path);

// Non-ambiguity degree eta of Assumption-style corruption processes.
double ambiguity_of_skewed_pair(double gamma);
struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
// Estimated probability that some fixed wrong order stays consistent
// with the corrupted observation, maximized over candidates.
MonteCarloEstimate ambiguity_of_coordinate_drop(int m, double p, int draws, uint64_t seed);

// Dataset archive: CSV with columns x_0..x_{d-1}, a JSON set descriptor,
// and the hidden label (possibly empty).
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path, const LabelSpace& space);

}  // namespace weaklab
