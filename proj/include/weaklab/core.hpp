#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "weaklab/linalg.hpp"

// Label spaces, losses and their inner-product embeddings, and
// set-valued supervision. Everything is immutable after construction
// and safe to share across threads.

namespace weaklab {

// ---------------------------------------------------------------------------
// Labels and label spaces

using Perm = std::vector<int>;  // rank[i] = rank of item i, a bijection of 0..m-1

// int for class indices, double for real outputs, Perm for rankings
using Label = std::variant<int, double, Perm>;

enum class SpaceKind { Classes, Permutations, RealGrid };

struct LabelSpace {
  SpaceKind kind = SpaceKind::Classes;
  int m = 0;                            // Classes / Permutations
  double lo = 0.0, hi = 0.0;            // RealGrid
  int count = 0;                        // RealGrid

  static LabelSpace classes(int m);
  static LabelSpace permutations(int m);
  static LabelSpace real_grid(double lo, double hi, int count);

  bool contains(const Label& y) const;
  double grid_step() const;
  double grid_point(int i) const;
  // Index of the grid point minimizing |v - grid_point|; exact midpoints
  // resolve to the smaller index.
  int nearest_grid_index(double v) const;

  // All labels of a finite space, in canonical (ascending / lexicographic)
  // order. Permutations are capped at m <= 8; RealGrid enumerates the grid.
  std::vector<Label> enumerate() const;
};

int as_class(const Label& y);
double as_real(const Label& y);
const Perm& as_perm(const Label& y);
bool label_eq(const Label& a, const Label& b);
bool label_less(const Label& a, const Label& b);
std::string label_to_string(const Label& y);

bool is_permutation(const Perm& y);
Perm reverse_perm(const Perm& y);
std::vector<Perm> all_permutations(int m);

// ---------------------------------------------------------------------------
// Weak (set-valued) supervision

struct WeakSet {
  enum class Kind { Explicit, Interval, PartialOrder, Full };

  Kind kind = Kind::Full;
  std::vector<Label> labels;  // Explicit; sorted, deduplicated
  double lo = 0.0, hi = 0.0;  // Interval
  int m = 0;                  // PartialOrder item count
  // canonical key (i, j) with i < j, value = sign(y(i) - y(j))
  std::map<std::pair<int, int>, int> observed;

  static WeakSet explicit_set(std::vector<Label> labels);
  static WeakSet interval(double lo, double hi);
  // signs: tuples (i, j, sign) meaning sign(y(i) - y(j)) = sign.
  // Validates antisymmetry and acyclicity.
  static WeakSet partial_order(int m, const std::vector<std::tuple<int, int, int>>& signs);
  static WeakSet full();

  int observed_sign(int i, int j) const;  // 0 when unobserved
  bool consistent_with(const Perm& y) const;
  bool contains(const Label& y) const;
  std::size_t explicit_size() const { return labels.size(); }
};

struct WeakSample {
  Vec x;
  WeakSet s;
  std::optional<Label> hidden_y;  // generator ground truth, evaluation only
};

// ---------------------------------------------------------------------------
// Losses

struct QuadraticDecomposition {
  std::vector<Vec> psi;  // per label, dimension 2m
  std::vector<Vec> phi;
  double norm_const = 0.0;  // every ||psi(y)|| and ||phi(y)|| equals this
};

// Constant-norm decomposition l(y,z) = psi(y).psi(z) - phi(y).phi(z)
// of a proper symmetric loss matrix, built from its eigendecomposition
// plus per-label correction coordinates. Output vectors have dimension
// 2m: m spectral coordinates followed by m correction coordinates.
QuadraticDecomposition quadratic_decomposition(const Mat& loss_matrix);

// A loss on a label space together with embeddings phi, psi such that
// eval(z, y) == dot(psi(z), phi(y)) + inner_offset(). The offset is zero
// except for the ranking loss, whose natural correlation embedding
// represents the loss up to an additive constant (harmless everywhere:
// all consumers minimize over z at fixed weights).
class Loss {
 public:
  virtual ~Loss() = default;

  const LabelSpace& space() const { return space_; }
  virtual double eval(const Label& z, const Label& y) const = 0;
  virtual int embed_dim() const = 0;
  virtual Vec phi(const Label& y) const = 0;
  virtual Vec psi(const Label& z) const = 0;
  virtual double inner_offset() const { return 0.0; }

  virtual bool has_decomposition() const { return false; }
  virtual const QuadraticDecomposition& decomposition() const;
  virtual const Mat& matrix() const;

 protected:
  explicit Loss(LabelSpace space) : space_(std::move(space)) {}
  LabelSpace space_;
};

using LossPtr = std::shared_ptr<const Loss>;

// Finite-space loss given by a proper symmetric matrix. phi is the label
// indicator, psi the matrix row, so surrogate vectors live in the
// probability simplex. Also carries the constant-norm decomposition.
LossPtr matrix_loss(Mat loss_matrix);
// Same but with caller-supplied embeddings (the only route for
// asymmetric matrices).
LossPtr matrix_loss_embedded(Mat loss_matrix, std::vector<Vec> psi, std::vector<Vec> phi);
LossPtr zero_one_loss(int m);
// Kendall ranking loss: number of pairwise-order disagreements counted
// over ordered index pairs; zero on the diagonal, maximal (m^2 - m) for
// reversed orders.
LossPtr kendall_loss(int m);
// Squared loss |y - z|^2 decoded on an equispaced grid.
LossPtr square_loss(double lo, double hi, int count);

// Plain-text loss matrix file: first line m, then m rows of m reals.
LossPtr loss_from_matrix_file(const std::string& path);
Mat read_matrix_file(const std::string& path);
void write_matrix_file(const Mat& m, const std::string& path);

// ---------------------------------------------------------------------------
// Core operations

double loss_eval(const Loss& loss, const Label& z, const Label& y);

// Pairwise-comparison sign matrix of a permutation, flattened row-major
// to length m^2; entry (i,j) is sign(y(i) - y(j)).
Vec kendall_embedding(int m, const Perm& y);
// Ordered index pairs on which two permutations disagree.
int discordant_pairs(const Perm& a, const Perm& b);

// min over y in s of loss(z, y), with an attaining label.
std::pair<double, Label> infimum_over_set(const Loss& loss, const Label& z, const WeakSet& s);
// max over y in s of loss(z, y); needed for signed infimum-loss weights.
std::pair<double, Label> supremum_over_set(const Loss& loss, const Label& z, const WeakSet& s);

// Initialization vector xi_s for the alternating scheme: candidate
// average for explicit sets, interval midpoint embedding for intervals,
// observed signs (zero elsewhere) for partial orders, zero for full sets.
Vec wellbehaved_init(const Loss& loss, const WeakSet& s);

}  // namespace weaklab
