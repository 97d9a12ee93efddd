#include "weaklab/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "weaklab/arcset.hpp"

namespace weaklab {

// ---------------------------------------------------------------------------
// LabelSpace

LabelSpace LabelSpace::classes(int m) {
  if (m < 1) throw std::invalid_argument("LabelSpace: class count must be positive");
  LabelSpace s;
  s.kind = SpaceKind::Classes;
  s.m = m;
  return s;
}

LabelSpace LabelSpace::permutations(int m) {
  if (m < 1) throw std::invalid_argument("LabelSpace: item count must be positive");
  LabelSpace s;
  s.kind = SpaceKind::Permutations;
  s.m = m;
  return s;
}

LabelSpace LabelSpace::real_grid(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("LabelSpace: grid needs at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("LabelSpace: grid needs lo < hi");
  LabelSpace s;
  s.kind = SpaceKind::RealGrid;
  s.lo = lo;
  s.hi = hi;
  s.count = count;
  return s;
}

bool LabelSpace::contains(const Label& y) const {
  switch (kind) {
    case SpaceKind::Classes:
      return std::holds_alternative<int>(y) && std::get<int>(y) >= 0 && std::get<int>(y) < m;
    case SpaceKind::Permutations:
      return std::holds_alternative<Perm>(y) && static_cast<int>(std::get<Perm>(y).size()) == m &&
             is_permutation(std::get<Perm>(y));
    case SpaceKind::RealGrid:
      // the grid is the decoding candidate set; any finite real is a
      // legal target (interval candidates live off-grid)
      return std::holds_alternative<double>(y) && std::isfinite(std::get<double>(y));
  }
  return false;
}

double LabelSpace::grid_step() const { return (hi - lo) / (count - 1); }

double LabelSpace::grid_point(int i) const { return lo + grid_step() * i; }

int LabelSpace::nearest_grid_index(double v) const {
  double raw = (v - lo) / grid_step();
  int f = static_cast<int>(std::floor(raw));
  int idx = (raw - f > 0.5) ? f + 1 : f;  // exact midpoint -> smaller index
  return std::clamp(idx, 0, count - 1);
}

std::vector<Label> LabelSpace::enumerate() const {
  std::vector<Label> out;
  switch (kind) {
    case SpaceKind::Classes:
      for (int i = 0; i < m; ++i) out.emplace_back(i);
      break;
    case SpaceKind::Permutations: {
      if (m > 8) throw std::invalid_argument("LabelSpace: refusing to enumerate permutations beyond m = 8");
      for (auto& p : all_permutations(m)) out.emplace_back(std::move(p));
      break;
    }
    case SpaceKind::RealGrid:
      for (int i = 0; i < count; ++i) out.emplace_back(grid_point(i));
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labels

int as_class(const Label& y) {
  if (!std::holds_alternative<int>(y)) throw std::invalid_argument("label is not a class index");
  return std::get<int>(y);
}

double as_real(const Label& y) {
  if (!std::holds_alternative<double>(y)) throw std::invalid_argument("label is not a real value");
  return std::get<double>(y);
}

const Perm& as_perm(const Label& y) {
  if (!std::holds_alternative<Perm>(y)) throw std::invalid_argument("label is not a permutation");
  return std::get<Perm>(y);
}

bool label_eq(const Label& a, const Label& b) { return a == b; }

bool label_less(const Label& a, const Label& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  return a < b;
}

std::string label_to_string(const Label& y) {
  std::ostringstream os;
  if (std::holds_alternative<int>(y)) {
    os << std::get<int>(y);
  } else if (std::holds_alternative<double>(y)) {
    os.precision(17);
    os << std::get<double>(y);
  } else {
    const Perm& p = std::get<Perm>(y);
    for (size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  }
  return os.str();
}

bool is_permutation(const Perm& y) {
  std::vector<char> seen(y.size(), 0);
  for (int v : y) {
    if (v < 0 || v >= static_cast<int>(y.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Perm reverse_perm(const Perm& y) {
  Perm r(y.size());
  int m = static_cast<int>(y.size());
  for (int i = 0; i < m; ++i) r[i] = m - 1 - y[i];
  return r;
}

std::vector<Perm> all_permutations(int m) {
  Perm p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------------------
// WeakSet

WeakSet WeakSet::explicit_set(std::vector<Label> labels) {
  if (labels.empty()) throw std::invalid_argument("WeakSet: explicit candidate set is empty");
  std::sort(labels.begin(), labels.end(), label_less);
  labels.erase(std::unique(labels.begin(), labels.end(), label_eq), labels.end());
  WeakSet s;
  s.kind = Kind::Explicit;
  s.labels = std::move(labels);
  return s;
}

WeakSet WeakSet::interval(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("WeakSet: interval needs lo <= hi");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("WeakSet: interval bounds must be finite");
  WeakSet s;
  s.kind = Kind::Interval;
  s.lo = lo;
  s.hi = hi;
  return s;
}

WeakSet WeakSet::partial_order(int m, const std::vector<std::tuple<int, int, int>>& signs) {
  if (m < 1) throw std::invalid_argument("WeakSet: partial order needs at least one item");
  WeakSet s;
  s.kind = Kind::PartialOrder;
  s.m = m;
  for (auto [i, j, sgn] : signs) {
    if (i < 0 || i >= m || j < 0 || j >= m || i == j)
      throw std::invalid_argument("WeakSet: partial order index out of range");
    if (sgn != 1 && sgn != -1) throw std::invalid_argument("WeakSet: observed sign must be +1 or -1");
    std::pair<int, int> key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
    int canonical = i < j ? sgn : -sgn;
    auto [it, inserted] = s.observed.emplace(key, canonical);
    if (!inserted && it->second != canonical)
      throw std::invalid_argument("WeakSet: partial order violates antisymmetry");
  }
  // acyclicity: edge a -> b when y(a) must be below y(b)
  std::vector<std::vector<int>> up(m);
  std::vector<int> indeg(m, 0);
  for (const auto& [key, sgn] : s.observed) {
    auto [i, j] = key;
    int low = sgn > 0 ? j : i;
    int high = sgn > 0 ? i : j;
    up[low].push_back(high);
    ++indeg[high];
  }
  std::vector<int> queue;
  for (int i = 0; i < m; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  size_t seen = 0;
  while (seen < queue.size()) {
    int u = queue[seen++];
    for (int w : up[u])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if (static_cast<int>(queue.size()) != m)
    throw std::invalid_argument("WeakSet: partial order contains a cycle");
  return s;
}

WeakSet WeakSet::full() {
  WeakSet s;
  s.kind = Kind::Full;
  return s;
}

int WeakSet::observed_sign(int i, int j) const {
  std::pair<int, int> key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
  auto it = observed.find(key);
  if (it == observed.end()) return 0;
  return i < j ? it->second : -it->second;
}

bool WeakSet::consistent_with(const Perm& y) const {
  for (const auto& [key, sgn] : observed) {
    auto [i, j] = key;
    int actual = (y[i] > y[j]) - (y[i] < y[j]);
    if (actual != sgn) return false;
  }
  return true;
}

bool WeakSet::contains(const Label& y) const {
  switch (kind) {
    case Kind::Explicit:
      return std::any_of(labels.begin(), labels.end(), [&](const Label& l) { return label_eq(l, y); });
    case Kind::Interval:
      return std::holds_alternative<double>(y) && std::get<double>(y) >= lo && std::get<double>(y) <= hi;
    case Kind::PartialOrder:
      return std::holds_alternative<Perm>(y) && static_cast<int>(std::get<Perm>(y).size()) == m &&
             consistent_with(std::get<Perm>(y));
    case Kind::Full:
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Quadratic decomposition

namespace {

void validate_proper_symmetric(const Mat& l) {
  if (l.rows != l.cols) throw std::invalid_argument("loss matrix must be square");
  for (int i = 0; i < l.rows; ++i) {
    if (std::abs(l(i, i)) > 1e-12) throw std::invalid_argument("loss matrix must have a zero diagonal");
    for (int j = 0; j < l.cols; ++j) {
      if (std::abs(l(i, j) - l(j, i)) > 1e-12 * (1.0 + std::abs(l(i, j))))
        throw std::invalid_argument("loss matrix must be symmetric");
      if (i != j && !(l(i, j) > 0.0))
        throw std::invalid_argument("loss matrix must be positive off the diagonal");
    }
  }
}

}  // namespace

QuadraticDecomposition quadratic_decomposition(const Mat& loss_matrix) {
  validate_proper_symmetric(loss_matrix);
  int m = loss_matrix.rows;
  EigenSym eig = jacobi_eigen(loss_matrix, 1e-12);

  double cap = 0.0;
  for (double lam : eig.values) cap = std::max(cap, std::abs(lam));

  QuadraticDecomposition d;
  d.psi.assign(m, Vec(2 * m, 0.0));
  d.phi.assign(m, Vec(2 * m, 0.0));
  for (int k = 0; k < m; ++k) {
    double psi_sq = 0.0;
    for (int i = 0; i < m; ++i) {
      double lam = eig.values[i];
      if (std::abs(lam) < 1e-10) continue;  // numerically-zero modes dropped
      double coord = eig.vectors(k, i);
      if (lam > 0.0) {
        d.psi[k][i] = std::sqrt(lam) * coord;
        psi_sq += lam * coord * coord;
      } else {
        d.phi[k][i] = std::sqrt(-lam) * coord;
      }
    }
    double corr = std::sqrt(std::max(cap - psi_sq, 0.0));
    d.psi[k][m + k] = corr;
    d.phi[k][m + k] = corr;
  }
  d.norm_const = std::sqrt(cap);
  return d;
}

// ---------------------------------------------------------------------------
// Loss implementations

const QuadraticDecomposition& Loss::decomposition() const {
  throw std::logic_error("loss has no constant-norm quadratic decomposition");
}

const Mat& Loss::matrix() const { throw std::logic_error("loss has no materialized matrix"); }

namespace {

class MatrixLoss final : public Loss {
 public:
  MatrixLoss(Mat l, std::optional<QuadraticDecomposition> dec)
      : Loss(LabelSpace::classes(l.rows)), l_(std::move(l)), dec_(std::move(dec)) {}

  double eval(const Label& z, const Label& y) const override { return l_(as_class(z), as_class(y)); }
  int embed_dim() const override { return l_.rows; }
  Vec phi(const Label& y) const override {
    Vec v(l_.rows, 0.0);
    v[as_class(y)] = 1.0;
    return v;
  }
  Vec psi(const Label& z) const override {
    int r = as_class(z);
    Vec v(l_.cols);
    for (int j = 0; j < l_.cols; ++j) v[j] = l_(r, j);
    return v;
  }
  bool has_decomposition() const override { return dec_.has_value(); }
  const QuadraticDecomposition& decomposition() const override {
    if (!dec_) return Loss::decomposition();
    return *dec_;
  }
  const Mat& matrix() const override { return l_; }

 private:
  Mat l_;
  std::optional<QuadraticDecomposition> dec_;
};

class EmbeddedMatrixLoss final : public Loss {
 public:
  EmbeddedMatrixLoss(Mat l, std::vector<Vec> psi, std::vector<Vec> phi)
      : Loss(LabelSpace::classes(l.rows)), l_(std::move(l)), psi_(std::move(psi)), phi_(std::move(phi)) {}

  double eval(const Label& z, const Label& y) const override { return l_(as_class(z), as_class(y)); }
  int embed_dim() const override { return static_cast<int>(psi_.front().size()); }
  Vec phi(const Label& y) const override { return phi_[as_class(y)]; }
  Vec psi(const Label& z) const override { return psi_[as_class(z)]; }
  const Mat& matrix() const override { return l_; }

 private:
  Mat l_;
  std::vector<Vec> psi_, phi_;
};

class KendallLoss final : public Loss {
 public:
  explicit KendallLoss(int m) : Loss(LabelSpace::permutations(m)) {}

  double eval(const Label& z, const Label& y) const override {
    return static_cast<double>(discordant_pairs(as_perm(z), as_perm(y)));
  }
  int embed_dim() const override { return space_.m * space_.m; }
  Vec phi(const Label& y) const override { return kendall_embedding(space_.m, as_perm(y)); }
  Vec psi(const Label& z) const override {
    Vec v = kendall_embedding(space_.m, as_perm(z));
    for (double& x : v) x *= -0.5;
    return v;
  }
  double inner_offset() const override { return 0.5 * space_.m * (space_.m - 1); }
};

class SquareLoss final : public Loss {
 public:
  SquareLoss(double lo, double hi, int count) : Loss(LabelSpace::real_grid(lo, hi, count)) {}

  double eval(const Label& z, const Label& y) const override {
    double d = as_real(z) - as_real(y);
    return d * d;
  }
  int embed_dim() const override { return 3; }
  Vec phi(const Label& y) const override {
    double v = as_real(y);
    return {1.0, v, v * v};
  }
  Vec psi(const Label& z) const override {
    double v = as_real(z);
    return {v * v, -2.0 * v, 1.0};
  }
};

}  // namespace

LossPtr matrix_loss(Mat loss_matrix) {
  validate_proper_symmetric(loss_matrix);
  QuadraticDecomposition dec = quadratic_decomposition(loss_matrix);
  return std::make_shared<MatrixLoss>(std::move(loss_matrix), std::move(dec));
}

LossPtr matrix_loss_embedded(Mat loss_matrix, std::vector<Vec> psi, std::vector<Vec> phi) {
  int m = loss_matrix.rows;
  if (loss_matrix.cols != m) throw std::invalid_argument("loss matrix must be square");
  if (static_cast<int>(psi.size()) != m || static_cast<int>(phi.size()) != m)
    throw std::invalid_argument("embedding count must match the label count");
  for (int i = 0; i < m; ++i) {
    if (std::abs(loss_matrix(i, i)) > 1e-12) throw std::invalid_argument("loss matrix must have a zero diagonal");
    if (psi[i].size() != psi[0].size() || phi[i].size() != psi[0].size())
      throw std::invalid_argument("embeddings must share one dimension");
  }
  for (int z = 0; z < m; ++z)
    for (int y = 0; y < m; ++y) {
      double inner = dot(psi[z], phi[y]);
      double l = loss_matrix(z, y);
      if (std::abs(inner - l) > 1e-9 * (1.0 + std::abs(l)))
        throw std::invalid_argument("embeddings do not reproduce the loss matrix");
    }
  return std::make_shared<EmbeddedMatrixLoss>(std::move(loss_matrix), std::move(psi), std::move(phi));
}

LossPtr zero_one_loss(int m) {
  Mat l(m, m, 1.0);
  for (int i = 0; i < m; ++i) l(i, i) = 0.0;
  return matrix_loss(std::move(l));
}

LossPtr kendall_loss(int m) { return std::make_shared<KendallLoss>(m); }

LossPtr square_loss(double lo, double hi, int count) { return std::make_shared<SquareLoss>(lo, hi, count); }

Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open loss matrix file: " + path);
  int m = 0;
  if (!(in >> m) || m < 1) throw std::runtime_error("loss matrix file: bad size line in " + path);
  Mat l(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!(in >> l(i, j))) throw std::runtime_error("loss matrix file: truncated at row " + std::to_string(i));
  return l;
}

void write_matrix_file(const Mat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write loss matrix file: " + path);
  out.precision(17);
  out << m.rows << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) out << (j ? " " : "") << m(i, j);
    out << "\n";
  }
}

LossPtr loss_from_matrix_file(const std::string& path) { return matrix_loss(read_matrix_file(path)); }

// ---------------------------------------------------------------------------
// Operations

double loss_eval(const Loss& loss, const Label& z, const Label& y) {
  if (!loss.space().contains(z) || !loss.space().contains(y))
    throw std::invalid_argument("loss_eval: label outside the loss space");
  return loss.eval(z, y);
}

Vec kendall_embedding(int m, const Perm& y) {
  if (static_cast<int>(y.size()) != m || !is_permutation(y))
    throw std::invalid_argument("kendall_embedding: input is not a permutation of 0..m-1");
  Vec v(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v[static_cast<size_t>(i) * m + j] = static_cast<double>((y[i] > y[j]) - (y[i] < y[j]));
  return v;
}

int discordant_pairs(const Perm& a, const Perm& b) {
  int m = static_cast<int>(a.size());
  if (b.size() != a.size()) throw std::invalid_argument("discordant_pairs: size mismatch");
  int count = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      int sa = (a[i] > a[j]) - (a[i] < a[j]);
      int sb = (b[i] > b[j]) - (b[i] < b[j]);
      if (sa != sb) count += 2;  // ordered pairs (i,j) and (j,i)
    }
  return count;
}

namespace {

std::pair<double, Label> extremum_over_partial_order(const Loss& loss, const Label& z, const WeakSet& s,
                                                     bool maximize) {
  if (loss.space().kind != SpaceKind::Permutations || s.m != loss.space().m)
    throw std::invalid_argument("partial-order set does not match the loss space");
  int m = s.m;
  if (m <= 6) {
    bool first = true;
    double best = 0.0;
    Perm best_y;
    for (const auto& y : all_permutations(m)) {
      if (!s.consistent_with(y)) continue;
      double v = loss.eval(z, Label(y));
      if (first || (maximize ? v > best : v < best)) {
        best = v;
        best_y = y;
        first = false;
      }
    }
    if (first) throw std::invalid_argument("partial order admits no consistent total order");
    return {best, Label(best_y)};
  }
  // minimizing the discordance = maximizing correlation with phi(z)
  Vec pz = kendall_embedding(m, as_perm(z));
  Mat scores(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) scores(i, j) = (maximize ? -1.0 : 1.0) * pz[static_cast<size_t>(i) * m + j];
  Perm y = constrained_arcset_decode(scores, s);
  return {loss.eval(z, Label(y)), Label(y)};
}

}  // namespace

std::pair<double, Label> infimum_over_set(const Loss& loss, const Label& z, const WeakSet& s) {
  if (!loss.space().contains(z)) throw std::invalid_argument("infimum_over_set: label outside the loss space");
  switch (s.kind) {
    case WeakSet::Kind::Explicit: {
      double best = 0.0;
      const Label* arg = nullptr;
      for (const Label& y : s.labels) {
        double v = loss_eval(loss, z, y);
        if (!arg || v < best) {
          best = v;
          arg = &y;
        }
      }
      return {best, *arg};
    }
    case WeakSet::Kind::Interval: {
      if (loss.space().kind != SpaceKind::RealGrid)
        throw std::invalid_argument("interval sets are only legal under the square-loss task");
      double y = std::clamp(as_real(z), s.lo, s.hi);
      return {loss.eval(z, Label(y)), Label(y)};
    }
    case WeakSet::Kind::PartialOrder:
      return extremum_over_partial_order(loss, z, s, false);
    case WeakSet::Kind::Full:
      return {0.0, z};
  }
  throw std::logic_error("unreachable");
}

std::pair<double, Label> supremum_over_set(const Loss& loss, const Label& z, const WeakSet& s) {
  if (!loss.space().contains(z)) throw std::invalid_argument("supremum_over_set: label outside the loss space");
  switch (s.kind) {
    case WeakSet::Kind::Explicit: {
      double best = 0.0;
      const Label* arg = nullptr;
      for (const Label& y : s.labels) {
        double v = loss_eval(loss, z, y);
        if (!arg || v > best) {
          best = v;
          arg = &y;
        }
      }
      return {best, *arg};
    }
    case WeakSet::Kind::Interval: {
      if (loss.space().kind != SpaceKind::RealGrid)
        throw std::invalid_argument("interval sets are only legal under the square-loss task");
      double zl = as_real(z);
      double dlo = (zl - s.lo) * (zl - s.lo), dhi = (zl - s.hi) * (zl - s.hi);
      return dlo >= dhi ? std::make_pair(dlo, Label(s.lo)) : std::make_pair(dhi, Label(s.hi));
    }
    case WeakSet::Kind::PartialOrder:
      return extremum_over_partial_order(loss, z, s, true);
    case WeakSet::Kind::Full: {
      switch (loss.space().kind) {
        case SpaceKind::Classes: {
          double best = 0.0;
          Label arg;
          for (int y = 0; y < loss.space().m; ++y) {
            double v = loss.eval(z, Label(y));
            if (y == 0 || v > best) {
              best = v;
              arg = Label(y);
            }
          }
          return {best, arg};
        }
        case SpaceKind::Permutations: {
          // farthest total order from z
          int m = loss.space().m;
          Vec pz = kendall_embedding(m, as_perm(z));
          Mat scores(m, m);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) scores(i, j) = -pz[static_cast<size_t>(i) * m + j];
          Perm y = feedback_arcset_decode(scores);
          return {loss.eval(z, Label(y)), Label(y)};
        }
        case SpaceKind::RealGrid: {
          double zl = as_real(z);
          double lo = loss.space().lo, hi = loss.space().hi;
          double dlo = (zl - lo) * (zl - lo), dhi = (zl - hi) * (zl - hi);
          return dlo >= dhi ? std::make_pair(dlo, Label(lo)) : std::make_pair(dhi, Label(hi));
        }
      }
      throw std::logic_error("unreachable");
    }
  }
  throw std::logic_error("unreachable");
}

Vec wellbehaved_init(const Loss& loss, const WeakSet& s) {
  switch (s.kind) {
    case WeakSet::Kind::Explicit: {
      Vec mean(loss.embed_dim(), 0.0);
      for (const Label& y : s.labels) {
        if (!loss.space().contains(y)) throw std::invalid_argument("wellbehaved_init: candidate outside the loss space");
        axpy(mean, 1.0 / static_cast<double>(s.labels.size()), loss.phi(y));
      }
      return mean;
    }
    case WeakSet::Kind::Interval:
      if (loss.space().kind != SpaceKind::RealGrid)
        throw std::invalid_argument("interval sets are only legal under the square-loss task");
      return loss.phi(Label(0.5 * (s.lo + s.hi)));
    case WeakSet::Kind::PartialOrder: {
      if (loss.space().kind != SpaceKind::Permutations || s.m != loss.space().m)
        throw std::invalid_argument("partial-order set does not match the loss space");
      int m = s.m;
      Vec v(static_cast<size_t>(m) * m, 0.0);
      for (const auto& [key, sgn] : s.observed) {
        auto [i, j] = key;
        v[static_cast<size_t>(i) * m + j] = sgn;
        v[static_cast<size_t>(j) * m + i] = -sgn;
      }
      return v;
    }
    case WeakSet::Kind::Full:
      return Vec(loss.embed_dim(), 0.0);
  }
  throw std::logic_error("unreachable");
}

}  // namespace weaklab
