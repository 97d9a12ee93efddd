#include "weaklab/disambig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weaklab {

namespace {

void validate_problem(const Mat& a, const std::vector<WeakSet>& sets) {
  int n = static_cast<int>(sets.size());
  if (n < 1) throw std::invalid_argument("disambiguation: empty problem");
  if (a.rows != n || a.cols != n) throw std::invalid_argument("disambiguation: weight matrix shape mismatch");
  for (double v : a.data)
    if (!std::isfinite(v)) throw std::invalid_argument("disambiguation: weights must be finite");
}

bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double mat_sum(const Mat& a) {
  double s = 0.0;
  for (double v : a.data) s += v;
  return s;
}

// a label inside s to report when no half-step ever committed
Label fallback_label(const Loss& loss, const WeakSet& s) {
  switch (s.kind) {
    case WeakSet::Kind::Explicit:
      return s.labels.front();
    case WeakSet::Kind::Interval:
      return Label(0.5 * (s.lo + s.hi));
    case WeakSet::Kind::PartialOrder:
      return min_inner_over_set(loss, Vec(loss.embed_dim(), 0.0), s).label;
    case WeakSet::Kind::Full:
      return min_inner_over_set(loss, Vec(loss.embed_dim(), 0.0), s).label;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

double objective(const Mat& a, const Loss& loss, const std::vector<Label>& y, const std::vector<Label>& z) {
  int n = a.rows;
  if (a.cols != n || static_cast<int>(y.size()) != n || static_cast<int>(z.size()) != n)
    throw std::invalid_argument("objective: shape mismatch");
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w = a(i, j);
      if (w == 0.0) continue;
      total += w * loss.eval(z[i], y[j]);
    }
  return total;
}

double completed_objective(const Mat& a, const Loss& loss, const std::vector<Label>& y) {
  int n = a.rows;
  std::vector<Label> z;
  z.reserve(n);
  std::vector<Vec> phis;
  phis.reserve(n);
  for (const Label& yy : y) phis.push_back(loss.phi(yy));
  for (int i = 0; i < n; ++i) {
    Vec g(loss.embed_dim(), 0.0);
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) axpy(g, a(i, j), phis[j]);
    z.push_back(decode(loss, g));
  }
  return objective(a, loss, y, z);
}

DisambiguationResult alternating_minimization(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets,
                                              std::vector<Vec> init, int max_iter, double tol) {
  validate_problem(a, sets);
  if (max_iter < 1) throw std::invalid_argument("alternating_minimization: max_iter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("alternating_minimization: tol must be positive");
  int n = a.rows;
  int dim = loss.embed_dim();
  if (static_cast<int>(init.size()) != n) throw std::invalid_argument("alternating_minimization: bad init size");
  for (const Vec& v : init)
    if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("alternating_minimization: bad init dimension");

  std::vector<Vec> xi = std::move(init);
  std::vector<Vec> zeta(n, Vec(dim, 0.0));
  std::vector<Label> labels(n);
  for (int j = 0; j < n; ++j) labels[j] = fallback_label(loss, sets[j]);

  double offset_total = loss.inner_offset() * mat_sum(a);
  DisambiguationResult res;
  double prev = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    res.iterations = sweep;

    // zeta half-step: decode each row of A * Xi
    double obj = offset_total;
    for (int i = 0; i < n; ++i) {
      Vec g(dim, 0.0);
      for (int j = 0; j < n; ++j)
        if (a(i, j) != 0.0) axpy(g, a(i, j), xi[j]);
      if (!all_zero(g)) zeta[i] = loss.psi(decode(loss, g));
      obj += dot(zeta[i], g);
    }
    res.objective_trace.push_back(obj);

    // xi half-step: per-column candidate minimization
    obj = offset_total;
    for (int j = 0; j < n; ++j) {
      Vec h(dim, 0.0);
      for (int i = 0; i < n; ++i)
        if (a(i, j) != 0.0) axpy(h, a(i, j), zeta[i]);
      SetArgmin best = min_inner_over_set(loss, h, sets[j]);
      bool constrained = sets[j].kind == WeakSet::Kind::Explicit || sets[j].kind == WeakSet::Kind::Interval;
      if (!best.all_tie || constrained || dot(h, xi[j]) > best.score) {
        xi[j] = loss.phi(best.label);
        labels[j] = best.label;
      }
      obj += dot(h, xi[j]);
    }
    res.objective_trace.push_back(obj);

    if (prev - obj < tol) {
      res.converged = true;
      break;
    }
    prev = obj;
  }

  res.final_objective = completed_objective(a, loss, labels);
  res.labels = std::move(labels);
  res.xi = std::move(xi);
  return res;
}

DisambiguationResult alternating_minimization(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets,
                                              int max_iter, double tol) {
  std::vector<Vec> init;
  init.reserve(sets.size());
  for (const WeakSet& s : sets) init.push_back(wellbehaved_init(loss, s));
  return alternating_minimization(a, loss, sets, std::move(init), max_iter, tol);
}

// ---------------------------------------------------------------------------
// IQP relaxation

namespace {

struct StackedVertices {
  std::vector<int> candidates;       // class indices
  std::vector<const Vec*> psi, phi;  // decomposition vertices, parallel to candidates
};

StackedVertices vertices_for(const QuadraticDecomposition& dec, const WeakSet& s, int m) {
  StackedVertices v;
  switch (s.kind) {
    case WeakSet::Kind::Explicit:
      for (const Label& y : s.labels) v.candidates.push_back(as_class(y));
      break;
    case WeakSet::Kind::Full:
      for (int y = 0; y < m; ++y) v.candidates.push_back(y);
      break;
    default:
      throw std::invalid_argument("iqp_disambiguation: candidate sets must be explicit or full");
  }
  for (int y : v.candidates) {
    v.psi.push_back(&dec.psi[y]);
    v.phi.push_back(&dec.phi[y]);
  }
  return v;
}

}  // namespace

DisambiguationResult iqp_disambiguation(const Mat& a, const Loss& loss, const std::vector<WeakSet>& sets, int steps,
                                        IqpStepRule rule) {
  validate_problem(a, sets);
  if (steps < 1) throw std::invalid_argument("iqp_disambiguation: steps must be positive");
  if (!loss.has_decomposition())
    throw std::invalid_argument("iqp_disambiguation: loss lacks the constant-norm quadratic decomposition");
  const QuadraticDecomposition& dec = loss.decomposition();
  int n = a.rows;
  int m = loss.space().m;
  int dim = static_cast<int>(dec.psi.front().size());

  std::vector<StackedVertices> verts;
  verts.reserve(n);
  for (const WeakSet& s : sets) verts.push_back(vertices_for(dec, s, m));

  Mat a_sym = symmetrize(a);
  double shift = spectral_norm(a, 200, 1e-10);
  // p = shift*I + A_s acts on the psi block, q = shift*I - A_s on the phi block
  auto apply_block = [&](const std::vector<Vec>& rows, double sign, std::vector<Vec>& out) {
    for (int i = 0; i < n; ++i) {
      out[i].assign(dim, 0.0);
      for (int j = 0; j < n; ++j) {
        double w = (i == j ? shift : 0.0) + sign * a_sym(i, j);
        if (w != 0.0) axpy(out[i], w, rows[j]);
      }
    }
  };
  auto objective_value = [&](const std::vector<Vec>& psi_rows, const std::vector<Vec>& phi_rows) {
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double ps = (i == j ? shift : 0.0) + a_sym(i, j);
        double qs = (i == j ? shift : 0.0) - a_sym(i, j);
        if (ps != 0.0) total += ps * dot(psi_rows[i], psi_rows[j]);
        if (qs != 0.0) total += qs * dot(phi_rows[i], phi_rows[j]);
      }
    return total;
  };

  // start at the uniform vertex mixture
  std::vector<Vec> psi_rows(n, Vec(dim, 0.0)), phi_rows(n, Vec(dim, 0.0));
  for (int i = 0; i < n; ++i) {
    double w = 1.0 / static_cast<double>(verts[i].candidates.size());
    for (size_t c = 0; c < verts[i].candidates.size(); ++c) {
      axpy(psi_rows[i], w, *verts[i].psi[c]);
      axpy(phi_rows[i], w, *verts[i].phi[c]);
    }
  }

  DisambiguationResult res;
  res.objective_trace.push_back(objective_value(psi_rows, phi_rows));

  std::vector<Vec> grad_psi(n, Vec(dim, 0.0)), grad_phi(n, Vec(dim, 0.0));
  std::vector<Vec> dir_psi(n, Vec(dim, 0.0)), dir_phi(n, Vec(dim, 0.0));
  double gap = 0.0;
  for (int t = 0; t < steps; ++t) {
    res.iterations = t + 1;
    apply_block(psi_rows, +1.0, grad_psi);  // gradient/2 of the psi part
    apply_block(phi_rows, -1.0, grad_phi);

    // linear minimization oracle: best vertex per row
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_score = 0.0;
      for (size_t c = 0; c < verts[i].candidates.size(); ++c) {
        double s = dot(grad_psi[i], *verts[i].psi[c]) + dot(grad_phi[i], *verts[i].phi[c]);
        if (c == 0 || s < best_score) {
          best_score = s;
          best = static_cast<int>(c);
        }
      }
      for (int c = 0; c < dim; ++c) {
        dir_psi[i][c] = (*verts[i].psi[best])[c] - psi_rows[i][c];
        dir_phi[i][c] = (*verts[i].phi[best])[c] - phi_rows[i][c];
      }
    }

    // F(U + g D) = F(U) + g <grad, D> * 2 ... the quadratic form q(D) >= 0
    double lin = 0.0;
    for (int i = 0; i < n; ++i) lin += 2.0 * (dot(grad_psi[i], dir_psi[i]) + dot(grad_phi[i], dir_phi[i]));
    double quad = objective_value(dir_psi, dir_phi);
    gap = -lin;

    double gamma_max = 2.0 / (t + 2.0);
    double gamma = gamma_max;
    if (rule == IqpStepRule::CappedLineSearch) {
      if (quad > 0.0)
        gamma = std::clamp(-lin / (2.0 * quad), 0.0, gamma_max);
      else
        gamma = lin < 0.0 ? gamma_max : 0.0;
    }
    if (gamma > 0.0) {
      for (int i = 0; i < n; ++i) {
        axpy(psi_rows[i], gamma, dir_psi[i]);
        axpy(phi_rows[i], gamma, dir_phi[i]);
      }
    }
    res.objective_trace.push_back(objective_value(psi_rows, phi_rows));
    if (gap <= 1e-12 * (1.0 + std::abs(res.objective_trace.back()))) break;
  }
  res.converged = gap <= 1e-9 * (1.0 + std::abs(res.objective_trace.back()));

  // round every row to its nearest candidate vertex
  res.labels.resize(n);
  res.xi.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = 0.0;
    for (size_t c = 0; c < verts[i].candidates.size(); ++c) {
      double d = 0.0;
      for (int k = 0; k < dim; ++k) {
        double dp = psi_rows[i][k] - (*verts[i].psi[c])[k];
        double df = phi_rows[i][k] - (*verts[i].phi[c])[k];
        d += dp * dp + df * df;
      }
      if (c == 0 || d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    res.labels[i] = Label(verts[i].candidates[best]);
    res.xi[i] = loss.phi(res.labels[i]);
  }
  res.final_objective = completed_objective(a, loss, res.labels);
  return res;
}

}  // namespace weaklab
