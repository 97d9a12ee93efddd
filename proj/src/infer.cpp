#include "weaklab/infer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace weaklab {

namespace {

bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

Mat reshape_scores(const Vec& g, int m) {
  Mat s(m, m);
  std::copy(g.begin(), g.end(), s.data.begin());
  return s;
}

// min of h0 + h1*y + h2*y^2 over [lo, hi]; ties resolve to the smaller y
std::pair<double, double> quadratic_min(double h0, double h1, double h2, double lo, double hi) {
  auto value = [&](double y) { return h0 + h1 * y + h2 * y * y; };
  double best_y = lo;
  double best = value(lo);
  double at_hi = value(hi);
  if (at_hi < best) {
    best = at_hi;
    best_y = hi;
  }
  if (h2 > 0.0) {
    double v = -h1 / (2.0 * h2);
    if (v > lo && v < hi && value(v) < best) {
      best = value(v);
      best_y = v;
    }
  }
  return {best, best_y};
}

}  // namespace

Label decode(const Loss& loss, const Vec& g) {
  if (static_cast<int>(g.size()) != loss.embed_dim())
    throw std::invalid_argument("decode: surrogate dimension mismatch");
  const LabelSpace& space = loss.space();
  switch (space.kind) {
    case SpaceKind::Classes: {
      int best = 0;
      double best_score = dot(loss.psi(Label(0)), g);
      for (int z = 1; z < space.m; ++z) {
        double s = dot(loss.psi(Label(z)), g);
        if (s < best_score) {
          best_score = s;
          best = z;
        }
      }
      return Label(best);
    }
    case SpaceKind::Permutations:
      // psi = -phi/2, so argmin <psi(z), g> = arcset maximizer on g
      return Label(feedback_arcset_decode(reshape_scores(g, space.m)));
    case SpaceKind::RealGrid: {
      // g = (sum alpha, sum alpha*y, sum alpha*y^2)
      if (g[0] > 0.0) {
        double mean = g[1] / g[0];
        int i0 = space.nearest_grid_index(mean);
        // guard the snap against rounding at cell boundaries
        int best = i0;
        double best_score = g[0] * space.grid_point(i0) * space.grid_point(i0) - 2.0 * g[1] * space.grid_point(i0);
        for (int i : {i0 - 1, i0 + 1}) {
          if (i < 0 || i >= space.count) continue;
          double z = space.grid_point(i);
          double s = g[0] * z * z - 2.0 * g[1] * z;
          if (s < best_score || (s == best_score && i < best)) {
            best_score = s;
            best = i;
          }
        }
        return Label(space.grid_point(best));
      }
      int best = 0;
      double best_score = 0.0;
      for (int i = 0; i < space.count; ++i) {
        double z = space.grid_point(i);
        double s = g[0] * z * z - 2.0 * g[1] * z;
        if (i == 0 || s < best_score) {
          best_score = s;
          best = i;
        }
      }
      return Label(space.grid_point(best));
    }
  }
  throw std::logic_error("unreachable");
}

SetArgmin min_inner_over_set(const Loss& loss, const Vec& h, const WeakSet& s) {
  if (static_cast<int>(h.size()) != loss.embed_dim())
    throw std::invalid_argument("min_inner_over_set: dimension mismatch");
  SetArgmin out;
  switch (s.kind) {
    case WeakSet::Kind::Explicit: {
      bool first = true;
      double lo = 0.0, hi = 0.0;
      for (const Label& y : s.labels) {
        double v = dot(h, loss.phi(y));
        if (first || v < out.score) {
          out.score = v;
          out.label = y;
        }
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
      }
      out.all_tie = (lo == hi);
      return out;
    }
    case WeakSet::Kind::Interval: {
      if (loss.space().kind != SpaceKind::RealGrid)
        throw std::invalid_argument("interval sets are only legal under the square-loss task");
      auto [score, y] = quadratic_min(h[0], h[1], h[2], s.lo, s.hi);
      out.score = score;
      out.label = Label(y);
      out.all_tie = (h[1] == 0.0 && h[2] == 0.0);
      return out;
    }
    case WeakSet::Kind::PartialOrder: {
      if (loss.space().kind != SpaceKind::Permutations || s.m != loss.space().m)
        throw std::invalid_argument("partial-order set does not match the loss space");
      if (all_zero(h)) {
        out.all_tie = true;
        Mat zero(s.m, s.m);
        out.label = Label(constrained_arcset_decode(zero, s));
        out.score = 0.0;
        return out;
      }
      Mat scores(s.m, s.m);
      for (size_t i = 0; i < h.size(); ++i) scores.data[i] = -h[i];
      Perm y = constrained_arcset_decode(scores, s);
      out.label = Label(y);
      out.score = dot(h, loss.phi(out.label));
      return out;
    }
    case WeakSet::Kind::Full: {
      const LabelSpace& space = loss.space();
      switch (space.kind) {
        case SpaceKind::Classes: {
          bool first = true;
          double lo = 0.0, hi = 0.0;
          for (int y = 0; y < space.m; ++y) {
            double v = dot(h, loss.phi(Label(y)));
            if (first || v < out.score) {
              out.score = v;
              out.label = Label(y);
            }
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
          }
          out.all_tie = (lo == hi);
          return out;
        }
        case SpaceKind::Permutations: {
          if (all_zero(h)) {
            out.all_tie = true;
            Perm identity(space.m);
            for (int i = 0; i < space.m; ++i) identity[i] = i;
            out.label = Label(identity);
            return out;
          }
          Mat scores(space.m, space.m);
          for (size_t i = 0; i < h.size(); ++i) scores.data[i] = -h[i];
          Perm y = feedback_arcset_decode(scores);
          out.label = Label(y);
          out.score = dot(h, loss.phi(out.label));
          return out;
        }
        case SpaceKind::RealGrid: {
          auto [score, y] = quadratic_min(h[0], h[1], h[2], space.lo, space.hi);
          out.score = score;
          out.label = Label(y);
          out.all_tie = (h[1] == 0.0 && h[2] == 0.0);
          return out;
        }
      }
      throw std::logic_error("unreachable");
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Predictor

Predictor::Predictor(WeightScheme fitted_scheme, LossPtr loss, std::vector<Vec> train_xi)
    : scheme_(std::move(fitted_scheme)), loss_(std::move(loss)), xi_(std::move(train_xi)) {
  if (!scheme_.fitted()) throw std::logic_error("Predictor: scheme is not fitted");
  if (static_cast<int>(xi_.size()) != scheme_.train_size())
    throw std::invalid_argument("Predictor: one surrogate vector per training point required");
  for (const Vec& v : xi_)
    if (static_cast<int>(v.size()) != loss_->embed_dim())
      throw std::invalid_argument("Predictor: surrogate dimension does not match the loss embedding");
}

Vec Predictor::surrogate_at(const Vec& x) const {
  Vec alpha = scheme_.weights_at(x);
  Vec g(loss_->embed_dim(), 0.0);
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    axpy(g, alpha[i], xi_[i]);
  }
  return g;
}

Label Predictor::predict(const Vec& x) const { return decode(*loss_, surrogate_at(x)); }

std::vector<Label> Predictor::predict_batch(const Mat& x) const {
  std::vector<Label> out;
  out.reserve(x.rows);
  Vec row(x.cols);
  for (int i = 0; i < x.rows; ++i) {
    std::copy_n(&x.data[static_cast<size_t>(i) * x.cols], x.cols, row.begin());
    out.push_back(predict(row));
  }
  return out;
}

Predictor fit_predictor(const WeightScheme& scheme, LossPtr loss, const Mat& x, const std::vector<Label>& labels) {
  if (static_cast<int>(labels.size()) != x.rows)
    throw std::invalid_argument("fit_predictor: one label per training point required");
  std::vector<Vec> xi;
  xi.reserve(labels.size());
  for (const Label& y : labels) {
    if (!loss->space().contains(y)) throw std::invalid_argument("fit_predictor: label outside the loss space");
    xi.push_back(loss->phi(y));
  }
  return Predictor(scheme.fitted() ? scheme : scheme.fit(x), std::move(loss), std::move(xi));
}

Predictor fit_predictor_xi(const WeightScheme& scheme, LossPtr loss, const Mat& x, std::vector<Vec> xi) {
  return Predictor(scheme.fitted() ? scheme : scheme.fit(x), std::move(loss), std::move(xi));
}

// ---------------------------------------------------------------------------
// Model archive

namespace {

using nlohmann::json;

json scheme_to_json(const WeightScheme& s) {
  switch (s.kind()) {
    case WeightScheme::Kind::Knn:
      return {{"kind", "knn"}, {"k", s.k()}};
    case WeightScheme::Kind::Krr:
      return {{"kind", "krr"}, {"lambda", s.lambda()}, {"sigma", s.sigma()}};
    case WeightScheme::Kind::NadarayaWatson:
      return {{"kind", "nw"}, {"h", s.bandwidth()}, {"normalized", s.normalized()}};
  }
  throw std::logic_error("unreachable");
}

WeightScheme scheme_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "knn") return WeightScheme::knn(j.at("k").get<int>());
  if (kind == "krr") return WeightScheme::krr(j.at("lambda").get<double>(), j.at("sigma").get<double>());
  if (kind == "nw") return WeightScheme::nadaraya_watson(j.at("h").get<double>(), j.at("normalized").get<bool>());
  throw std::runtime_error("model archive: unknown weight scheme '" + kind + "'");
}

json loss_to_json(const Loss& loss) {
  const LabelSpace& sp = loss.space();
  switch (sp.kind) {
    case SpaceKind::Classes: {
      const Mat& l = loss.matrix();
      json rows = json::array();
      for (int i = 0; i < l.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < l.cols; ++j) row.push_back(l(i, j));
        rows.push_back(std::move(row));
      }
      return {{"kind", "matrix"}, {"matrix", std::move(rows)}};
    }
    case SpaceKind::Permutations:
      return {{"kind", "kendall"}, {"m", sp.m}};
    case SpaceKind::RealGrid:
      return {{"kind", "square"}, {"lo", sp.lo}, {"hi", sp.hi}, {"count", sp.count}};
  }
  throw std::logic_error("unreachable");
}

LossPtr loss_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "matrix") {
    const json& rows = j.at("matrix");
    int m = static_cast<int>(rows.size());
    Mat l(m, m);
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < m; ++jj) l(i, jj) = rows[i][jj].get<double>();
    return matrix_loss(std::move(l));
  }
  if (kind == "kendall") return kendall_loss(j.at("m").get<int>());
  if (kind == "square")
    return square_loss(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("count").get<int>());
  throw std::runtime_error("model archive: unknown loss kind '" + kind + "'");
}

}  // namespace

void Predictor::save(const std::string& path) const {
  json j;
  j["scheme"] = scheme_to_json(scheme_);
  j["loss"] = loss_to_json(*loss_);
  json x = json::array();
  const Mat& tx = scheme_.train_x();
  for (int i = 0; i < tx.rows; ++i) {
    json row = json::array();
    for (int c = 0; c < tx.cols; ++c) row.push_back(tx(i, c));
    x.push_back(std::move(row));
  }
  j["x"] = std::move(x);
  json xi = json::array();
  for (const Vec& v : xi_) xi.push_back(v);
  j["xi"] = std::move(xi);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model archive: " + path);
  out << "WLB1\n" << j.dump() << "\n";
}

Predictor Predictor::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model archive: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "WLB1") throw std::runtime_error("model archive: bad header, expected WLB1");
  json j = json::parse(in);

  WeightScheme scheme = scheme_from_json(j.at("scheme"));
  LossPtr loss = loss_from_json(j.at("loss"));
  const json& xj = j.at("x");
  int n = static_cast<int>(xj.size());
  if (n < 1) throw std::runtime_error("model archive: empty training set");
  int d = static_cast<int>(xj[0].size());
  Mat x(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) x(i, c) = xj[i][c].get<double>();
  std::vector<Vec> xi;
  for (const json& row : j.at("xi")) xi.push_back(row.get<Vec>());
  return Predictor(scheme.fit(x), std::move(loss), std::move(xi));
}

}  // namespace weaklab
