#include "weaklab/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace weaklab {

MetricsRecord evaluate(const std::vector<Label>& predictions, const std::vector<Label>& hidden, const Loss& loss) {
  if (predictions.size() != hidden.size()) throw std::invalid_argument("evaluate: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("evaluate: empty prediction set");
  MetricsRecord rec;
  rec.count = static_cast<int>(predictions.size());
  Vec per_sample(predictions.size());
  for (size_t i = 0; i < predictions.size(); ++i) {
    per_sample[i] = loss.eval(predictions[i], hidden[i]);
    rec.mean += per_sample[i];
  }
  rec.mean /= rec.count;
  if (rec.count > 1) {
    double ss = 0.0;
    for (double v : per_sample) ss += (v - rec.mean) * (v - rec.mean);
    rec.stddev = std::sqrt(ss / (rec.count - 1));
  }
  return rec;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Df: return "df";
    case Method::Il: return "il";
    case Method::Ac: return "ac";
  }
  throw std::logic_error("unreachable");
}

Method method_from_string(const std::string& s) {
  if (s == "df") return Method::Df;
  if (s == "il") return Method::Il;
  if (s == "ac") return Method::Ac;
  throw std::invalid_argument("unknown method '" + s + "', expected df, il or ac");
}

SchemeGrid SchemeGrid::krr(const Vec& sigmas, const Vec& lambdas) {
  SchemeGrid g;
  for (double s : sigmas)
    for (double l : lambdas) g.candidates.push_back(WeightScheme::krr(l, s));
  if (g.candidates.empty()) throw std::invalid_argument("SchemeGrid: empty grid");
  return g;
}

SchemeGrid SchemeGrid::knn(const std::vector<int>& ks) {
  SchemeGrid g;
  for (int k : ks) g.candidates.push_back(WeightScheme::knn(k));
  if (g.candidates.empty()) throw std::invalid_argument("SchemeGrid: empty grid");
  return g;
}

SchemeGrid SchemeGrid::single(WeightScheme scheme) {
  SchemeGrid g;
  g.candidates.push_back(std::move(scheme));
  return g;
}

std::string scheme_describe(const WeightScheme& s) {
  std::ostringstream os;
  switch (s.kind()) {
    case WeightScheme::Kind::Knn:
      os << "knn k=" << s.k();
      break;
    case WeightScheme::Kind::Krr:
      os << "krr sigma=" << s.sigma() << " lambda=" << s.lambda();
      break;
    case WeightScheme::Kind::NadarayaWatson:
      os << "nw h=" << s.bandwidth();
      break;
  }
  return os.str();
}

std::vector<int> fold_assignment(int n, int folds, uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("fold_assignment: need at least two folds");
  if (folds > n) throw std::invalid_argument("fold_assignment: more folds than samples");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  SplitMix64 rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.next_int(i + 1)]);
  std::vector<int> fold(n);
  for (int r = 0; r < n; ++r) fold[idx[r]] = r % folds;
  return fold;
}

namespace {

Mat submatrix(const Mat& x, const std::vector<int>& rows) {
  Mat out(static_cast<int>(rows.size()), x.cols);
  for (size_t r = 0; r < rows.size(); ++r)
    std::copy_n(&x.data[static_cast<size_t>(rows[r]) * x.cols], x.cols,
                &out.data[r * static_cast<size_t>(x.cols)]);
  return out;
}

template <typename T>
std::vector<T> subset(const std::vector<T>& v, const std::vector<int>& rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(v[r]);
  return out;
}

}  // namespace

std::vector<Label> run_method(Method method, const WeightScheme& scheme, LossPtr loss, const Mat& x_train,
                              const std::vector<WeakSet>& sets, const Mat& x_eval, int am_max_iter, double am_tol) {
  WeightScheme fitted = scheme.fitted() ? scheme : scheme.fit(x_train);
  switch (method) {
    case Method::Df: {
      DisambiguationResult am = alternating_minimization(fitted.weight_matrix(), *loss, sets, am_max_iter, am_tol);
      Predictor p = fit_predictor_xi(fitted, loss, x_train, std::move(am.xi));
      return p.predict_batch(x_eval);
    }
    case Method::Il: {
      InfimumLossPredictor p = fit_infimum_loss(fitted, loss, x_train, sets);
      return p.predict_batch(x_eval);
    }
    case Method::Ac: {
      Predictor p = fit_averaging_candidates(fitted, loss, x_train, sets);
      return p.predict_batch(x_eval);
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<CvEntry> cross_validate(const Mat& x, const std::vector<WeakSet>& sets, const std::vector<Label>& hidden,
                                    LossPtr loss, Method method, const SchemeGrid& grid, int folds,
                                    uint64_t fold_seed) {
  int n = x.rows;
  if (static_cast<int>(sets.size()) != n || static_cast<int>(hidden.size()) != n)
    throw std::invalid_argument("cross_validate: dataset size mismatch");
  std::vector<int> fold = fold_assignment(n, folds, fold_seed);

  std::vector<CvEntry> out;
  for (const WeightScheme& scheme : grid.candidates) {
    Vec fold_err;
    for (int f = 0; f < folds; ++f) {
      std::vector<int> train_rows, eval_rows;
      for (int i = 0; i < n; ++i) (fold[i] == f ? eval_rows : train_rows).push_back(i);
      if (train_rows.empty() || eval_rows.empty()) throw std::invalid_argument("cross_validate: degenerate fold");
      Mat xt = submatrix(x, train_rows);
      std::vector<Label> pred =
          run_method(method, scheme, loss, xt, subset(sets, train_rows), submatrix(x, eval_rows));
      fold_err.push_back(evaluate(pred, subset(hidden, eval_rows), *loss).mean);
    }
    CvEntry e{scheme, 0.0, 0.0, false};
    for (double v : fold_err) e.mean_error += v;
    e.mean_error /= folds;
    double ss = 0.0;
    for (double v : fold_err) ss += (v - e.mean_error) * (v - e.mean_error);
    e.std_error = std::sqrt(ss / (folds - 1));
    out.push_back(std::move(e));
  }
  int best = 0;
  for (size_t c = 1; c < out.size(); ++c)
    if (out[c].mean_error < out[best].mean_error) best = static_cast<int>(c);
  out[best].selected = true;
  return out;
}

double BenchResult::mean_selected_error(Method method, double level) const {
  double total = 0.0;
  int count = 0;
  for (const BenchCell& c : cells)
    if (c.method == method && c.level == level && c.selected) {
      total += c.mean_error;
      ++count;
    }
  if (count == 0) throw std::invalid_argument("mean_selected_error: no matching cells");
  return total / count;
}

namespace {

Table cells_to_table(const std::string& task, const std::vector<BenchCell>& cells) {
  Table t;
  t.header = {"task", "method", "corruption", "seed", "scheme", "mean_error", "std_error", "selected"};
  for (const BenchCell& c : cells)
    t.rows.push_back({task, method_name(c.method), format_double(c.level), std::to_string(c.seed), c.scheme,
                      format_double(c.mean_error), format_double(c.std_error), c.selected ? "1" : "0"});
  return t;
}

// corruption sweep shared by the classification and ranking benchmarks;
// make_sets turns (level, corruption seed) into candidate sets
template <typename MakeSets>
BenchResult corruption_sweep(const std::string& task, const Mat& x, const std::vector<Label>& hidden, LossPtr loss,
                             const std::vector<Method>& methods, const Vec& levels, int folds,
                             const std::vector<uint64_t>& seeds, const SchemeGrid& grid, MakeSets make_sets) {
  if (levels.empty()) throw std::invalid_argument("benchmark: corruption grid is empty");
  BenchResult res;
  for (uint64_t seed : seeds) {
    SplitMix64 derive(seed);
    uint64_t fold_seed = derive.next_u64();
    for (double level : levels) {
      uint64_t corruption_seed = derive.next_u64();
      std::vector<WeakSet> sets = make_sets(level, corruption_seed);
      for (Method method : methods) {
        std::vector<CvEntry> entries = cross_validate(x, sets, hidden, loss, method, grid, folds, fold_seed);
        for (const CvEntry& e : entries) {
          BenchCell cell;
          cell.method = method;
          cell.level = level;
          cell.seed = seed;
          cell.scheme = scheme_describe(e.scheme);
          cell.mean_error = e.mean_error;
          cell.std_error = e.std_error;
          cell.selected = e.selected;
          res.cells.push_back(std::move(cell));
        }
      }
    }
  }
  res.table = cells_to_table(task, res.cells);
  return res;
}

}  // namespace

BenchResult classification_benchmark(const Mat& x, const std::vector<int>& labels, int m,
                                     const std::vector<Method>& methods, const Vec& corruption_levels, int folds,
                                     const std::vector<uint64_t>& seeds, const SchemeGrid& grid) {
  if (static_cast<int>(labels.size()) != x.rows) throw std::invalid_argument("classification_benchmark: size mismatch");
  LossPtr loss = zero_one_loss(m);
  std::vector<Label> hidden;
  hidden.reserve(labels.size());
  for (int y : labels) hidden.emplace_back(y);
  int anchor = most_frequent_label(labels, m);
  return corruption_sweep("classification", x, hidden, loss, methods, corruption_levels, folds, seeds, grid,
                          [&](double level, uint64_t cseed) {
                            return corrupt_classification(labels, 1.0 - level, anchor, m, cseed);
                          });
}

BenchResult ranking_benchmark(int m, int n, const std::vector<Method>& methods, const Vec& corruption_levels,
                              int folds, const std::vector<uint64_t>& seeds, const SchemeGrid& grid) {
  if (std::find(methods.begin(), methods.end(), Method::Il) != methods.end() && m > 6)
    throw std::invalid_argument("ranking_benchmark: infimum-loss ranking is limited to m <= 6");
  RankingData data = gen_ranking_lines(m, n, seeds.empty() ? 1 : seeds.front());
  LossPtr loss = kendall_loss(m);
  std::vector<Label> hidden;
  hidden.reserve(data.y.size());
  for (const Perm& p : data.y) hidden.emplace_back(p);
  return corruption_sweep("ranking", data.x, hidden, loss, methods, corruption_levels, folds, seeds, grid,
                          [&](double level, uint64_t cseed) { return corrupt_orderings(data.y, level, cseed); });
}

IntervalResult interval_regression_benchmark(uint64_t seed, const Vec& lambda_grid) {
  if (lambda_grid.empty()) throw std::invalid_argument("interval_regression_benchmark: empty lambda grid");
  Dataset data = gen_interval_regression(10, 10.0, 1.0, 1.0 / 3.0, seed);
  LossPtr loss = square_loss(-6.0, 6.0, 1000);

  const int grid_n = 200;
  Mat x_eval(grid_n, 1);
  std::vector<Label> truth;
  truth.reserve(grid_n);
  for (int t = 0; t < grid_n; ++t) {
    double xv = static_cast<double>(t) / (grid_n - 1);
    x_eval(t, 0) = xv;
    truth.emplace_back(std::sin(10.0 * xv));
  }

  IntervalResult res;
  res.table.header = {"task", "method", "seed", "lambda", "test_mse", "selected"};
  for (Method method : {Method::Df, Method::Il}) {
    double best = 0.0;
    int best_idx = -1;
    Vec mses;
    for (double lambda : lambda_grid) {
      WeightScheme scheme = WeightScheme::krr(lambda, 0.1);
      std::vector<Label> pred = run_method(method, scheme, loss, data.x, data.sets, x_eval);
      double mse = evaluate(pred, truth, *loss).mean;
      mses.push_back(mse);
      if (best_idx < 0 || mse < best) {
        best = mse;
        best_idx = static_cast<int>(mses.size()) - 1;
      }
    }
    for (size_t li = 0; li < lambda_grid.size(); ++li)
      res.table.rows.push_back({"interval_regression", method_name(method), std::to_string(seed),
                                format_double(lambda_grid[li]), format_double(mses[li]),
                                static_cast<int>(li) == best_idx ? "1" : "0"});
    (method == Method::Df ? res.df_best_mse : res.il_best_mse) = best;
  }
  return res;
}

CirclesResult circles_benchmark(uint64_t seed, int grid_side, double ring_tolerance) {
  Dataset data = gen_concentric_circles(seed);
  LossPtr loss = zero_one_loss(4);

  WeightScheme knn20 = WeightScheme::knn(20).fit(data.x);
  DisambiguationResult am = alternating_minimization(knn20.weight_matrix(), *loss, data.sets);

  WeightScheme nw = WeightScheme::nadaraya_watson(0.08, true).fit(data.x);
  Predictor df = fit_predictor_xi(nw, loss, data.x, std::move(am.xi));
  InfimumLossPredictor il = fit_infimum_loss(nw, loss, data.x, data.sets);

  CirclesResult res;
  int df_hits = 0, il_hits = 0;
  for (int gi = 0; gi < grid_side; ++gi)
    for (int gj = 0; gj < grid_side; ++gj) {
      Vec p = {-4.5 + 9.0 * gi / (grid_side - 1), -4.5 + 9.0 * gj / (grid_side - 1)};
      double radius = std::sqrt(p[0] * p[0] + p[1] * p[1]);
      int ring = std::clamp(static_cast<int>(std::lround(radius)), 1, 4);
      if (std::abs(radius - ring) > ring_tolerance) continue;
      ++res.evaluated_points;
      int truth = ring - 1;
      if (as_class(df.predict(p)) == truth) ++df_hits;
      if (as_class(il.predict(p)) == truth) ++il_hits;
    }
  if (res.evaluated_points == 0) throw std::logic_error("circles_benchmark: empty evaluation grid");
  res.df_accuracy = static_cast<double>(df_hits) / res.evaluated_points;
  res.il_accuracy = static_cast<double>(il_hits) / res.evaluated_points;
  res.table.header = {"task", "method", "seed", "accuracy", "evaluated_points"};
  res.table.rows.push_back({"semisup_circles", "df", std::to_string(seed), format_double(res.df_accuracy),
                            std::to_string(res.evaluated_points)});
  res.table.rows.push_back({"semisup_circles", "il", std::to_string(seed), format_double(res.il_accuracy),
                            std::to_string(res.evaluated_points)});
  return res;
}

RateCurveResult rate_curve(double eta, double k0_fraction, const std::vector<int>& n_grid, int trials, uint64_t seed) {
  if (eta < 0.0 || eta >= 1.0) throw std::invalid_argument("rate_curve: eta must be in [0,1)");
  if (!(k0_fraction > 0.0)) throw std::invalid_argument("rate_curve: k0 must be positive");
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("rate_curve: n grid must be increasing");

  // two separated class regions on the line; the optimum classifies by side
  const double gap_lo = 0.45, gap_hi = 0.55;
  const int test_n = 1000;
  Mat x_eval(test_n, 1);
  std::vector<Label> truth;
  truth.reserve(test_n);
  for (int t = 0; t < test_n; ++t) {
    bool right = t >= test_n / 2;
    int j = right ? t - test_n / 2 : t;
    double xv = right ? gap_hi + (1.0 - gap_hi) * j / (test_n / 2 - 1) : gap_lo * j / (test_n / 2 - 1);
    x_eval(t, 0) = xv;
    truth.emplace_back(right ? 1 : 0);
  }

  LossPtr loss = zero_one_loss(2);
  double gamma = 1.0 - eta;
  SplitMix64 derive(seed);

  RateCurveResult res;
  res.n_grid = n_grid;
  res.table.header = {"task", "n", "k", "mean_excess_risk", "std_error", "trials"};
  for (int n : n_grid) {
    int k = static_cast<int>(std::ceil(k0_fraction * n));
    Vec risks;
    for (int t = 0; t < trials; ++t) {
      SplitMix64 rng(derive.next_u64());
      Mat x(n, 1);
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) {
        bool right = rng.next_bernoulli(0.5);
        x(i, 0) = right ? rng.next_uniform(gap_hi, 1.0) : rng.next_uniform(0.0, gap_lo);
        labels[i] = right ? 1 : 0;
      }
      std::vector<WeakSet> sets = corrupt_classification(labels, gamma, 0, 2, rng.next_u64());
      std::vector<Label> pred = run_method(Method::Df, WeightScheme::knn(k), loss, x, sets, x_eval);
      risks.push_back(evaluate(pred, truth, *loss).mean);
    }
    double mean = std::accumulate(risks.begin(), risks.end(), 0.0) / trials;
    double ss = 0.0;
    for (double v : risks) ss += (v - mean) * (v - mean);
    double se = trials > 1 ? std::sqrt(ss / (trials - 1)) / std::sqrt(static_cast<double>(trials)) : 0.0;
    res.mean_risk.push_back(mean);
    res.std_error.push_back(se);
    res.table.rows.push_back({"rate_curve", std::to_string(n), std::to_string(k), format_double(mean),
                              format_double(se), std::to_string(trials)});
  }

  // log-linear fit over the strictly positive region
  Vec xs, ys;
  for (size_t i = 0; i < res.mean_risk.size(); ++i)
    if (res.mean_risk[i] > 0.0) {
      xs.push_back(static_cast<double>(res.n_grid[i]));
      ys.push_back(std::log(res.mean_risk[i]));
    }
  if (xs.size() >= 2) {
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    res.slope = num / den;
    res.slope_defined = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// SVG emission

namespace {

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<SvgSeries>& series) {
  if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
  const double width = 800, height = 500;
  const double ml = 70, mr = 160, mt = 45, mb = 55;
  const char* palette[] = {"#e1701a", "#3a7d44", "#4464ad", "#a4036f", "#11999e", "#9a6324"};

  double xmin = series[0].x.front(), xmax = xmin, ymin = series[0].y.front(), ymax = ymin;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size() || (!s.yerr.empty() && s.yerr.size() != s.y.size()))
      throw std::invalid_argument("write_svg_plot: series length mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      double e = s.yerr.empty() ? 0.0 : s.yerr[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto sy = [&](double v) { return height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb); };

  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
     << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << svg_escape(title)
     << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\"" << height - mb
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double fx = xmin + (xmax - xmin) * t / 5.0;
    double fy = ymin + (ymax - ymin) * t / 5.0;
    os << "<line x1=\"" << sx(fx) << "\" y1=\"" << height - mb << "\" x2=\"" << sx(fx) << "\" y2=\""
       << height - mb + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(fx) << "\" y=\"" << height - mb + 20 << "\" text-anchor=\"middle\">"
       << format_double(std::round(fx * 1e4) / 1e4) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml << "\" y2=\"" << sy(fy)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">"
       << format_double(std::round(fy * 1e4) / 1e4) << "</text>\n";
  }
  os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << svg_escape(xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + height - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (mt + height - mb) / 2 << ")\">" << svg_escape(ylabel) << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    const char* color = palette[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) os << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
    os << "\"/>\n";
    for (size_t i = 0; i < s.x.size(); ++i) {
      os << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      if (!s.yerr.empty() && s.yerr[i] > 0.0) {
        double x = sx(s.x[i]);
        os << "<line x1=\"" << x << "\" y1=\"" << sy(s.y[i] - s.yerr[i]) << "\" x2=\"" << x << "\" y2=\""
           << sy(s.y[i] + s.yerr[i]) << "\" stroke=\"" << color << "\"/>\n";
        os << "<line x1=\"" << x - 4 << "\" y1=\"" << sy(s.y[i] - s.yerr[i]) << "\" x2=\"" << x + 4 << "\" y2=\""
           << sy(s.y[i] - s.yerr[i]) << "\" stroke=\"" << color << "\"/>\n";
        os << "<line x1=\"" << x - 4 << "\" y1=\"" << sy(s.y[i] + s.yerr[i]) << "\" x2=\"" << x + 4 << "\" y2=\""
           << sy(s.y[i] + s.yerr[i]) << "\" stroke=\"" << color << "\"/>\n";
      }
    }
    double ly = mt + 18.0 * si;
    os << "<line x1=\"" << width - mr + 12 << "\" y1=\"" << ly << "\" x2=\"" << width - mr + 36 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - mr + 42 << "\" y=\"" << ly + 4 << "\">" << svg_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << os.str();
}

// ---------------------------------------------------------------------------
// Config front end

Vec parse_level_spec(const std::string& spec) {
  Vec out;
  if (spec.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !(step > 0.0))
      throw std::invalid_argument("bad corruption spec '" + spec + "', expected start:step:stop");
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(std::min(v, stop));
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("bad corruption spec '" + spec + "'");
  return out;
}

namespace {

std::vector<uint64_t> parse_seed_list(const std::string& s) {
  std::vector<uint64_t> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoull(tok));
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

Vec parse_double_list(const std::string& s) {
  Vec out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key == "task") cfg.task = val;
    else if (key == "method") {
      cfg.methods.clear();
      std::istringstream is(val);
      std::string tok;
      while (std::getline(is, tok, ',')) cfg.methods.push_back(method_from_string(trim(tok)));
    } else if (key == "weights") cfg.weights = val;
    else if (key == "k") cfg.k_grid = parse_int_list(val);
    else if (key == "sigma") cfg.sigma_grid = parse_double_list(val);
    else if (key == "lambda") cfg.lambda_grid = parse_double_list(val);
    else if (key == "h") cfg.h = std::stod(val);
    else if (key == "corruption") cfg.corruption_levels = parse_level_spec(val);
    else if (key == "folds") cfg.folds = std::stoi(val);
    else if (key == "seeds" || key == "seed") cfg.seeds = parse_seed_list(val);
    else if (key == "data") cfg.data_path = val;
    else if (key == "out") cfg.out_path = val;
    else if (key == "svg") cfg.svg_path = val;
    else if (key == "eta") cfg.eta = std::stod(val);
    else if (key == "k0") cfg.k0 = std::stod(val);
    else if (key == "n_grid") cfg.n_grid = parse_int_list(val);
    else if (key == "trials") cfg.trials = std::stoi(val);
    else if (key == "n") cfg.n = std::stoi(val);
    else if (key == "m") cfg.m = std::stoi(val);
    else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

namespace {

SchemeGrid grid_from_config(const ExperimentConfig& cfg, int n, int d) {
  if (cfg.weights == "knn") {
    std::vector<int> ks = cfg.k_grid;
    if (ks.empty()) ks = {5, 10, 20};
    for (int& k : ks) k = std::min(k, std::max(1, n - n / cfg.folds - 1));
    return SchemeGrid::knn(ks);
  }
  if (cfg.weights == "krr") {
    Vec sigmas = cfg.sigma_grid;
    Vec lambdas = cfg.lambda_grid;
    if (sigmas.empty()) sigmas = {1.0 * d, 0.1 * d, 0.01 * d};
    if (lambdas.empty()) {
      double base = 1.0 / std::sqrt(static_cast<double>(n));
      lambdas = {base, base * 1e-3, base * 1e-6};
    }
    return SchemeGrid::krr(sigmas, lambdas);
  }
  if (cfg.weights == "nw") return SchemeGrid::single(WeightScheme::nadaraya_watson(cfg.h, true));
  throw std::invalid_argument("unknown weight scheme '" + cfg.weights + "'");
}

void emit_sweep_svg(const ExperimentConfig& cfg, const BenchResult& res, const Vec& levels, const std::string& ylabel) {
  std::vector<SvgSeries> series;
  for (Method m : cfg.methods) {
    SvgSeries s;
    s.name = method_name(m);
    for (double level : levels) {
      Vec errs;
      for (const BenchCell& c : res.cells)
        if (c.method == m && c.level == level && c.selected) errs.push_back(c.mean_error);
      if (errs.empty()) continue;
      double mean = std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size();
      double ss = 0.0;
      for (double v : errs) ss += (v - mean) * (v - mean);
      s.x.push_back(level);
      s.y.push_back(mean);
      s.yerr.push_back(errs.size() > 1 ? std::sqrt(ss / (errs.size() - 1)) : 0.0);
    }
    series.push_back(std::move(s));
  }
  write_svg_plot(cfg.svg_path, cfg.task + " error vs corruption", "corruption level", ylabel, series);
}

}  // namespace

Table run_experiment(ExperimentConfig cfg) {
  if (const char* env = std::getenv("WEAKLAB_SEED")) cfg.seeds = {std::stoull(env)};
  if (cfg.task == "rate") cfg.task = "rate_curve";

  Table table;
  if (cfg.task == "classification") {
    Mat x;
    std::vector<int> labels;
    int m = 0;
    if (!cfg.data_path.empty()) {
      LibsvmData data = parse_libsvm(cfg.data_path);
      x = std::move(data.x);
      labels = std::move(data.y);
      m = static_cast<int>(data.raw_labels.size());
    } else {
      Dataset blobs = gen_gaussian_blobs(cfg.n, 3, 3.0, 0.5, cfg.seeds.front());
      x = std::move(blobs.x);
      for (const Label& l : blobs.hidden) labels.push_back(as_class(l));
      m = 3;
    }
    Vec levels = cfg.corruption_levels.empty() ? Vec{0.0, 0.25, 0.5, 0.75} : cfg.corruption_levels;
    BenchResult res = classification_benchmark(x, labels, m, cfg.methods, levels, cfg.folds, cfg.seeds,
                                               grid_from_config(cfg, x.rows, x.cols));
    if (!cfg.svg_path.empty()) emit_sweep_svg(cfg, res, levels, "cross-validated 0-1 error");
    table = std::move(res.table);
  } else if (cfg.task == "ranking") {
    Vec levels = cfg.corruption_levels.empty() ? Vec{0.0, 0.25, 0.5, 0.75} : cfg.corruption_levels;
    BenchResult res = ranking_benchmark(cfg.m, cfg.n, cfg.methods, levels, cfg.folds, cfg.seeds,
                                        grid_from_config(cfg, cfg.n, 1));
    if (!cfg.svg_path.empty()) emit_sweep_svg(cfg, res, levels, "cross-validated Kendall loss");
    table = std::move(res.table);
  } else if (cfg.task == "interval_regression") {
    Vec lambdas = cfg.lambda_grid.empty() ? Vec{1e-1, 1e-3, 1e-6} : cfg.lambda_grid;
    for (uint64_t seed : cfg.seeds) {
      IntervalResult res = interval_regression_benchmark(seed, lambdas);
      if (table.header.empty()) table.header = res.table.header;
      for (auto& row : res.table.rows) table.rows.push_back(std::move(row));
    }
  } else if (cfg.task == "semisup_circles") {
    for (uint64_t seed : cfg.seeds) {
      CirclesResult res = circles_benchmark(seed);
      if (table.header.empty()) table.header = res.table.header;
      for (auto& row : res.table.rows) table.rows.push_back(std::move(row));
    }
  } else if (cfg.task == "rate_curve") {
    RateCurveResult res = rate_curve(cfg.eta, cfg.k0, cfg.n_grid, cfg.trials, cfg.seeds.front());
    table = std::move(res.table);
    if (!cfg.svg_path.empty()) {
      SvgSeries s;
      s.name = "df";
      for (size_t i = 0; i < res.n_grid.size(); ++i) {
        s.x.push_back(res.n_grid[i]);
        s.y.push_back(res.mean_risk[i]);
        s.yerr.push_back(res.std_error[i]);
      }
      write_svg_plot(cfg.svg_path, "excess risk vs sample count", "n", "mean excess risk", {s});
    }
  } else {
    throw std::invalid_argument("unknown task '" + cfg.task + "'");
  }

  write_csv(table, cfg.out_path);
  return table;
}

}  // namespace weaklab
