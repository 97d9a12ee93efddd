#include "weaklab/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weaklab/csv.hpp"

namespace weaklab {

using nlohmann::json;

Dataset gen_interval_regression(int n, double omega, double r, double gamma, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_interval_regression: n must be positive");
  SplitMix64 rng(seed);
  Dataset d;
  d.x = Mat(n, 1);
  d.sets.reserve(n);
  d.hidden.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = rng.next_unit();
    double y = std::sin(omega * x);
    double u = rng.next_unit_open();
    double ri = r - gamma * std::log(u);
    double c = rng.next_unit() * ri;
    double shift = (y > 0 ? c : (y < 0 ? -c : 0.0));
    d.x(i, 0) = x;
    d.sets.push_back(WeakSet::interval(y + shift - ri, y + shift + ri));
    d.hidden.emplace_back(y);
  }
  return d;
}

std::vector<WeakSet> corrupt_classification(const std::vector<int>& labels, double gamma, int anchor, int m,
                                            uint64_t seed) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("corrupt_classification: gamma must be in [0,1]");
  if (anchor < 0 || anchor >= m) throw std::invalid_argument("corrupt_classification: anchor outside the label space");
  SplitMix64 rng(seed);
  std::vector<WeakSet> sets;
  sets.reserve(labels.size());
  for (int y : labels) {
    if (y < 0 || y >= m) throw std::invalid_argument("corrupt_classification: label outside the label space");
    if (rng.next_unit() < gamma)
      sets.push_back(WeakSet::explicit_set({Label(y)}));
    else
      sets.push_back(WeakSet::explicit_set({Label(y), Label(anchor)}));
  }
  return sets;
}

int most_frequent_label(const std::vector<int>& labels, int m) {
  std::vector<int> counts(m, 0);
  for (int y : labels) ++counts[y];
  int best = 0;
  for (int c = 1; c < m; ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

RankingData gen_ranking_lines(int m, int n, uint64_t seed) {
  if (m < 2) throw std::invalid_argument("gen_ranking_lines: need at least two items");
  if (n < 1) throw std::invalid_argument("gen_ranking_lines: n must be positive");
  SplitMix64 rng(seed);
  Vec slope(m), icept(m);
  for (int j = 0; j < m; ++j) {
    slope[j] = rng.next_uniform(-1.0, 1.0);
    icept[j] = rng.next_unit();
  }
  RankingData d;
  d.x = Mat(n, 1);
  d.y.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = rng.next_unit();
    d.x(i, 0) = x;
    Vec value(m);
    for (int j = 0; j < m; ++j) value[j] = slope[j] * x + icept[j];
    Perm rank(m, 0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        if (value[b] < value[a] || (value[b] == value[a] && b < a)) ++rank[a];
    d.y.push_back(std::move(rank));
  }
  return d;
}

WeakSet corrupt_ordering(const Perm& y, double p, SplitMix64& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("corrupt_ordering: p must be in [0,1]");
  if (!is_permutation(y)) throw std::invalid_argument("corrupt_ordering: input is not a permutation");
  int m = static_cast<int>(y.size());
  std::vector<std::tuple<int, int, int>> kept;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (rng.next_unit() < p) continue;  // coordinate dropped
      kept.emplace_back(i, j, (y[i] > y[j]) - (y[i] < y[j]));
    }
  if (kept.empty()) return WeakSet::full();
  return WeakSet::partial_order(m, kept);
}

std::vector<WeakSet> corrupt_orderings(const std::vector<Perm>& ys, double p, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<WeakSet> sets;
  sets.reserve(ys.size());
  for (const Perm& y : ys) sets.push_back(corrupt_ordering(y, p, rng));
  return sets;
}

Dataset gen_concentric_circles(uint64_t seed) {
  SplitMix64 rng(seed);
  const double two_pi = 6.283185307179586476925286766559;
  Dataset d;
  d.x = Mat(2004, 2);
  d.sets.reserve(2004);
  d.hidden.reserve(2004);
  for (int i = 0; i < 2000; ++i) {
    double theta = rng.next_unit();
    int ring = 1 + rng.next_int(4);
    d.x(i, 0) = ring * std::cos(two_pi * theta);
    d.x(i, 1) = ring * std::sin(two_pi * theta);
    d.sets.push_back(WeakSet::full());
    d.hidden.emplace_back(ring - 1);
  }
  const double labelled[4][3] = {
      {-2.0 * std::sqrt(3.0), 2.0, 4},
      {1.0, -2.0 * std::sqrt(2.0), 3},
      {-std::sqrt(3.0), -1.0, 2},
      {-1.0, 0.0, 1},
  };
  for (int k = 0; k < 4; ++k) {
    int i = 2000 + k;
    d.x(i, 0) = labelled[k][0];
    d.x(i, 1) = labelled[k][1];
    int cls = static_cast<int>(labelled[k][2]) - 1;
    d.sets.push_back(WeakSet::explicit_set({Label(cls)}));
    d.hidden.emplace_back(cls);
  }
  return d;
}

Dataset gen_gaussian_blobs(int n, int classes, double separation, double noise, uint64_t seed) {
  if (n < 1 || classes < 2) throw std::invalid_argument("gen_gaussian_blobs: bad size");
  SplitMix64 rng(seed);
  const double two_pi = 6.283185307179586476925286766559;
  Dataset d;
  d.x = Mat(n, 2);
  d.sets.reserve(n);
  d.hidden.reserve(n);
  for (int i = 0; i < n; ++i) {
    int c = rng.next_int(classes);
    double angle = two_pi * c / classes;
    d.x(i, 0) = separation * std::cos(angle) + noise * rng.next_gaussian();
    d.x(i, 1) = separation * std::sin(angle) + noise * rng.next_gaussian();
    d.sets.push_back(WeakSet::explicit_set({Label(c)}));
    d.hidden.emplace_back(c);
  }
  return d;
}

// ---------------------------------------------------------------------------
// LIBSVM parsing

LibsvmData parse_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open libsvm file: " + path);

  std::vector<double> raw;
  std::vector<std::vector<std::pair<int, double>>> feats;
  std::string line;
  int line_no = 0;
  int dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double label;
    if (!(ls >> label))
      throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) + ": bad label");
    std::vector<std::pair<int, double>> row;
    std::string tok;
    int prev_idx = 0;
    while (ls >> tok) {
      size_t colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) + ": expected idx:val, got '" +
                                 tok + "'");
      int idx;
      double val;
      try {
        size_t used = 0;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("");
        val = std::stod(tok.substr(colon + 1), &used);
        if (used != tok.size() - colon - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) + ": bad pair '" + tok + "'");
      }
      if (idx < 1)
        throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) + ": indices are 1-based");
      if (idx <= prev_idx)
        throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) +
                                 ": feature indices must be ascending");
      prev_idx = idx;
      dim = std::max(dim, idx);
      row.emplace_back(idx, val);
    }
    raw.push_back(label);
    feats.push_back(std::move(row));
  }

  LibsvmData out;
  int n = static_cast<int>(raw.size());
  out.x = Mat(n, dim);
  for (int i = 0; i < n; ++i)
    for (auto [idx, val] : feats[i]) out.x(i, idx - 1) = val;

  out.raw_labels = raw;
  std::sort(out.raw_labels.begin(), out.raw_labels.end());
  out.raw_labels.erase(std::unique(out.raw_labels.begin(), out.raw_labels.end()), out.raw_labels.end());
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    auto it = std::lower_bound(out.raw_labels.begin(), out.raw_labels.end(), raw[i]);
    out.y[i] = static_cast<int>(it - out.raw_labels.begin());
  }
  return out;
}

void write_libsvm(const Mat& x, const std::vector<double>& raw_labels, const std::string& path) {
  if (static_cast<int>(raw_labels.size()) != x.rows) throw std::invalid_argument("write_libsvm: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write libsvm file: " + path);
  for (int i = 0; i < x.rows; ++i) {
    out << format_double(raw_labels[i]);
    for (int j = 0; j < x.cols; ++j)
      if (x(i, j) != 0.0) out << ' ' << (j + 1) << ':' << format_double(x(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Ambiguity degree

double ambiguity_of_skewed_pair(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("ambiguity_of_skewed_pair: gamma must be in [0,1]");
  return 1.0 - gamma;
}

MonteCarloEstimate ambiguity_of_coordinate_drop(int m, double p, int draws, uint64_t seed) {
  if (m < 2 || m > 6) throw std::invalid_argument("ambiguity_of_coordinate_drop: m must be in [2,6]");
  if (draws < 1) throw std::invalid_argument("ambiguity_of_coordinate_drop: draws must be positive");
  Perm truth(m);
  for (int i = 0; i < m; ++i) truth[i] = i;
  std::vector<Perm> others;
  for (const Perm& z : all_permutations(m))
    if (z != truth) others.push_back(z);

  std::vector<int> hits(others.size(), 0);
  SplitMix64 rng(seed);
  for (int t = 0; t < draws; ++t) {
    WeakSet s = corrupt_ordering(truth, p, rng);
    for (size_t c = 0; c < others.size(); ++c)
      if (s.kind == WeakSet::Kind::Full || s.consistent_with(others[c])) ++hits[c];
  }
  MonteCarloEstimate est;
  for (size_t c = 0; c < others.size(); ++c) {
    double frac = static_cast<double>(hits[c]) / draws;
    if (frac > est.value) est.value = frac;
  }
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / draws);
  return est;
}

// ---------------------------------------------------------------------------
// Dataset archive

namespace {

json label_to_json(const Label& y) {
  if (std::holds_alternative<int>(y)) return std::get<int>(y);
  if (std::holds_alternative<double>(y)) return std::get<double>(y);
  return std::get<Perm>(y);
}

Label label_from_json(const json& j, const LabelSpace& space) {
  switch (space.kind) {
    case SpaceKind::Classes:
      return Label(j.get<int>());
    case SpaceKind::RealGrid:
      return Label(j.get<double>());
    case SpaceKind::Permutations:
      return Label(j.get<Perm>());
  }
  throw std::logic_error("unreachable");
}

json set_to_json(const WeakSet& s) {
  switch (s.kind) {
    case WeakSet::Kind::Explicit: {
      json arr = json::array();
      for (const Label& y : s.labels) arr.push_back(label_to_json(y));
      return {{"explicit", std::move(arr)}};
    }
    case WeakSet::Kind::Interval:
      return {{"interval", {s.lo, s.hi}}};
    case WeakSet::Kind::PartialOrder: {
      json signs = json::array();
      for (const auto& [key, sgn] : s.observed) signs.push_back({key.first, key.second, sgn});
      return {{"order", {{"m", s.m}, {"signs", std::move(signs)}}}};
    }
    case WeakSet::Kind::Full:
      return {{"full", true}};
  }
  throw std::logic_error("unreachable");
}

WeakSet set_from_json(const json& j, const LabelSpace& space) {
  if (j.contains("explicit")) {
    std::vector<Label> labels;
    for (const json& l : j.at("explicit")) labels.push_back(label_from_json(l, space));
    return WeakSet::explicit_set(std::move(labels));
  }
  if (j.contains("interval")) return WeakSet::interval(j.at("interval")[0].get<double>(), j.at("interval")[1].get<double>());
  if (j.contains("order")) {
    const json& o = j.at("order");
    std::vector<std::tuple<int, int, int>> signs;
    for (const json& s : o.at("signs"))
      signs.emplace_back(s[0].get<int>(), s[1].get<int>(), s[2].get<int>());
    return WeakSet::partial_order(o.at("m").get<int>(), signs);
  }
  if (j.contains("full")) return WeakSet::full();
  throw std::runtime_error("dataset archive: unknown set descriptor " + j.dump());
}

}  // namespace

void write_dataset_csv(const Dataset& data, const std::string& path) {
  Table t;
  for (int c = 0; c < data.x.cols; ++c) t.header.push_back("x_" + std::to_string(c));
  t.header.push_back("set");
  t.header.push_back("hidden");
  bool with_hidden = !data.hidden.empty();
  if (with_hidden && static_cast<int>(data.hidden.size()) != data.n())
    throw std::invalid_argument("write_dataset_csv: hidden label count mismatch");
  for (int i = 0; i < data.n(); ++i) {
    std::vector<std::string> row;
    for (int c = 0; c < data.x.cols; ++c) row.push_back(format_double(data.x(i, c)));
    row.push_back(set_to_json(data.sets[i]).dump());
    row.push_back(with_hidden ? label_to_json(data.hidden[i]).dump() : "");
    t.rows.push_back(std::move(row));
  }
  write_csv(t, path);
}

Dataset read_dataset_csv(const std::string& path, const LabelSpace& space) {
  Table t = read_csv(path);
  int set_col = t.column("set");
  int hidden_col = t.column("hidden");
  if (set_col < 0) throw std::runtime_error("dataset archive: missing 'set' column");
  int d = 0;
  while (t.column("x_" + std::to_string(d)) >= 0) ++d;
  if (d == 0) throw std::runtime_error("dataset archive: missing feature columns");

  Dataset out;
  out.x = Mat(static_cast<int>(t.rows.size()), d);
  for (size_t i = 0; i < t.rows.size(); ++i) {
    for (int c = 0; c < d; ++c) out.x(static_cast<int>(i), c) = std::stod(t.rows[i][t.column("x_" + std::to_string(c))]);
    out.sets.push_back(set_from_json(json::parse(t.rows[i][set_col]), space));
    if (hidden_col >= 0 && !t.rows[i][hidden_col].empty())
      out.hidden.push_back(label_from_json(json::parse(t.rows[i][hidden_col]), space));
  }
  if (!out.hidden.empty() && out.hidden.size() != t.rows.size())
    throw std::runtime_error("dataset archive: hidden labels must be all present or all absent");
  return out;
}

}  // namespace weaklab
