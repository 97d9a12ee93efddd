#pragma once

#include <cstdint>
#include <string>

#include "weaklab/baselines.hpp"
#include "weaklab/csv.hpp"
#include "weaklab/data.hpp"
#include "weaklab/disambig.hpp"
#include "weaklab/infer.hpp"

namespace weaklab {

// Experiment harness: cross-validation, hyperparameter grids, metrics,
// the empirical rate experiment, CSV and SVG emission. Every run is a
// deterministic function of its configuration and seeds.

struct MetricsRecord {
  double mean = 0.0;
  double stddev = 0.0;  // per-sample sample deviation
  int count = 0;
};
MetricsRecord evaluate(const std::vector<Label>& predictions, const std::vector<Label>& hidden, const Loss& loss);

enum class Method { Df, Il, Ac };
std::string method_name(Method m);
Method method_from_string(const std::string& s);

struct SchemeGrid {
  std::vector<WeightScheme> candidates;  // unfitted templates
  static SchemeGrid krr(const Vec& sigmas, const Vec& lambdas);
  static SchemeGrid knn(const std::vector<int>& ks);
  static SchemeGrid single(WeightScheme scheme);
};
std::string scheme_describe(const WeightScheme& s);

// Deterministic shuffle + round-robin; every index lands in exactly one fold.
std::vector<int> fold_assignment(int n, int folds, uint64_t seed);

// Train the chosen method on weak data and predict at the given points.
// Df disambiguates with the scheme's own weight matrix, then learns the
// plug-in predictor from the completed surrogate vectors.
std::vector<Label> run_method(Method method, const WeightScheme& scheme, LossPtr loss, const Mat& x_train,
                              const std::vector<WeakSet>& sets, const Mat& x_eval, int am_max_iter = 200,
                              double am_tol = 1e-6);

struct CvEntry {
  WeightScheme scheme;
  double mean_error = 0.0;
  double std_error = 0.0;  // across folds
  bool selected = false;
};
std::vector<CvEntry> cross_validate(const Mat& x, const std::vector<WeakSet>& sets, const std::vector<Label>& hidden,
                                    LossPtr loss, Method method, const SchemeGrid& grid, int folds,
                                    uint64_t fold_seed);

// Corruption-sweep benchmark (classification or ranking flavor).
struct BenchCell {
  Method method;
  double level = 0.0;  // corrupted fraction; gamma = 1 - level for classification
  uint64_t seed = 0;
  std::string scheme;
  double mean_error = 0.0;
  double std_error = 0.0;
  bool selected = false;
};
struct BenchResult {
  std::vector<BenchCell> cells;
  Table table;
  // mean over seeds of the selected tuple's cross-validated error
  double mean_selected_error(Method method, double level) const;
};

BenchResult classification_benchmark(const Mat& x, const std::vector<int>& labels, int m,
                                     const std::vector<Method>& methods, const Vec& corruption_levels, int folds,
                                     const std::vector<uint64_t>& seeds, const SchemeGrid& grid);

BenchResult ranking_benchmark(int m, int n, const std::vector<Method>& methods, const Vec& corruption_levels,
                              int folds, const std::vector<uint64_t>& seeds, const SchemeGrid& grid);

// Interval regression comparison at the reference setup (n=10, omega=10,
// r=1, gamma=1/3, Gaussian-kernel ridge weights with sigma=.1); the best
// lambda per method is picked by test error on a 200-point grid.
struct IntervalResult {
  double df_best_mse = 0.0;
  double il_best_mse = 0.0;
  Table table;
};
IntervalResult interval_regression_benchmark(uint64_t seed, const Vec& lambda_grid);

// Semi-supervised rings: k-NN(20) disambiguation for Df, Nadaraya-Watson
// (h=.08) inference for both methods, accuracy over the on-ring portion
// of a uniform evaluation grid.
struct CirclesResult {
  double df_accuracy = 0.0;
  double il_accuracy = 0.0;
  int evaluated_points = 0;
  Table table;
};
CirclesResult circles_benchmark(uint64_t seed, int grid_side = 50, double ring_tolerance = 0.1);

// Empirical convergence-rate experiment: separated classes on the line,
// pair corruption with ambiguity eta, k = ceil(k0 * n) neighbors, excess
// risk against the known optimum on a 1000-point test grid.
struct RateCurveResult {
  std::vector<int> n_grid;
  Vec mean_risk;
  Vec std_error;
  double slope = 0.0;       // log-linear fit over points with risk > 0
  bool slope_defined = false;
  Table table;
};
RateCurveResult rate_curve(double eta, double k0_fraction, const std::vector<int>& n_grid, int trials, uint64_t seed);

// Self-contained SVG line/errorbar plot, fixed 800x500 viewport.
struct SvgSeries {
  std::string name;
  Vec x, y, yerr;  // yerr may be empty
};
void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<SvgSeries>& series);

// ---------------------------------------------------------------------------
// Config-driven front end (CLI and config files share this)

struct ExperimentConfig {
  std::string task = "classification";  // interval_regression | classification | semisup_circles | ranking | rate_curve
  std::vector<Method> methods = {Method::Df, Method::Il, Method::Ac};
  std::string weights = "krr";  // knn | krr | nw
  std::vector<int> k_grid;
  Vec sigma_grid, lambda_grid;
  double h = 0.08;
  Vec corruption_levels;  // defaults to 0:0.25:1 when empty
  int folds = 8;
  std::vector<uint64_t> seeds = {1};
  std::string data_path;  // libsvm input; synthetic blobs when empty
  std::string out_path = "results.csv";
  std::string svg_path;
  double eta = 0.5, k0 = 0.2;
  std::vector<int> n_grid = {25, 50, 100, 200, 400};
  int trials = 50;
  int n = 240;  // synthetic dataset size
  int m = 4;    // ranking items / blob classes
};

// key = value lines, '#' comments; unknown keys are an error.
ExperimentConfig parse_config_file(const std::string& path);
// "0:0.1:1" (start:step:stop) or comma-separated values
Vec parse_level_spec(const std::string& spec);

// Runs the configured experiment, writes CSV (and SVG when configured),
// returns the emitted table. WEAKLAB_SEED, when set, replaces the seed list.
Table run_experiment(ExperimentConfig config);

}  // namespace weaklab
