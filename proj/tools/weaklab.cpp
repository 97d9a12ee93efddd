// weaklab: disambiguate weakly supervised datasets, train plug-in
// predictors, and run the benchmark suites from the command line.

#include <CLI11.hpp>
#include <iostream>

#include "weaklab/bench.hpp"

using namespace weaklab;

namespace {

struct LossFlags {
  std::string kind = "zero_one";  // zero_one | matrix | kendall | square
  int classes = 2;
  int items = 3;
  std::string matrix_file;
  double lo = -6.0, hi = 6.0;
  int grid_count = 1000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--loss", kind, "loss kind: zero_one, matrix, kendall, square")
        ->check(CLI::IsMember({"zero_one", "matrix", "kendall", "square"}));
    cmd->add_option("--classes", classes, "class count for zero_one");
    cmd->add_option("--items", items, "item count for kendall");
    cmd->add_option("--loss-file", matrix_file, "plain-text loss matrix file");
    cmd->add_option("--lo", lo, "grid lower bound for square");
    cmd->add_option("--hi", hi, "grid upper bound for square");
    cmd->add_option("--grid-count", grid_count, "grid size for square");
  }

  LossPtr build() const {
    if (kind == "zero_one") return zero_one_loss(classes);
    if (kind == "matrix") {
      if (matrix_file.empty()) throw CLI::ValidationError("--loss matrix requires --loss-file");
      return loss_from_matrix_file(matrix_file);
    }
    if (kind == "kendall") return kendall_loss(items);
    return square_loss(lo, hi, grid_count);
  }
};

struct WeightFlags {
  std::string kind = "knn";
  int k = 20;
  double lambda = 1e-3, sigma = 0.1, h = 0.08;
  bool unnormalized = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--weights", kind, "weight scheme: knn, krr, nw")->check(CLI::IsMember({"knn", "krr", "nw"}));
    cmd->add_option("--k", k, "neighbor count for knn");
    cmd->add_option("--lambda", lambda, "ridge regularization for krr");
    cmd->add_option("--sigma", sigma, "Gaussian kernel width for krr");
    cmd->add_option("--h", h, "bandwidth for nw");
    cmd->add_flag("--unnormalized", unnormalized, "skip nw weight normalization");
  }

  WeightScheme build() const {
    if (kind == "knn") return WeightScheme::knn(k);
    if (kind == "krr") return WeightScheme::krr(lambda, sigma);
    return WeightScheme::nadaraya_watson(h, !unnormalized);
  }
};

Mat features_from_csv(const std::string& path) {
  Table t = read_csv(path);
  int d = 0;
  while (t.column("x_" + std::to_string(d)) >= 0) ++d;
  if (d == 0) throw std::runtime_error("input csv: missing x_* feature columns");
  Mat x(static_cast<int>(t.rows.size()), d);
  for (size_t i = 0; i < t.rows.size(); ++i)
    for (int c = 0; c < d; ++c) x(static_cast<int>(i), c) = std::stod(t.rows[i][t.column("x_" + std::to_string(c))]);
  return x;
}

int cmd_disambiguate(const std::string& data_path, const LossFlags& loss_flags, const WeightFlags& weight_flags,
                     const std::string& solver, double tol, int max_iter, int steps, const std::string& out,
                     const std::string& trace_out) {
  LossPtr loss = loss_flags.build();
  Dataset data = read_dataset_csv(data_path, loss->space());
  WeightScheme scheme = weight_flags.build().fit(data.x);
  Mat a = scheme.weight_matrix();

  DisambiguationResult res = solver == "iqp" ? iqp_disambiguation(a, *loss, data.sets, steps)
                                             : alternating_minimization(a, *loss, data.sets, max_iter, tol);

  Table labels;
  labels.header = {"index", "label"};
  for (size_t i = 0; i < res.labels.size(); ++i)
    labels.rows.push_back({std::to_string(i), label_to_string(res.labels[i])});
  write_csv(labels, out);

  if (!trace_out.empty()) {
    Table trace;
    trace.header = {"half_step", "objective"};
    for (size_t t = 0; t < res.objective_trace.size(); ++t)
      trace.rows.push_back({std::to_string(t), format_double(res.objective_trace[t])});
    write_csv(trace, trace_out);
  }

  std::cout << "solver=" << solver << " sweeps=" << res.iterations << " converged=" << (res.converged ? "yes" : "no")
            << " objective=" << res.final_objective << "\n";
  std::cout << "labels written to " << out << "\n";
  return 0;
}

int cmd_fit(const std::string& data_path, const LossFlags& loss_flags, const WeightFlags& weight_flags,
            const std::string& method, double tol, int max_iter, const std::string& model_out) {
  LossPtr loss = loss_flags.build();
  Dataset data = read_dataset_csv(data_path, loss->space());
  WeightScheme scheme = weight_flags.build().fit(data.x);

  std::vector<Vec> xi;
  if (method == "df") {
    DisambiguationResult res = alternating_minimization(scheme.weight_matrix(), *loss, data.sets, max_iter, tol);
    xi = std::move(res.xi);
  } else if (method == "ac") {
    for (const WeakSet& s : data.sets) xi.push_back(wellbehaved_init(*loss, s));
  } else {
    throw CLI::ValidationError("fit supports --method df or ac (il has no trained surrogate state)");
  }
  Predictor p = fit_predictor_xi(scheme, loss, data.x, std::move(xi));
  p.save(model_out);
  std::cout << "model written to " << model_out << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input_path, const std::string& out) {
  Predictor p = Predictor::load(model_path);
  Mat x = features_from_csv(input_path);
  std::vector<Label> pred = p.predict_batch(x);
  Table t;
  t.header = {"index", "label"};
  for (size_t i = 0; i < pred.size(); ++i) t.rows.push_back({std::to_string(i), label_to_string(pred[i])});
  write_csv(t, out);
  std::cout << pred.size() << " predictions written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak supervision disambiguation toolkit"};
  app.require_subcommand(1);

  // disambiguate
  auto* dis = app.add_subcommand("disambiguate", "complete a weak dataset into full labels");
  std::string dis_data, dis_solver = "am", dis_out = "labels.csv", dis_trace;
  double dis_tol = 1e-6;
  int dis_max_iter = 200, dis_steps = 200;
  LossFlags dis_loss;
  WeightFlags dis_weights;
  dis->add_option("--data", dis_data, "dataset archive csv")->required();
  dis->add_option("--solver", dis_solver, "am or iqp")->check(CLI::IsMember({"am", "iqp"}));
  dis->add_option("--tol", dis_tol, "stopping tolerance");
  dis->add_option("--max-iter", dis_max_iter, "sweep cap");
  dis->add_option("--steps", dis_steps, "iqp gradient steps");
  dis->add_option("--out", dis_out, "output labels csv");
  dis->add_option("--trace-out", dis_trace, "objective trace csv");
  dis_loss.attach(dis);
  dis_weights.attach(dis);

  // fit
  auto* fit = app.add_subcommand("fit", "train and persist a plug-in predictor");
  std::string fit_data, fit_method = "df", fit_model = "model.wlb";
  double fit_tol = 1e-6;
  int fit_max_iter = 200;
  LossFlags fit_loss;
  WeightFlags fit_weights;
  fit->add_option("--data", fit_data, "dataset archive csv")->required();
  fit->add_option("--method", fit_method, "df or ac")->check(CLI::IsMember({"df", "ac"}));
  fit->add_option("--tol", fit_tol, "disambiguation tolerance");
  fit->add_option("--max-iter", fit_max_iter, "disambiguation sweep cap");
  fit->add_option("--model", fit_model, "output model path");
  fit_loss.attach(fit);
  fit_weights.attach(fit);

  // predict
  auto* pre = app.add_subcommand("predict", "predict labels with a saved model");
  std::string pre_model, pre_input, pre_out = "predictions.csv";
  pre->add_option("--model", pre_model, "model archive")->required();
  pre->add_option("--input", pre_input, "csv with x_* feature columns")->required();
  pre->add_option("--out", pre_out, "output csv");

  // bench
  auto* ben = app.add_subcommand("bench", "run a benchmark task");
  std::string ben_config, ben_task, ben_method, ben_corruption, ben_data, ben_out, ben_svg, ben_weights;
  int ben_folds = 0, ben_trials = 0, ben_n = 0, ben_m = 0;
  double ben_eta = -1.0, ben_k0 = -1.0;
  std::string ben_seeds;
  ben->add_option("--config", ben_config, "key = value config file");
  ben->add_option("--task", ben_task, "interval_regression, classification, semisup_circles, ranking, rate_curve");
  ben->add_option("--method", ben_method, "comma list of df, il, ac");
  ben->add_option("--corruption", ben_corruption, "start:step:stop or comma list");
  ben->add_option("--data", ben_data, "libsvm input file");
  ben->add_option("--out", ben_out, "output csv");
  ben->add_option("--svg", ben_svg, "optional svg plot");
  ben->add_option("--weights", ben_weights, "knn, krr or nw");
  ben->add_option("--folds", ben_folds, "cross-validation folds");
  ben->add_option("--trials", ben_trials, "rate-curve trials");
  ben->add_option("--n", ben_n, "synthetic dataset size");
  ben->add_option("--m", ben_m, "ranking items / classes");
  ben->add_option("--eta", ben_eta, "rate-curve ambiguity");
  ben->add_option("--k0", ben_k0, "rate-curve neighbor fraction");
  ben->add_option("--seeds", ben_seeds, "comma list of seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dis->parsed())
      return cmd_disambiguate(dis_data, dis_loss, dis_weights, dis_solver, dis_tol, dis_max_iter, dis_steps, dis_out,
                              dis_trace);
    if (fit->parsed()) return cmd_fit(fit_data, fit_loss, fit_weights, fit_method, fit_tol, fit_max_iter, fit_model);
    if (pre->parsed()) return cmd_predict(pre_model, pre_input, pre_out);
    if (ben->parsed()) {
      ExperimentConfig cfg = ben_config.empty() ? ExperimentConfig{} : parse_config_file(ben_config);
      if (!ben_task.empty()) cfg.task = ben_task;
      if (!ben_method.empty()) {
        cfg.methods.clear();
        std::istringstream is(ben_method);
        std::string tok;
        while (std::getline(is, tok, ',')) cfg.methods.push_back(method_from_string(tok));
      }
      if (!ben_corruption.empty()) cfg.corruption_levels = parse_level_spec(ben_corruption);
      if (!ben_data.empty()) cfg.data_path = ben_data;
      if (!ben_out.empty()) cfg.out_path = ben_out;
      if (!ben_svg.empty()) cfg.svg_path = ben_svg;
      if (!ben_weights.empty()) cfg.weights = ben_weights;
      if (ben_folds > 0) cfg.folds = ben_folds;
      if (ben_trials > 0) cfg.trials = ben_trials;
      if (ben_n > 0) cfg.n = ben_n;
      if (ben_m > 0) cfg.m = ben_m;
      if (ben_eta >= 0.0) cfg.eta = ben_eta;
      if (ben_k0 > 0.0) cfg.k0 = ben_k0;
      if (!ben_seeds.empty()) {
        cfg.seeds.clear();
        std::istringstream is(ben_seeds);
        std::string tok;
        while (std::getline(is, tok, ',')) cfg.seeds.push_back(std::stoull(tok));
      }
      Table t = run_experiment(std::move(cfg));
      std::cout << t.rows.size() << " result rows written\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
