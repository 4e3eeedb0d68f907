// Command-line harness: train/evaluate single models, run the repeated-split
// benchmark protocol, cross-validate balancing parameters, and emit synthetic
// fixture datasets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "structdict/benchmark.hpp"
#include "structdict/model_io.hpp"
#include "structdict/rng.hpp"

namespace {

using namespace structdict;

struct CommonOpts {
  std::string data_path;
  std::string labels_path;
  std::string meta_path;
  std::string orientation = "columns";
  std::string method = "esdl";
  std::string alt = "half";
  std::string coding = "omp:30";
  std::string preset;
  int atoms = 0;
  double alpha = 0.01, beta = 1e-3, gamma = 1e-3, lambda = 1e-3;
  int max_iters = 50;
  double tol = 1e-6;
  double mu0 = 0.01, mu_max = 1e8, rho = 1.1, primal_tol = 1e-6;
  int admm_max_iters = 200;
  int init_iters = 10, init_sparsity = 5;
  bool normalize = true;
  std::uint64_t seed = 0;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_data) {
  auto* data = cmd->add_option("--data", o.data_path, "data file (CSV or SDLM binary)");
  if (needs_data) data->required();
  cmd->add_option("--labels", o.labels_path, "labels file (one integer per line; CSV data only)");
  cmd->add_option("--meta", o.meta_path, "image metadata sidecar (width/height)");
  cmd->add_option("--orientation", o.orientation, "CSV sample orientation")
      ->check(CLI::IsMember({"columns", "rows"}));
  cmd->add_option("--method", o.method, "training method")
      ->check(CLI::IsMember({"esdl", "sdl_l1", "ksvd_baseline"}));
  cmd->add_option("--alt", o.alt, "alternative samples: mirror, half, or file:PATH");
  cmd->add_option("--coding", o.coding, "test coding: omp:T0 or ridge[:p]");
  cmd->add_option("--preset", o.preset, "parameter preset")
      ->check(CLI::IsMember({"face", "scene"}));
  cmd->add_option("--atoms", o.atoms, "dictionary size K");
  cmd->add_option("--alpha", o.alpha, "alternative-sample weight");
  cmd->add_option("--beta", o.beta, "coefficient regularization weight");
  cmd->add_option("--gamma", o.gamma, "ideal-matrix regularization weight");
  cmd->add_option("--lambda", o.lambda, "classifier ridge weight");
  cmd->add_option("--max-iters", o.max_iters, "solver iteration cap");
  cmd->add_option("--tol", o.tol, "relative objective-change tolerance");
  cmd->add_option("--mu0", o.mu0, "ADMM initial penalty");
  cmd->add_option("--mu-max", o.mu_max, "ADMM penalty cap");
  cmd->add_option("--rho", o.rho, "ADMM penalty growth factor");
  cmd->add_option("--primal-tol", o.primal_tol, "ADMM primal residual tolerance");
  cmd->add_option("--admm-max-iters", o.admm_max_iters, "ADMM iteration cap");
  cmd->add_option("--init-iters", o.init_iters, "initializer iterations per class");
  cmd->add_option("--init-sparsity", o.init_sparsity, "initializer OMP sparsity");
  cmd->add_flag("--normalize,!--no-normalize", o.normalize,
                "unit-normalize sample columns before training");
  cmd->add_option("--seed", o.seed, "master random seed");
  cmd->add_option("--workers", o.workers,
                  "parallel repeats (default: STRUCTDICT_WORKERS or 1)");
}

ExperimentConfig to_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  cfg.data_path = o.data_path;
  cfg.labels_path = o.labels_path;
  cfg.meta_path = o.meta_path;
  cfg.orientation = o.orientation == "rows" ? SampleOrientation::rows
                                            : SampleOrientation::columns;

  if (o.method == "esdl") cfg.method = Method::esdl;
  else if (o.method == "sdl_l1") cfg.method = Method::sdl_l1;
  else cfg.method = Method::ksvd_baseline;

  if (o.alt == "mirror") cfg.alt = AltScheme::mirror;
  else if (o.alt == "half") cfg.alt = AltScheme::half_split;
  else if (o.alt.rfind("file:", 0) == 0) {
    cfg.alt = AltScheme::explicit_file;
    cfg.alt_path = o.alt.substr(5);
    // A CSV alt file reuses the main labels file layout: "file:DATA,LABELS".
    auto comma = cfg.alt_path.find(',');
    if (comma != std::string::npos) {
      cfg.alt_labels_path = cfg.alt_path.substr(comma + 1);
      cfg.alt_path = cfg.alt_path.substr(0, comma);
    }
  } else {
    throw ConfigError("--alt must be mirror, half, or file:PATH");
  }

  if (o.coding.rfind("omp:", 0) == 0) {
    cfg.coding.kind = CodingSpec::Kind::omp;
    cfg.coding.omp.sparsity = std::stoi(o.coding.substr(4));
  } else if (o.coding == "omp") {
    cfg.coding.kind = CodingSpec::Kind::omp;
  } else if (o.coding.rfind("ridge", 0) == 0) {
    cfg.coding.kind = CodingSpec::Kind::ridge;
    if (o.coding.size() > 6 && o.coding[5] == ':')
      cfg.coding.ridge = std::stod(o.coding.substr(6));
  } else {
    throw ConfigError("--coding must be omp:T0 or ridge[:p]");
  }

  EsdlParams base;
  if (o.preset == "face") base = face_preset();
  else if (o.preset == "scene") base = scene_preset();
  if (o.preset.empty()) {
    base.alpha = o.alpha;
    base.beta = o.beta;
    base.gamma = o.gamma;
  }
  base.max_iters = o.max_iters;
  base.tol = o.tol;
  cfg.params = base;

  cfg.admm = AdmmParams{};
  static_cast<EsdlParams&>(cfg.admm) = base;
  cfg.admm.max_iters = o.admm_max_iters;
  cfg.admm.mu0 = o.mu0;
  cfg.admm.mu_max = o.mu_max;
  cfg.admm.rho = o.rho;
  cfg.admm.primal_tol = o.primal_tol;

  cfg.atoms = o.atoms;
  cfg.lambda = o.lambda;
  cfg.init.iterations = o.init_iters;
  cfg.init.sparsity = o.init_sparsity;
  cfg.normalize = o.normalize;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  return cfg;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= csv.size()) {
    size_t comma = csv.find(',', start);
    std::string tok = csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty parameter list: " + csv);
  return out;
}

int cmd_train(const CommonOpts& o, const std::string& model_out) {
  ExperimentConfig cfg = to_config(o);
  LoadResult loaded = load_matrix(cfg.data_path, cfg.labels_path, cfg.orientation);
  std::optional<ImageMeta> meta;
  if (!cfg.meta_path.empty()) meta = load_image_meta(cfg.meta_path);
  std::optional<LabeledMatrix> alt;
  if (cfg.alt == AltScheme::explicit_file)
    alt = load_matrix(cfg.alt_path, cfg.alt_labels_path, cfg.orientation).data;

  std::vector<std::string> warnings;
  LabeledMatrix dataset =
      cfg.normalize ? normalize_columns(loaded.data, &warnings) : loaded.data;
  if (alt && cfg.normalize) alt = normalize_columns(*alt, &warnings);
  if (cfg.atoms <= 0 || cfg.atoms % dataset.class_count != 0)
    throw ConfigError("--atoms must be positive and divisible by the class count " +
                      std::to_string(dataset.class_count));

  PipelineModel pipe = train_full_pipeline(cfg, cfg.params.alpha, cfg.params.beta,
                                           cfg.params.gamma, dataset, alt, meta,
                                           mix_seed(cfg.seed, 2000));
  SavedModel model{pipe.dictionary, pipe.classifier, loaded.original_ids};
  save_model(model_out, model);

  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& w : pipe.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("trained %s model: %ld atoms, %d classes, %.3f s\n", o.method.c_str(),
              static_cast<long>(pipe.dictionary.atom_count()), dataset.class_count,
              pipe.train_seconds);
  std::printf("model written to %s\n", model_out.c_str());
  return 0;
}

int cmd_evaluate(const CommonOpts& o, const std::string& model_path,
                 const std::string& report_path, const std::string& format) {
  ExperimentConfig cfg = to_config(o);
  SavedModel model = load_model(model_path);
  LoadResult loaded = load_matrix(cfg.data_path, cfg.labels_path, cfg.orientation);

  // Map the test set's original label ids through the model's class table.
  std::vector<int> to_model(loaded.original_ids.size(), -1);
  for (size_t c = 0; c < loaded.original_ids.size(); ++c) {
    for (size_t m = 0; m < model.original_ids.size(); ++m)
      if (model.original_ids[m] == loaded.original_ids[c])
        to_model[c] = static_cast<int>(m);
    if (to_model[c] < 0)
      throw DataError("evaluate: test label id " +
                      std::to_string(loaded.original_ids[c]) +
                      " unknown to the model");
  }
  LabeledMatrix test = loaded.data;
  for (auto& lab : test.labels) lab = to_model[static_cast<size_t>(lab)];
  test.class_count = static_cast<int>(model.original_ids.size());

  std::vector<std::string> warnings;
  if (cfg.normalize) test = normalize_columns(test, &warnings);
  EvaluationResult eval =
      evaluate_classifier(model.classifier, model.dictionary, test, cfg.coding, &warnings);

  if (!report_path.empty()) {
    BenchmarkReport report;
    report.per_repeat_accuracy = {eval.accuracy};
    report.mean_accuracy = eval.accuracy;
    report.per_repeat_test_seconds = {eval.test_seconds};
    report.test_seconds_mean = eval.test_seconds;
    report.test_seconds_per_sample_mean =
        eval.test_seconds / static_cast<double>(test.count());
    report.per_repeat_train_seconds = {0.0};
    report.confusion = eval.confusion;
    for (int id : model.original_ids) report.class_names.push_back(std::to_string(id));
    report.warnings = warnings;
    report.config_echo["coding"] = o.coding;
    report.config_echo["data_path"] = o.data_path;
    report.config_echo["model"] = model_path;
    report.config_echo["normalize"] = o.normalize ? "true" : "false";
    emit_report(report, report_path,
                format == "csv" ? ReportFormat::csv : ReportFormat::json);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::printf("accuracy %.6f on %ld samples (%.3f s)\n", eval.accuracy,
              static_cast<long>(test.count()), eval.test_seconds);
  return 0;
}

int cmd_benchmark(const CommonOpts& o, int repeats, double train_per_class, int pinned,
                  const std::string& report_path, const std::string& format) {
  ExperimentConfig cfg = to_config(o);
  cfg.repeats = repeats;
  cfg.split.train_per_class = train_per_class;
  cfg.split.pinned_prefix = pinned;
  BenchmarkReport report = run_experiment(cfg);
  if (!report_path.empty())
    emit_report(report, report_path,
                format == "csv" ? ReportFormat::csv : ReportFormat::json);
  std::printf("mean accuracy %.6f over %zu repeats (train %.3f s, test %.3f s)\n",
              report.mean_accuracy, report.per_repeat_accuracy.size(),
              report.train_seconds_mean, report.test_seconds_mean);
  return 0;
}

int cmd_grid(const CommonOpts& o, double train_per_class, int pinned, int folds,
             const std::string& alphas, const std::string& betas,
             const std::string& gammas, const std::string& report_path,
             const std::string& format) {
  ExperimentConfig cfg = to_config(o);
  cfg.split.train_per_class = train_per_class;
  cfg.split.pinned_prefix = pinned;
  ParamGrid grid;
  if (!alphas.empty()) grid.alphas = parse_list(alphas);
  if (!betas.empty()) grid.betas = parse_list(betas);
  if (!gammas.empty()) grid.gammas = parse_list(gammas);
  GridResult result = grid_search(cfg, grid, folds);
  if (!report_path.empty())
    emit_grid_report(result, report_path,
                     format == "csv" ? ReportFormat::csv : ReportFormat::json);
  std::printf("best cell: alpha=%g beta=%g gamma=%g accuracy=%.6f (%zu cells)\n",
              result.best.alpha, result.best.beta, result.best.gamma,
              result.best.mean_accuracy, result.cells.size());
  return 0;
}

int cmd_synth(int classes, int dim, int subspace, int per_class, double noise,
              std::uint64_t seed, const std::string& out_path,
              const std::string& labels_out, const std::string& fmt,
              const std::string& meta_out) {
  LabeledMatrix data = make_synthetic(classes, dim, subspace, per_class, noise, seed);
  if (fmt == "csv") {
    if (labels_out.empty())
      throw ConfigError("synth: CSV output requires --labels-out");
    save_csv(out_path, labels_out, data);
  } else {
    save_binary(out_path, data);
  }
  if (!meta_out.empty()) save_image_meta(meta_out, ImageMeta{dim, 1});
  std::printf("wrote %d x %ld synthetic dataset (%d classes) to %s\n", dim,
              static_cast<long>(data.count()), classes, out_path.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured dictionary learning toolkit"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, bench_opts, grid_opts;
  std::string model_out, model_path;
  std::string report_path, format = "json";
  int repeats = 10, folds = 5, pinned = 0;
  double train_per_class = 0;
  std::string alphas, betas, gammas;
  int s_classes = 10, s_dim = 64, s_subspace = 5, s_per_class = 40;
  double s_noise = 0.05;
  std::uint64_t s_seed = 0;
  std::string s_out, s_labels_out, s_format = "binary", s_meta_out;

  CLI::App* train = app.add_subcommand("train", "fit a model and save it");
  add_common(train, train_opts, true);
  train->add_option("--model-out", model_out, "output model path")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a saved model");
  add_common(evaluate, eval_opts, true);
  evaluate->add_option("--model", model_path, "model path")->required();
  evaluate->add_option("--report", report_path, "report output path");
  evaluate->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* bench = app.add_subcommand("benchmark", "repeated-split benchmark");
  add_common(bench, bench_opts, true);
  bench->add_option("--repeats", repeats, "number of repeats");
  bench->add_option("--train-per-class", train_per_class,
                    "training samples per class (count or fraction)")->required();
  bench->add_option("--pinned", pinned, "always-selected leading samples per class");
  bench->add_option("--report", report_path, "report output path");
  bench->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* grid = app.add_subcommand("grid", "cross-validated parameter search");
  add_common(grid, grid_opts, true);
  grid->add_option("--train-per-class", train_per_class,
                   "training samples per class (count or fraction)")->required();
  grid->add_option("--pinned", pinned, "always-selected leading samples per class");
  grid->add_option("--folds", folds, "cross-validation folds");
  grid->add_option("--alphas", alphas, "comma-separated alpha values");
  grid->add_option("--betas", betas, "comma-separated beta values");
  grid->add_option("--gammas", gammas, "comma-separated gamma values");
  grid->add_option("--report", report_path, "report output path");
  grid->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* synth = app.add_subcommand("synth", "emit a synthetic fixture dataset");
  synth->add_option("--classes", s_classes, "number of classes");
  synth->add_option("--dim", s_dim, "feature dimension");
  synth->add_option("--subspace", s_subspace, "per-class subspace dimension");
  synth->add_option("--per-class", s_per_class, "samples per class");
  synth->add_option("--noise", s_noise, "isotropic noise sigma");
  synth->add_option("--seed", s_seed, "random seed");
  synth->add_option("--out", s_out, "output data path")->required();
  synth->add_option("--labels-out", s_labels_out, "labels path (CSV format)");
  synth->add_option("--synth-format", s_format, "output format")
      ->check(CLI::IsMember({"binary", "csv"}));
  synth->add_option("--meta-out", s_meta_out, "write an image metadata sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(train_opts, model_out);
    if (evaluate->parsed())
      return cmd_evaluate(eval_opts, model_path, report_path, format);
    if (bench->parsed())
      return cmd_benchmark(bench_opts, repeats, train_per_class, pinned, report_path,
                           format);
    if (grid->parsed())
      return cmd_grid(grid_opts, train_per_class, pinned, folds, alphas, betas, gammas,
                      report_path, format);
    if (synth->parsed())
      return cmd_synth(s_classes, s_dim, s_subspace, s_per_class, s_noise, s_seed,
                       s_out, s_labels_out, s_format, s_meta_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
