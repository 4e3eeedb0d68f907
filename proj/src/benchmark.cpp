#include "structdict/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include <Eigen/QR>

#include "structdict/rng.hpp"

namespace structdict {

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("STRUCTDICT_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::esdl: return "esdl";
    case Method::sdl_l1: return "sdl_l1";
    case Method::ksvd_baseline: return "ksvd_baseline";
  }
  return "?";
}

std::string alt_name(const ExperimentConfig& cfg) {
  switch (cfg.alt) {
    case AltScheme::mirror: return "mirror";
    case AltScheme::half_split: return "half";
    case AltScheme::explicit_file: return "file:" + cfg.alt_path;
  }
  return "?";
}

std::string coding_name(const CodingSpec& c) {
  if (c.kind == CodingSpec::Kind::omp) return "omp:" + std::to_string(c.omp.sparsity);
  return "ridge:" + fmt6(c.ridge);
}

} // namespace

PipelineModel train_full_pipeline(const ExperimentConfig& cfg, double alpha, double beta,
                                  double gamma, const LabeledMatrix& train,
                                  const std::optional<LabeledMatrix>& alt_subset,
                                  const std::optional<ImageMeta>& meta,
                                  std::uint64_t stream) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineModel out;

  LabeledMatrix Y, Y_alter;
  switch (cfg.alt) {
    case AltScheme::mirror: {
      if (!meta) throw ConfigError("mirror scheme requires image metadata");
      Y = train;
      Y_alter = mirror_samples(train, *meta);
      break;
    }
    case AltScheme::half_split: {
      auto halves = half_split_alternative(train, mix_seed(stream, 1), &out.warnings);
      Y = std::move(halves.first);
      Y_alter = std::move(halves.second);
      break;
    }
    case AltScheme::explicit_file: {
      if (!alt_subset) throw ConfigError("explicit alt scheme requires an alt matrix");
      if (alt_subset->labels != train.labels)
        throw DataError("alt samples are not label-aligned with the training split");
      Y = train;
      Y_alter = *alt_subset;
      break;
    }
  }

  KsvdParams init = cfg.init;
  init.seed = mix_seed(stream, 2);

  CoefficientMatrix codes;
  const std::vector<int>* code_labels = nullptr;
  switch (cfg.method) {
    case Method::esdl: {
      EsdlParams p = cfg.params;
      p.alpha = alpha;
      p.beta = beta;
      p.gamma = gamma;
      EsdlModel model = esdl_train(Y, Y_alter, cfg.atoms, p, init);
      out.dictionary = std::move(model.dictionary);
      codes = std::move(model.coefficients);
      code_labels = &Y.labels;
      auto& w = model.report.warnings;
      out.warnings.insert(out.warnings.end(), w.begin(), w.end());
      break;
    }
    case Method::sdl_l1: {
      AdmmParams p = cfg.admm;
      p.alpha = alpha;
      p.beta = beta;
      p.gamma = gamma;
      EsdlModel model = sdl_l1_train(Y, Y_alter, cfg.atoms, p, init);
      out.dictionary = std::move(model.dictionary);
      codes = std::move(model.coefficients);
      code_labels = &Y.labels;
      auto& w = model.report.warnings;
      out.warnings.insert(out.warnings.end(), w.begin(), w.end());
      break;
    }
    case Method::ksvd_baseline: {
      // Per-class K-SVD dictionary, training codes per the test coding mode.
      out.dictionary = init_dictionary_per_class(train, cfg.atoms, init);
      codes = code_samples(out.dictionary, train.data, cfg.coding, &out.warnings);
      code_labels = &train.labels;
      break;
    }
  }

  LabelMatrix H = build_label_matrix(*code_labels, train.class_count);
  out.classifier = train_classifier(codes, H, cfg.lambda);
  out.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

namespace {

struct RepeatOutcome {
  bool ok = false;
  double accuracy = 0, train_seconds = 0, test_seconds = 0;
  long test_count = 0;
  Eigen::MatrixXi confusion;
  std::vector<std::string> warnings;
  std::string error;
};

RepeatOutcome run_repeat(const ExperimentConfig& cfg, const LabeledMatrix& dataset,
                         const std::optional<LabeledMatrix>& alt,
                         const std::optional<ImageMeta>& meta, int rep) {
  RepeatOutcome out;
  SplitSpec spec = cfg.split;
  spec.seed = mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(rep));
  SplitResult split = train_test_split(dataset, spec, &out.warnings);

  std::optional<LabeledMatrix> alt_subset;
  if (alt) alt_subset = select_columns(*alt, split.train_indices);

  PipelineModel pipe =
      train_full_pipeline(cfg, cfg.params.alpha, cfg.params.beta, cfg.params.gamma,
                          split.train, alt_subset, meta,
                          mix_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(rep)));
  out.warnings.insert(out.warnings.end(), pipe.warnings.begin(), pipe.warnings.end());

  EvaluationResult eval = evaluate_classifier(pipe.classifier, pipe.dictionary,
                                              split.test, cfg.coding, &out.warnings);
  out.accuracy = eval.accuracy;
  out.confusion = eval.confusion;
  out.train_seconds = pipe.train_seconds;
  out.test_seconds = eval.test_seconds;
  out.test_count = static_cast<long>(split.test.count());
  out.ok = true;
  return out;
}

std::map<std::string, std::string> echo_config(const ExperimentConfig& cfg,
                                               const LabeledMatrix& dataset) {
  std::map<std::string, std::string> echo;
  echo["alpha"] = fmt6(cfg.params.alpha);
  echo["alt"] = alt_name(cfg);
  echo["atoms"] = std::to_string(cfg.atoms);
  echo["beta"] = fmt6(cfg.params.beta);
  echo["classes"] = std::to_string(dataset.class_count);
  echo["coding"] = coding_name(cfg.coding);
  if (!cfg.data_path.empty()) echo["data_path"] = cfg.data_path;
  echo["gamma"] = fmt6(cfg.params.gamma);
  echo["init_iterations"] = std::to_string(cfg.init.iterations);
  echo["init_sparsity"] = std::to_string(cfg.init.sparsity);
  echo["lambda"] = fmt6(cfg.lambda);
  echo["method"] = method_name(cfg.method);
  echo["normalize"] = cfg.normalize ? "true" : "false";
  echo["pinned_prefix"] = std::to_string(cfg.split.pinned_prefix);
  echo["repeats"] = std::to_string(cfg.repeats);
  echo["seed"] = std::to_string(cfg.seed);
  echo["train_per_class"] = fmt6(cfg.split.train_per_class);
  if (cfg.method == Method::sdl_l1) {
    echo["max_iters"] = std::to_string(cfg.admm.max_iters);
    echo["mu0"] = fmt6(cfg.admm.mu0);
    echo["mu_max"] = fmt6(cfg.admm.mu_max);
    echo["primal_tol"] = fmt6(cfg.admm.primal_tol);
    echo["rho"] = fmt6(cfg.admm.rho);
  } else {
    echo["max_iters"] = std::to_string(cfg.params.max_iters);
    echo["tol"] = fmt6(cfg.params.tol);
  }
  return echo;
}

} // namespace

BenchmarkReport run_experiment(const ExperimentConfig& cfg, const LabeledMatrix& dataset_in,
                               const std::optional<LabeledMatrix>& alt_in,
                               const std::optional<ImageMeta>& meta,
                               const std::vector<std::string>& class_names) {
  validate_labeled_matrix(dataset_in, "run_experiment: dataset");
  if (cfg.repeats < 1) throw ConfigError("run_experiment: repeats must be >= 1");
  if (cfg.atoms <= 0) throw ConfigError("run_experiment: atoms must be positive");
  if (cfg.atoms % dataset_in.class_count != 0)
    throw ConfigError("run_experiment: atoms=" + std::to_string(cfg.atoms) +
                      " not divisible by class count " +
                      std::to_string(dataset_in.class_count));
  if (alt_in) {
    if (alt_in->data.cols() != dataset_in.data.cols() || alt_in->labels != dataset_in.labels)
      throw DataError("run_experiment: alt samples not aligned with the dataset");
  }

  BenchmarkReport report;
  report.config_echo = echo_config(cfg, dataset_in);

  LabeledMatrix dataset =
      cfg.normalize ? normalize_columns(dataset_in, &report.warnings) : dataset_in;
  std::optional<LabeledMatrix> alt;
  if (alt_in) alt = cfg.normalize ? normalize_columns(*alt_in, &report.warnings) : *alt_in;

  const int workers = resolve_workers(cfg.workers);
  report.workers_used = workers;
  std::vector<RepeatOutcome> outcomes(static_cast<size_t>(cfg.repeats));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < cfg.repeats; i = next.fetch_add(1)) {
      try {
        outcomes[static_cast<size_t>(i)] = run_repeat(cfg, dataset, alt, meta, i);
      } catch (const std::exception& e) {
        outcomes[static_cast<size_t>(i)].error = e.what();
      }
    }
  };
  if (workers <= 1 || cfg.repeats == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int count = std::min(workers, cfg.repeats);
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const int C = dataset.class_count;
  report.confusion = Eigen::MatrixXi::Zero(C, C);
  int failed = 0;
  double per_sample_sum = 0.0;
  for (int i = 0; i < cfg.repeats; ++i) {
    const RepeatOutcome& o = outcomes[static_cast<size_t>(i)];
    if (!o.ok) {
      ++failed;
      report.warnings.push_back("repeat " + std::to_string(i) + " failed: " + o.error);
      continue;
    }
    report.per_repeat_accuracy.push_back(o.accuracy);
    report.per_repeat_train_seconds.push_back(o.train_seconds);
    report.per_repeat_test_seconds.push_back(o.test_seconds);
    per_sample_sum += o.test_count > 0 ? o.test_seconds / static_cast<double>(o.test_count) : 0.0;
    report.confusion += o.confusion;
    report.warnings.insert(report.warnings.end(), o.warnings.begin(), o.warnings.end());
  }
  if (failed * 2 > cfg.repeats)
    throw NumericalError("run_experiment: " + std::to_string(failed) + " of " +
                         std::to_string(cfg.repeats) + " repeats failed");

  const auto done = report.per_repeat_accuracy.size();
  if (done > 0) {
    report.mean_accuracy =
        std::accumulate(report.per_repeat_accuracy.begin(),
                        report.per_repeat_accuracy.end(), 0.0) /
        static_cast<double>(done);
    report.train_seconds_mean =
        std::accumulate(report.per_repeat_train_seconds.begin(),
                        report.per_repeat_train_seconds.end(), 0.0) /
        static_cast<double>(done);
    report.test_seconds_mean =
        std::accumulate(report.per_repeat_test_seconds.begin(),
                        report.per_repeat_test_seconds.end(), 0.0) /
        static_cast<double>(done);
    report.test_seconds_per_sample_mean = per_sample_sum / static_cast<double>(done);
  }

  if (!class_names.empty()) {
    report.class_names = class_names;
  } else {
    for (int c = 0; c < C; ++c) report.class_names.push_back(std::to_string(c));
  }
  return report;
}

BenchmarkReport run_experiment(const ExperimentConfig& cfg) {
  LoadResult loaded = load_matrix(cfg.data_path, cfg.labels_path, cfg.orientation);
  std::optional<ImageMeta> meta;
  if (!cfg.meta_path.empty()) meta = load_image_meta(cfg.meta_path);
  std::optional<LabeledMatrix> alt;
  if (cfg.alt == AltScheme::explicit_file) {
    if (cfg.alt_path.empty()) throw ConfigError("explicit alt scheme requires alt_path");
    alt = load_matrix(cfg.alt_path, cfg.alt_labels_path, cfg.orientation).data;
  }
  std::vector<std::string> names;
  for (int id : loaded.original_ids) names.push_back(std::to_string(id));
  return run_experiment(cfg, loaded.data, alt, meta, names);
}

GridResult grid_search(const ExperimentConfig& cfg, const LabeledMatrix& dataset_in,
                       const std::optional<LabeledMatrix>& alt_in,
                       const std::optional<ImageMeta>& meta, const ParamGrid& grid,
                       int folds) {
  if (folds < 2) throw ConfigError("grid_search: folds must be >= 2");
  if (grid.alphas.empty() || grid.betas.empty() || grid.gammas.empty())
    throw ConfigError("grid_search: empty parameter list");
  validate_labeled_matrix(dataset_in, "grid_search: dataset");

  // Ascending sweep order makes the strict-improvement rule break ties
  // toward the lexicographically smaller (alpha, beta, gamma) cell.
  ParamGrid sweep = grid;
  std::sort(sweep.alphas.begin(), sweep.alphas.end());
  std::sort(sweep.betas.begin(), sweep.betas.end());
  std::sort(sweep.gammas.begin(), sweep.gammas.end());

  std::vector<std::string> warnings;
  LabeledMatrix dataset =
      cfg.normalize ? normalize_columns(dataset_in, &warnings) : dataset_in;
  std::optional<LabeledMatrix> alt;
  if (alt_in) alt = cfg.normalize ? normalize_columns(*alt_in) : *alt_in;

  SplitSpec spec = cfg.split;
  spec.seed = mix_seed(cfg.seed, 1000); // the repeat-0 training split
  SplitResult split = train_test_split(dataset, spec, &warnings);
  const LabeledMatrix& train = split.train;

  // Stratified fold assignment over the training split only.
  std::vector<int> fold_of(static_cast<size_t>(train.count()), -1);
  for (int c = 0; c < train.class_count; ++c) {
    std::vector<Eigen::Index> positions;
    for (size_t i = 0; i < train.labels.size(); ++i)
      if (train.labels[i] == c) positions.push_back(static_cast<Eigen::Index>(i));
    if (static_cast<int>(positions.size()) < folds)
      throw ConfigError("grid_search: class " + std::to_string(c) + " has only " +
                        std::to_string(positions.size()) +
                        " training samples; use fewer folds");
    auto rng = seeded_rng(cfg.seed, 4000 + static_cast<std::uint64_t>(c));
    std::shuffle(positions.begin(), positions.end(), rng);
    for (size_t j = 0; j < positions.size(); ++j)
      fold_of[static_cast<size_t>(positions[j])] = static_cast<int>(j % static_cast<size_t>(folds));
  }

  // Per-fold train/validation column lists, class-grouped and sorted for
  // determinism; validation never touches split.test by construction.
  std::vector<std::vector<Eigen::Index>> fold_train_cols(static_cast<size_t>(folds));
  std::vector<std::vector<Eigen::Index>> fold_val_cols(static_cast<size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    for (int c = 0; c < train.class_count; ++c) {
      for (size_t i = 0; i < train.labels.size(); ++i) {
        if (train.labels[i] != c) continue;
        auto idx = static_cast<Eigen::Index>(i);
        if (fold_of[i] == f) fold_val_cols[static_cast<size_t>(f)].push_back(idx);
        else fold_train_cols[static_cast<size_t>(f)].push_back(idx);
      }
    }
    std::set<Eigen::Index> overlap(fold_train_cols[static_cast<size_t>(f)].begin(),
                                   fold_train_cols[static_cast<size_t>(f)].end());
    for (Eigen::Index v : fold_val_cols[static_cast<size_t>(f)])
      if (overlap.count(v))
        throw NumericalError("grid_search: fold train/validation overlap");
  }

  GridResult result;
  bool have_best = false;
  for (double alpha : sweep.alphas) {
    for (double beta : sweep.betas) {
      for (double gamma : sweep.gammas) {
        double acc_sum = 0.0;
        for (int f = 0; f < folds; ++f) {
          LabeledMatrix fold_train =
              select_columns(train, fold_train_cols[static_cast<size_t>(f)]);
          LabeledMatrix fold_val =
              select_columns(train, fold_val_cols[static_cast<size_t>(f)]);
          std::optional<LabeledMatrix> alt_subset;
          if (alt) {
            std::vector<Eigen::Index> dataset_cols;
            for (Eigen::Index pos : fold_train_cols[static_cast<size_t>(f)])
              dataset_cols.push_back(split.train_indices[static_cast<size_t>(pos)]);
            alt_subset = select_columns(*alt, dataset_cols);
          }
          PipelineModel pipe =
              train_full_pipeline(cfg, alpha, beta, gamma, fold_train, alt_subset, meta,
                                  mix_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(f)));
          EvaluationResult eval = evaluate_classifier(pipe.classifier, pipe.dictionary,
                                                      fold_val, cfg.coding);
          acc_sum += eval.accuracy;
        }
        GridCell cell{alpha, beta, gamma, acc_sum / folds};
        result.cells.push_back(cell);
        if (!have_best || cell.mean_accuracy > result.best.mean_accuracy) {
          result.best = cell;
          have_best = true;
        }
      }
    }
  }
  return result;
}

GridResult grid_search(const ExperimentConfig& cfg, const ParamGrid& grid, int folds) {
  LoadResult loaded = load_matrix(cfg.data_path, cfg.labels_path, cfg.orientation);
  std::optional<ImageMeta> meta;
  if (!cfg.meta_path.empty()) meta = load_image_meta(cfg.meta_path);
  std::optional<LabeledMatrix> alt;
  if (cfg.alt == AltScheme::explicit_file) {
    if (cfg.alt_path.empty()) throw ConfigError("explicit alt scheme requires alt_path");
    alt = load_matrix(cfg.alt_path, cfg.alt_labels_path, cfg.orientation).data;
  }
  return grid_search(cfg, loaded.data, alt, meta, grid, folds);
}

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("emit_report: cannot write " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw DataError("emit_report: write failed for " + path);
}

std::string json_number_array(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt6(values[i]);
  }
  out += "]";
  return out;
}

} // namespace

void emit_report(const BenchmarkReport& report, const std::string& path,
                 ReportFormat format) {
  std::string body;
  const auto& cm = report.confusion;
  if (format == ReportFormat::json) {
    body += "{\n";
    body += "  \"class_names\": [";
    for (size_t i = 0; i < report.class_names.size(); ++i)
      body += (i ? ", \"" : "\"") + json_escape(report.class_names[i]) + "\"";
    body += "],\n";
    body += "  \"config\": {\n";
    size_t k = 0;
    for (const auto& [key, value] : report.config_echo) {
      body += "    \"" + json_escape(key) + "\": \"" + json_escape(value) + "\"";
      body += (++k < report.config_echo.size()) ? ",\n" : "\n";
    }
    body += "  },\n";
    body += "  \"confusion\": [";
    for (Eigen::Index r = 0; r < cm.rows(); ++r) {
      body += r ? ", [" : "[";
      for (Eigen::Index c = 0; c < cm.cols(); ++c)
        body += (c ? ", " : "") + std::to_string(cm(r, c));
      body += "]";
    }
    body += "],\n";
    body += "  \"mean_accuracy\": " + fmt6(report.mean_accuracy) + ",\n";
    body += "  \"per_repeat_accuracy\": " + json_number_array(report.per_repeat_accuracy) + ",\n";
    body += "  \"per_repeat_test_seconds\": " + json_number_array(report.per_repeat_test_seconds) + ",\n";
    body += "  \"per_repeat_train_seconds\": " + json_number_array(report.per_repeat_train_seconds) + ",\n";
    body += "  \"repeats_completed\": " + std::to_string(report.per_repeat_accuracy.size()) + ",\n";
    body += "  \"test_seconds_mean\": " + fmt6(report.test_seconds_mean) + ",\n";
    body += "  \"test_seconds_per_sample_mean\": " + fmt6(report.test_seconds_per_sample_mean) + ",\n";
    body += "  \"test_seconds_workers\": " + std::to_string(report.workers_used) + ",\n";
    body += "  \"train_seconds_mean\": " + fmt6(report.train_seconds_mean) + ",\n";
    body += "  \"warnings\": [";
    for (size_t i = 0; i < report.warnings.size(); ++i)
      body += (i ? ", \"" : "\"") + json_escape(report.warnings[i]) + "\"";
    body += "]\n";
    body += "}\n";
  } else {
    body += "key,value\n";
    for (const auto& [key, value] : report.config_echo)
      body += "config_" + key + "," + csv_escape(value) + "\n";
    body += "mean_accuracy," + fmt6(report.mean_accuracy) + "\n";
    for (size_t i = 0; i < report.per_repeat_accuracy.size(); ++i)
      body += "per_repeat_accuracy_" + std::to_string(i) + "," +
              fmt6(report.per_repeat_accuracy[i]) + "\n";
    body += "repeats_completed," + std::to_string(report.per_repeat_accuracy.size()) + "\n";
    for (size_t i = 0; i < report.per_repeat_test_seconds.size(); ++i)
      body += "per_repeat_test_seconds_" + std::to_string(i) + "," +
              fmt6(report.per_repeat_test_seconds[i]) + "\n";
    for (size_t i = 0; i < report.per_repeat_train_seconds.size(); ++i)
      body += "per_repeat_train_seconds_" + std::to_string(i) + "," +
              fmt6(report.per_repeat_train_seconds[i]) + "\n";
    body += "test_seconds_mean," + fmt6(report.test_seconds_mean) + "\n";
    body += "test_seconds_per_sample_mean," + fmt6(report.test_seconds_per_sample_mean) + "\n";
    body += "test_seconds_workers," + std::to_string(report.workers_used) + "\n";
    body += "train_seconds_mean," + fmt6(report.train_seconds_mean) + "\n";
    body += "warning_count," + std::to_string(report.warnings.size()) + "\n";
    for (size_t i = 0; i < report.warnings.size(); ++i)
      body += "warning_" + std::to_string(i) + "," + csv_escape(report.warnings[i]) + "\n";
    body += "\n";
    body += "confusion";
    for (const auto& name : report.class_names) body += "," + csv_escape(name);
    body += "\n";
    for (Eigen::Index r = 0; r < cm.rows(); ++r) {
      body += csv_escape(report.class_names[static_cast<size_t>(r)]);
      for (Eigen::Index c = 0; c < cm.cols(); ++c) body += "," + std::to_string(cm(r, c));
      body += "\n";
    }
  }
  write_file(path, body);
}

void emit_grid_report(const GridResult& result, const std::string& path,
                      ReportFormat format) {
  std::string body;
  if (format == ReportFormat::json) {
    body += "{\n";
    body += "  \"best\": {\"alpha\": " + fmt6(result.best.alpha) +
            ", \"beta\": " + fmt6(result.best.beta) +
            ", \"gamma\": " + fmt6(result.best.gamma) +
            ", \"mean_accuracy\": " + fmt6(result.best.mean_accuracy) + "},\n";
    body += "  \"cells\": [\n";
    for (size_t i = 0; i < result.cells.size(); ++i) {
      const GridCell& c = result.cells[i];
      body += "    {\"alpha\": " + fmt6(c.alpha) + ", \"beta\": " + fmt6(c.beta) +
              ", \"gamma\": " + fmt6(c.gamma) +
              ", \"mean_accuracy\": " + fmt6(c.mean_accuracy) + "}";
      body += (i + 1 < result.cells.size()) ? ",\n" : "\n";
    }
    body += "  ]\n}\n";
  } else {
    body += "alpha,beta,gamma,mean_accuracy\n";
    for (const GridCell& c : result.cells)
      body += fmt6(c.alpha) + "," + fmt6(c.beta) + "," + fmt6(c.gamma) + "," +
              fmt6(c.mean_accuracy) + "\n";
    body += "\nbest," + fmt6(result.best.alpha) + "," + fmt6(result.best.beta) + "," +
            fmt6(result.best.gamma) + "," + fmt6(result.best.mean_accuracy) + "\n";
  }
  write_file(path, body);
}

LabeledMatrix make_synthetic(int classes, int dim, int subspace_dim, int per_class,
                             double noise, std::uint64_t seed) {
  if (classes < 1) throw ConfigError("make_synthetic: classes must be >= 1");
  if (dim < 1) throw ConfigError("make_synthetic: dim must be >= 1");
  if (subspace_dim < 1 || subspace_dim > dim)
    throw ConfigError("make_synthetic: subspace_dim must be in 1..dim");
  if (per_class < 2) throw ConfigError("make_synthetic: per_class must be >= 2");
  if (noise < 0) throw ConfigError("make_synthetic: negative noise");

  LabeledMatrix out;
  out.class_count = classes;
  out.data.resize(dim, static_cast<Eigen::Index>(classes) * per_class);
  out.labels.reserve(static_cast<size_t>(classes) * static_cast<size_t>(per_class));

  for (int c = 0; c < classes; ++c) {
    auto rng = seeded_rng(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix raw(dim, subspace_dim);
    for (Eigen::Index col = 0; col < raw.cols(); ++col)
      for (Eigen::Index row = 0; row < raw.rows(); ++row) raw(row, col) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(raw);
    Matrix basis = qr.householderQ() * Matrix::Identity(dim, subspace_dim);

    // Nonnegative (half-normal) coefficients: each class occupies a cone
    // rather than an antipodally symmetric subspace. Sign-symmetric classes
    // are unclassifiable by a linear map over odd coding functions, and the
    // nonnegative-feature data this stands in for has no such symmetry.
    Matrix coefs(subspace_dim, per_class);
    for (Eigen::Index col = 0; col < coefs.cols(); ++col)
      for (Eigen::Index row = 0; row < coefs.rows(); ++row)
        coefs(row, col) = std::abs(gauss(rng));

    Matrix block = basis * coefs;
    if (noise > 0) {
      for (Eigen::Index col = 0; col < block.cols(); ++col)
        for (Eigen::Index row = 0; row < block.rows(); ++row)
          block(row, col) += noise * gauss(rng);
    }
    out.data.middleCols(static_cast<Eigen::Index>(c) * per_class, per_class) = block;
    for (int i = 0; i < per_class; ++i) out.labels.push_back(c);
  }
  return out;
}

} // namespace structdict
