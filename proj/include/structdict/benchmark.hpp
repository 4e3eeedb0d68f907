#ifndef STRUCTDICT_BENCHMARK_HPP
#define STRUCTDICT_BENCHMARK_HPP

// Experiment harness: repeated random splits, alternative-sample
// construction, training, evaluation, cross-validated parameter selection,
// and deterministic report emission.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "structdict/classifier.hpp"
#include "structdict/data_pipeline.hpp"
#include "structdict/esdl.hpp"
#include "structdict/sdl_l1.hpp"

namespace structdict {

enum class Method { esdl, sdl_l1, ksvd_baseline };
enum class AltScheme { mirror, half_split, explicit_file };
enum class ReportFormat { json, csv };

struct ExperimentConfig {
  std::string data_path;
  std::string labels_path;
  SampleOrientation orientation = SampleOrientation::columns;
  std::string meta_path;       // image sidecar, required by the mirror scheme
  std::string alt_path;        // explicit alternative samples, column-aligned
  std::string alt_labels_path; // labels for a CSV alt file

  Method method = Method::esdl;
  int atoms = 0; // dictionary size K, divisible by the class count
  EsdlParams params;
  AdmmParams admm;
  KsvdParams init; // per-class initializer settings; seed derived per repeat
  double lambda = 1e-3;

  SplitSpec split;
  AltScheme alt = AltScheme::half_split;
  CodingSpec coding;
  int repeats = 1;
  std::uint64_t seed = 0;
  bool normalize = true;
  int workers = 0; // 0: use STRUCTDICT_WORKERS, else 1
};

struct BenchmarkReport {
  std::vector<double> per_repeat_accuracy;
  double mean_accuracy = 0.0;
  std::vector<double> per_repeat_train_seconds;
  std::vector<double> per_repeat_test_seconds;
  double train_seconds_mean = 0.0;
  double test_seconds_mean = 0.0;
  double test_seconds_per_sample_mean = 0.0;
  int workers_used = 1; // attached to the timing section of emitted reports
  Eigen::MatrixXi confusion; // summed over repeats
  std::vector<std::string> class_names;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> config_echo;
};

struct ParamGrid {
  std::vector<double> alphas{1e-4, 1e-3, 0.01, 0.1};
  std::vector<double> betas{1e-4, 1e-3, 0.01, 0.1};
  std::vector<double> gammas{1e-4, 1e-3, 0.01, 0.1};
};

struct GridCell {
  double alpha = 0, beta = 0, gamma = 0;
  double mean_accuracy = 0;
};

struct GridResult {
  GridCell best;
  std::vector<GridCell> cells; // lexicographic (alpha, beta, gamma) order
};

struct PipelineModel {
  Dictionary dictionary;
  LinearClassifier classifier;
  double train_seconds = 0.0;
  std::vector<std::string> warnings;
};

// Alternative-sample construction, method training, and classifier fit on a
// given training matrix. alpha/beta/gamma override the configured values
// (grid-search cells); `alt_subset`, when present, must be column-aligned
// with `train`. `stream` seeds the half-split shuffle and the initializer.
PipelineModel train_full_pipeline(const ExperimentConfig& cfg, double alpha, double beta,
                                  double gamma, const LabeledMatrix& train,
                                  const std::optional<LabeledMatrix>& alt_subset,
                                  const std::optional<ImageMeta>& meta,
                                  std::uint64_t stream);

// Full protocol: per repeat, split per the SplitSpec, build the alternative
// samples, train the configured method, fit the classifier, evaluate.
// A failing repeat is recorded as a warning; more than half failing aborts.
BenchmarkReport run_experiment(const ExperimentConfig& cfg);
BenchmarkReport run_experiment(const ExperimentConfig& cfg, const LabeledMatrix& dataset,
                               const std::optional<LabeledMatrix>& alt,
                               const std::optional<ImageMeta>& meta,
                               const std::vector<std::string>& class_names);

// Stratified k-fold cross-validation over the training split only. Returns
// the argmax-mean-accuracy cell, ties broken toward the smaller
// (alpha, beta, gamma) lexicographically.
GridResult grid_search(const ExperimentConfig& cfg, const ParamGrid& grid, int folds);
GridResult grid_search(const ExperimentConfig& cfg, const LabeledMatrix& dataset,
                       const std::optional<LabeledMatrix>& alt,
                       const std::optional<ImageMeta>& meta, const ParamGrid& grid,
                       int folds);

// Deterministic report writers: sorted keys, 6-significant-digit floats,
// byte-identical output for identical reports.
void emit_report(const BenchmarkReport& report, const std::string& path,
                 ReportFormat format);
void emit_grid_report(const GridResult& result, const std::string& path,
                      ReportFormat format);

// Per class, draws a seeded orthonormal dim x subspace_dim basis, samples
// per_class points as basis * standard-normal coefficients, and adds
// isotropic noise.
LabeledMatrix make_synthetic(int classes, int dim, int subspace_dim, int per_class,
                             double noise, std::uint64_t seed);

} // namespace structdict

#endif
