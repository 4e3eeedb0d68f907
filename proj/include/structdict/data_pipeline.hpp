#ifndef STRUCTDICT_DATA_PIPELINE_HPP
#define STRUCTDICT_DATA_PIPELINE_HPP

// Dataset ingestion and preprocessing: text/binary loaders with label
// remapping, the two alternative-training-sample construction schemes
// (image mirroring and half splits), per-class train/test splits, and
// column normalization.
//
// File formats:
//  - text: CSV data (one sample per column by default, per row with the
//    orientation flag) plus a labels file with one integer per line;
//  - binary: magic "SDLM", three little-endian uint64 (rows, cols,
//    label count), rows*cols little-endian IEEE-754 doubles in
//    column-major order, then label-count little-endian int32 labels;
//  - image metadata sidecar: text lines "width W" / "height H".

#include <string>
#include <vector>

#include "structdict/types.hpp"

namespace structdict {

// Pixel geometry of vectorized images. Samples are vectorized in fixed
// column-major pixel order: pixel (row r, col c) sits at index c*height + r.
struct ImageMeta {
  int width = 0;
  int height = 0;
};

struct SplitSpec {
  // >= 1: per-class training sample count; in (0, 1): per-class fraction.
  double train_per_class = 0;
  std::uint64_t seed = 0;
  int pinned_prefix = 0; // leading samples per class always placed in train
};

enum class SampleOrientation { columns, rows };

struct LoadResult {
  LabeledMatrix data;
  // original_ids[c] is the label id in the source file remapped to class c;
  // remapping follows sorted order of the distinct original ids.
  std::vector<int> original_ids;
};

struct SplitResult {
  LabeledMatrix train;
  LabeledMatrix test;
  // Column indices into the input matrix, class-ordered, matching the
  // column order of train/test.
  std::vector<Eigen::Index> train_indices;
  std::vector<Eigen::Index> test_indices;
};

// Loads CSV data + labels file, or the binary format when the file carries
// the SDLM magic (labels_path is ignored then). Labels are remapped to
// 0..C-1.
LoadResult load_matrix(const std::string& path, const std::string& labels_path,
                       SampleOrientation orientation = SampleOrientation::columns);

void save_csv(const std::string& data_path, const std::string& labels_path,
              const LabeledMatrix& m);
void save_binary(const std::string& path, const LabeledMatrix& m);

ImageMeta load_image_meta(const std::string& path);
void save_image_meta(const std::string& path, const ImageMeta& meta);

// Reflects every sample left-right as a width x height image; labels copied.
LabeledMatrix mirror_samples(const LabeledMatrix& Y, const ImageMeta& meta);

// Splits each class into two equal halves after a seeded shuffle; an odd
// class drops one sample with a warning. The halves come back column-aligned
// by class, so both label sequences are identical.
std::pair<LabeledMatrix, LabeledMatrix> half_split_alternative(
    const LabeledMatrix& Y, std::uint64_t seed,
    std::vector<std::string>* warnings = nullptr);

// Per class: the first pinned_prefix samples always go to train, the
// remaining train slots are filled by seeded sampling without replacement,
// and the rest go to test. Output columns are class-contiguous.
SplitResult train_test_split(const LabeledMatrix& Y, const SplitSpec& spec,
                             std::vector<std::string>* warnings = nullptr);

// Unit-norm columns; zero columns stay zero with a warning.
LabeledMatrix normalize_columns(const LabeledMatrix& Y,
                                std::vector<std::string>* warnings = nullptr);

// Copy of the given columns (in the given order), labels carried along.
LabeledMatrix select_columns(const LabeledMatrix& Y,
                             const std::vector<Eigen::Index>& cols);

} // namespace structdict

#endif
