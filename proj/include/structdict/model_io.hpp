#ifndef STRUCTDICT_MODEL_IO_HPP
#define STRUCTDICT_MODEL_IO_HPP

// Binary persistence for a trained dictionary + classifier pair, used by the
// CLI train/evaluate subcommands. Layout: magic "SDMO", a version u32, then
// little-endian u64 dims (n, K, C), the classifier lambda, the atom matrix,
// atom labels, classifier weights, and the original class id table.

#include <string>

#include "structdict/classifier.hpp"
#include "structdict/types.hpp"

namespace structdict {

struct SavedModel {
  Dictionary dictionary;
  LinearClassifier classifier;
  std::vector<int> original_ids; // source-file label id per class
};

void save_model(const std::string& path, const SavedModel& model);
SavedModel load_model(const std::string& path);

} // namespace structdict

#endif
