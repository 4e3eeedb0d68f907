#include "structdict/model_io.hpp"

#include <cstring>
#include <fstream>

namespace structdict {

namespace {

constexpr char kModelMagic[4] = {'S', 'D', 'M', 'O'};
constexpr std::uint32_t kModelVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(out, bits);
}

double read_f64(std::istream& in) {
  std::uint64_t bits = read_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) write_f64(out, m(r, c));
}

Matrix read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = read_f64(in);
  return m;
}

} // namespace

void save_model(const std::string& path, const SavedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_model: cannot write " + path);
  out.write(kModelMagic, 4);
  write_u32(out, kModelVersion);
  write_u64(out, static_cast<std::uint64_t>(model.dictionary.atoms.rows()));
  write_u64(out, static_cast<std::uint64_t>(model.dictionary.atoms.cols()));
  write_u64(out, static_cast<std::uint64_t>(model.classifier.weights.rows()));
  write_f64(out, model.classifier.lambda);
  write_matrix(out, model.dictionary.atoms);
  for (int lab : model.dictionary.atom_labels)
    write_u32(out, static_cast<std::uint32_t>(lab));
  write_matrix(out, model.classifier.weights);
  for (int id : model.original_ids)
    write_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(id)));
  if (!out) throw DataError("save_model: write failed for " + path);
}

SavedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_model: cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0)
    throw DataError("load_model: " + path + " is not a model file");
  std::uint32_t version = read_u32(in);
  if (version != kModelVersion)
    throw DataError("load_model: unsupported model version " + std::to_string(version));
  auto n = static_cast<Eigen::Index>(read_u64(in));
  auto K = static_cast<Eigen::Index>(read_u64(in));
  auto C = static_cast<Eigen::Index>(read_u64(in));
  SavedModel model;
  model.classifier.lambda = read_f64(in);
  model.dictionary.atoms = read_matrix(in, n, K);
  model.dictionary.atom_labels.resize(static_cast<size_t>(K));
  for (auto& lab : model.dictionary.atom_labels)
    lab = static_cast<int>(read_u32(in));
  model.classifier.weights = read_matrix(in, C, K);
  model.original_ids.resize(static_cast<size_t>(C));
  for (auto& id : model.original_ids)
    id = static_cast<int>(static_cast<std::int64_t>(read_u64(in)));
  if (!in) throw DataError("load_model: truncated model file " + path);
  return model;
}

} // namespace structdict
