#include "structdict/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "structdict/rng.hpp"

namespace structdict {

namespace {

constexpr char kBinaryMagic[4] = {'S', 'D', 'L', 'M'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
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

void write_i32(std::ostream& out, std::int32_t v) {
  auto u = static_cast<std::uint32_t>(v);
  unsigned char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::int32_t read_i32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return static_cast<std::int32_t>(u);
}

bool has_binary_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0;
}

Matrix parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    size_t col_no = 0;
    while (std::getline(ss, cell, ',')) {
      ++col_no;
      const char* begin = cell.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      // Whole cell must parse (leading/trailing blanks tolerated).
      while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
      if (end == begin || (end && *end != '\0'))
        throw DataError(path + ": non-numeric cell at line " + std::to_string(line_no) +
                        ", column " + std::to_string(col_no));
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path + ": ragged row at line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw DataError(path + ": empty data file");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

std::vector<int> parse_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const char* begin = line.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0'))
      throw DataError(path + ": non-integer label at line " + std::to_string(line_no));
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw DataError(path + ": empty labels file");
  return labels;
}

LoadResult remap_labels(Matrix data, std::vector<int> raw_labels) {
  std::map<int, int> table; // sorted original id -> class id
  for (int lab : raw_labels) table.emplace(lab, 0);
  LoadResult result;
  result.original_ids.reserve(table.size());
  int next = 0;
  for (auto& [orig, mapped] : table) {
    mapped = next++;
    result.original_ids.push_back(orig);
  }
  result.data.data = std::move(data);
  result.data.class_count = next;
  result.data.labels.reserve(raw_labels.size());
  for (int lab : raw_labels) result.data.labels.push_back(table.at(lab));
  validate_labeled_matrix(result.data, "load_matrix");
  return result;
}

std::mt19937_64 class_rng(std::uint64_t seed, int class_id) {
  return seeded_rng(seed, static_cast<std::uint64_t>(class_id));
}

std::vector<std::vector<Eigen::Index>> columns_by_class(const LabeledMatrix& Y) {
  std::vector<std::vector<Eigen::Index>> by_class(static_cast<size_t>(Y.class_count));
  for (size_t i = 0; i < Y.labels.size(); ++i)
    by_class[static_cast<size_t>(Y.labels[i])].push_back(static_cast<Eigen::Index>(i));
  return by_class;
}

} // namespace

LabeledMatrix select_columns(const LabeledMatrix& Y,
                             const std::vector<Eigen::Index>& cols) {
  LabeledMatrix out;
  out.class_count = Y.class_count;
  out.data.resize(Y.data.rows(), static_cast<Eigen::Index>(cols.size()));
  out.labels.reserve(cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= Y.data.cols())
      throw DimensionError("select_columns: index out of range");
    out.data.col(static_cast<Eigen::Index>(j)) = Y.data.col(cols[j]);
    out.labels.push_back(Y.labels[static_cast<size_t>(cols[j])]);
  }
  return out;
}

LoadResult load_matrix(const std::string& path, const std::string& labels_path,
                       SampleOrientation orientation) {
  if (has_binary_magic(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file: " + path);
    in.seekg(4);
    std::uint64_t rows = read_u64(in), cols = read_u64(in), label_count = read_u64(in);
    if (!in) throw DataError(path + ": truncated binary header");
    if (label_count != cols)
      throw DataError(path + ": label count " + std::to_string(label_count) +
                      " does not match sample count " + std::to_string(cols));
    Matrix data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t c = 0; c < cols; ++c)
      for (std::uint64_t r = 0; r < rows; ++r)
        data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_f64(in);
    std::vector<int> labels(label_count);
    for (auto& lab : labels) lab = read_i32(in);
    if (!in) throw DataError(path + ": truncated binary payload");
    return remap_labels(std::move(data), std::move(labels));
  }

  Matrix data = parse_csv(path);
  if (orientation == SampleOrientation::rows) data.transposeInPlace();
  std::vector<int> labels = parse_labels(labels_path);
  if (static_cast<Eigen::Index>(labels.size()) != data.cols())
    throw DataError(path + ": " + std::to_string(data.cols()) + " samples but " +
                    std::to_string(labels.size()) + " labels in " + labels_path);
  return remap_labels(std::move(data), std::move(labels));
}

void save_csv(const std::string& data_path, const std::string& labels_path,
              const LabeledMatrix& m) {
  std::ofstream out(data_path);
  if (!out) throw DataError("cannot write data file: " + data_path);
  char buf[64];
  for (Eigen::Index r = 0; r < m.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.data.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.data(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  std::ofstream lout(labels_path);
  if (!lout) throw DataError("cannot write labels file: " + labels_path);
  for (int lab : m.labels) lout << lab << '\n';
}

void save_binary(const std::string& path, const LabeledMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write data file: " + path);
  out.write(kBinaryMagic, 4);
  write_u64(out, static_cast<std::uint64_t>(m.data.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.data.cols()));
  write_u64(out, static_cast<std::uint64_t>(m.labels.size()));
  for (Eigen::Index c = 0; c < m.data.cols(); ++c)
    for (Eigen::Index r = 0; r < m.data.rows(); ++r) write_f64(out, m.data(r, c));
  for (int lab : m.labels) write_i32(out, lab);
}

ImageMeta load_image_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open image metadata file: " + path);
  ImageMeta meta;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == '=' || ch == ':') ch = ' ';
    std::stringstream ss(line);
    std::string key;
    int value = 0;
    if (!(ss >> key >> value)) continue;
    if (key == "width") meta.width = value;
    else if (key == "height") meta.height = value;
  }
  if (meta.width <= 0 || meta.height <= 0)
    throw DataError(path + ": missing width/height");
  return meta;
}

void save_image_meta(const std::string& path, const ImageMeta& meta) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write image metadata file: " + path);
  out << "width " << meta.width << '\n' << "height " << meta.height << '\n';
}

LabeledMatrix mirror_samples(const LabeledMatrix& Y, const ImageMeta& meta) {
  if (meta.width <= 0 || meta.height <= 0)
    throw ConfigError("mirror_samples: invalid image dimensions");
  const Eigen::Index n = Y.data.rows();
  if (static_cast<Eigen::Index>(meta.width) * meta.height != n)
    throw DimensionError("mirror_samples: width*height = " +
                         std::to_string(meta.width * meta.height) +
                         " does not match feature dimension " + std::to_string(n));
  LabeledMatrix out = Y;
  for (Eigen::Index i = 0; i < Y.data.cols(); ++i) {
    for (int c = 0; c < meta.width; ++c) {
      int mc = meta.width - 1 - c;
      for (int r = 0; r < meta.height; ++r)
        out.data(static_cast<Eigen::Index>(c) * meta.height + r, i) =
            Y.data(static_cast<Eigen::Index>(mc) * meta.height + r, i);
    }
  }
  return out;
}

std::pair<LabeledMatrix, LabeledMatrix> half_split_alternative(
    const LabeledMatrix& Y, std::uint64_t seed, std::vector<std::string>* warnings) {
  validate_labeled_matrix(Y, "half_split_alternative");
  auto by_class = columns_by_class(Y);
  std::vector<Eigen::Index> first, second;
  for (int c = 0; c < Y.class_count; ++c) {
    auto& cols = by_class[static_cast<size_t>(c)];
    if (cols.size() < 2)
      throw DataError("half_split_alternative: class " + std::to_string(c) +
                      " has fewer than 2 samples");
    auto rng = class_rng(seed, c);
    std::shuffle(cols.begin(), cols.end(), rng);
    if (cols.size() % 2 != 0) {
      if (warnings)
        warnings->push_back("half_split_alternative: class " + std::to_string(c) +
                            " has odd size " + std::to_string(cols.size()) +
                            ", dropping one sample");
      cols.pop_back();
    }
    size_t half = cols.size() / 2;
    first.insert(first.end(), cols.begin(), cols.begin() + static_cast<long>(half));
    second.insert(second.end(), cols.begin() + static_cast<long>(half), cols.end());
  }
  return {select_columns(Y, first), select_columns(Y, second)};
}

SplitResult train_test_split(const LabeledMatrix& Y, const SplitSpec& spec,
                             std::vector<std::string>* warnings) {
  validate_labeled_matrix(Y, "train_test_split");
  if (spec.pinned_prefix < 0) throw ConfigError("train_test_split: negative pinned_prefix");
  if (!(spec.train_per_class > 0))
    throw ConfigError("train_test_split: train_per_class must be positive");

  auto by_class = columns_by_class(Y);
  SplitResult result;
  for (int c = 0; c < Y.class_count; ++c) {
    const auto& cols = by_class[static_cast<size_t>(c)];
    const auto size = static_cast<long>(cols.size());
    long want = spec.train_per_class < 1.0
                    ? static_cast<long>(std::llround(spec.train_per_class * size))
                    : static_cast<long>(spec.train_per_class);
    want = std::max<long>(want, 0);
    if (want > size)
      throw ConfigError("train_test_split: class " + std::to_string(c) + " has " +
                        std::to_string(size) + " samples, fewer than requested " +
                        std::to_string(want));
    if (spec.pinned_prefix > want)
      throw ConfigError("train_test_split: pinned_prefix exceeds train_per_class");
    if (want == size && warnings)
      warnings->push_back("train_test_split: class " + std::to_string(c) +
                          " has an empty test set");

    std::vector<Eigen::Index> pool(cols.begin() + spec.pinned_prefix, cols.end());
    auto rng = class_rng(spec.seed, c);
    std::shuffle(pool.begin(), pool.end(), rng);

    std::vector<Eigen::Index> train(cols.begin(), cols.begin() + spec.pinned_prefix);
    train.insert(train.end(), pool.begin(), pool.begin() + (want - spec.pinned_prefix));
    std::vector<Eigen::Index> test(pool.begin() + (want - spec.pinned_prefix), pool.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    result.train_indices.insert(result.train_indices.end(), train.begin(), train.end());
    result.test_indices.insert(result.test_indices.end(), test.begin(), test.end());
  }
  result.train = select_columns(Y, result.train_indices);
  result.test = select_columns(Y, result.test_indices);
  return result;
}

LabeledMatrix normalize_columns(const LabeledMatrix& Y,
                                std::vector<std::string>* warnings) {
  LabeledMatrix out = Y;
  for (Eigen::Index i = 0; i < out.data.cols(); ++i) {
    double nrm = out.data.col(i).norm();
    if (nrm == 0.0) {
      if (warnings)
        warnings->push_back("normalize_columns: zero column " + std::to_string(i) +
                            " left unchanged");
    } else {
      out.data.col(i) /= nrm;
    }
  }
  return out;
}

} // namespace structdict
