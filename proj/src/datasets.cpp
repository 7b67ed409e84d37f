#include "poswise/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>

#include "poswise/errors.hpp"
#include "poswise/rng.hpp"

namespace poswise {
namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
constexpr std::size_t kCifarPixels = 3072;
constexpr std::size_t kCifarRecord = kCifarPixels + 1;
constexpr std::size_t kCifarClasses = 10;
constexpr std::size_t kMnistClasses = 10;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open " + path.string(), 0);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class ByteReader {
 public:
  ByteReader(const std::vector<std::uint8_t>& bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  std::uint32_t read_be32(const char* field) {
    require(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    require(n, field);
    std::span<const std::uint8_t> out(bytes_.data() + pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  const std::string& source() const noexcept { return source_; }

 private:
  void require(std::size_t n, const char* field) const {
    if (bytes_.size() - pos_ < n) {
      throw DataFormatError(source_ + ": truncated while reading " + field + " (need " +
                                std::to_string(n) + " bytes, " +
                                std::to_string(bytes_.size() - pos_) + " left)",
                            pos_);
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

void expect_magic(ByteReader& reader, std::uint32_t expected) {
  const std::uint32_t magic = reader.read_be32("magic number");
  if (magic != expected) {
    throw DataFormatError(reader.source() + ": bad magic number " + std::to_string(magic) +
                              ", expected " + std::to_string(expected),
                          0);
  }
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

Dataset select_columns(const Dataset& data, std::span<const std::size_t> cols) {
  Dataset out;
  out.name = data.name;
  out.class_count = data.class_count;
  out.inputs = Matrix(data.inputs.rows(), cols.size());
  out.targets = Matrix(data.targets.rows(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < data.inputs.rows(); ++r) out.inputs(r, c) = data.inputs(r, cols[c]);
    for (std::size_t r = 0; r < data.targets.rows(); ++r) out.targets(r, c) = data.targets(r, cols[c]);
    if (!data.labels.empty()) out.labels.push_back(data.labels[cols[c]]);
  }
  return out;
}

}  // namespace

Matrix one_hot(std::span<const int> labels, std::size_t k) {
  if (k == 0 || labels.empty()) throw ShapeError("one_hot: need k >= 1 and at least one label");
  Matrix out(k, labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
      throw std::out_of_range("one_hot: label " + std::to_string(labels[i]) + " at index " +
                              std::to_string(i) + " outside [0, " + std::to_string(k) + ")");
    }
    out(static_cast<std::size_t>(labels[i]), i) = 1.0;
  }
  return out;
}

Dataset load_mnist_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path) {
  const auto image_bytes = read_file(images_path);
  ByteReader images(image_bytes, images_path.filename().string());
  expect_magic(images, kIdxImageMagic);
  const std::uint32_t n = images.read_be32("image count");
  const std::uint32_t rows = images.read_be32("row count");
  const std::uint32_t cols = images.read_be32("column count");
  if (n == 0 || rows == 0 || cols == 0) {
    throw DataFormatError(images.source() + ": zero-sized image header", 4);
  }
  const std::size_t features = static_cast<std::size_t>(rows) * cols;
  const auto pixels = images.take(static_cast<std::size_t>(n) * features, "pixel data");
  if (images.remaining() != 0) {
    throw DataFormatError(images.source() + ": " + std::to_string(images.remaining()) +
                              " trailing bytes after " + std::to_string(n) + " images",
                          images.position());
  }

  const auto label_bytes = read_file(labels_path);
  ByteReader labels_reader(label_bytes, labels_path.filename().string());
  expect_magic(labels_reader, kIdxLabelMagic);
  const std::uint32_t label_count = labels_reader.read_be32("label count");
  if (label_count != n) {
    throw DataFormatError(labels_reader.source() + ": " + std::to_string(label_count) +
                              " labels for " + std::to_string(n) + " images",
                          4);
  }
  const std::size_t label_start = labels_reader.position();
  const auto raw_labels = labels_reader.take(n, "labels");
  if (labels_reader.remaining() != 0) {
    throw DataFormatError(labels_reader.source() + ": trailing bytes after labels",
                          labels_reader.position());
  }

  Dataset data;
  data.name = "mnist";
  data.class_count = kMnistClasses;
  data.inputs = Matrix(features, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      data.inputs(f, i) = static_cast<double>(pixels[i * features + f]) / 255.0;
    }
  }
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw_labels[i] >= kMnistClasses) {
      throw DataFormatError(labels_reader.source() + ": label " + std::to_string(raw_labels[i]) +
                                " out of range",
                            label_start + i);
    }
    data.labels[i] = raw_labels[i];
  }
  data.targets = one_hot(data.labels, kMnistClasses);
  return data;
}

Dataset load_cifar10_bin(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw DataFormatError("no CIFAR-10 batch files given", 0);
  std::vector<std::uint8_t> all_pixels;
  std::vector<int> labels;
  for (const auto& path : paths) {
    const auto bytes = read_file(path);
    if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
      throw DataFormatError(path.filename().string() + ": length " + std::to_string(bytes.size()) +
                                " is not a positive multiple of " + std::to_string(kCifarRecord),
                            bytes.size() - bytes.size() % kCifarRecord);
    }
    for (std::size_t off = 0; off < bytes.size(); off += kCifarRecord) {
      if (bytes[off] >= kCifarClasses) {
        throw DataFormatError(path.filename().string() + ": label " + std::to_string(bytes[off]) +
                                  " out of range",
                              off);
      }
      labels.push_back(bytes[off]);
      all_pixels.insert(all_pixels.end(), bytes.begin() + static_cast<std::ptrdiff_t>(off + 1),
                        bytes.begin() + static_cast<std::ptrdiff_t>(off + kCifarRecord));
    }
  }
  Dataset data;
  data.name = "cifar10";
  data.class_count = kCifarClasses;
  data.inputs = Matrix(kCifarPixels, labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < kCifarPixels; ++f) {
      data.inputs(f, i) = static_cast<double>(all_pixels[i * kCifarPixels + f]) / 255.0;
    }
  }
  data.labels = std::move(labels);
  data.targets = one_hot(data.labels, kCifarClasses);
  return data;
}

void write_mnist_idx(const Dataset& data, const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path) {
  const std::size_t features = data.features();
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(features))));
  if (side * side != features) {
    throw ShapeError("write_mnist_idx: " + std::to_string(features) + " features is not a square image");
  }
  if (data.labels.size() != data.size()) throw ShapeError("write_mnist_idx: labels missing");
  std::ofstream images(images_path, std::ios::binary);
  std::ofstream labels(labels_path, std::ios::binary);
  if (!images || !labels) throw std::runtime_error("write_mnist_idx: cannot open output files");
  put_be32(images, kIdxImageMagic);
  put_be32(images, static_cast<std::uint32_t>(data.size()));
  put_be32(images, static_cast<std::uint32_t>(side));
  put_be32(images, static_cast<std::uint32_t>(side));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      const double scaled = data.inputs(f, i) * 255.0;
      const double byte = std::round(scaled);
      if (byte < 0.0 || byte > 255.0 || std::abs(scaled - byte) > 1e-9) {
        throw std::invalid_argument("write_mnist_idx: value " + std::to_string(data.inputs(f, i)) +
                                    " is not byte-representable");
      }
      images.put(static_cast<char>(static_cast<std::uint8_t>(byte)));
    }
  }
  put_be32(labels, kIdxLabelMagic);
  put_be32(labels, static_cast<std::uint32_t>(data.size()));
  for (int label : data.labels) labels.put(static_cast<char>(static_cast<std::uint8_t>(label)));
  if (!images || !labels) throw std::runtime_error("write_mnist_idx: write failed");
}

Dataset synthetic_binary(const SyntheticSpec& spec) {
  if (spec.n_per_class == 0 || spec.features == 0) {
    throw std::invalid_argument("synthetic_binary: n_per_class and features must be positive");
  }
  SeededRng rng(spec.seed);
  std::vector<double> direction(spec.features);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (double& d : direction) {
      d = rng.standard_normal();
      norm += d * d;
    }
    norm = std::sqrt(norm);
  }
  for (double& d : direction) d /= norm;

  const std::size_t n = 2 * spec.n_per_class;
  Dataset data;
  data.name = "synthetic";
  data.class_count = 2;
  data.inputs = Matrix(spec.features, n);
  data.targets = Matrix(1, n);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < spec.n_per_class ? 0 : 1;
    const double offset = (label == 0 ? -0.5 : 0.5) * spec.separation;
    for (std::size_t f = 0; f < spec.features; ++f) {
      const double v = 0.5 + offset * direction[f] + spec.noise * rng.standard_normal();
      data.inputs(f, i) = std::clamp(v, 0.0, 1.0);
    }
    data.labels[i] = label;
    data.targets(0, i) = label;
  }
  return data;
}

Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed) {
  const std::size_t total = data.size();
  if (n > total) {
    throw std::invalid_argument("subsample: requested " + std::to_string(n) + " of " +
                                std::to_string(total) + " samples");
  }
  if (n == 0) throw std::invalid_argument("subsample: n must be positive");

  // Group column indices by class; unlabeled data is one group.
  std::size_t groups = data.labels.empty() ? 1 : std::max<std::size_t>(data.class_count, 1);
  for (int label : data.labels) groups = std::max(groups, static_cast<std::size_t>(label) + 1);
  std::vector<std::vector<std::size_t>> members(groups);
  for (std::size_t i = 0; i < total; ++i) {
    members[data.labels.empty() ? 0 : static_cast<std::size_t>(data.labels[i])].push_back(i);
  }

  // Largest-remainder allocation; ties go to the lower class index.
  std::vector<std::size_t> quota(groups);
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(n) * members[g].size();
    quota[g] = static_cast<std::size_t>(scaled / total);
    assigned += quota[g];
    remainders.emplace_back(scaled % total, g);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++quota[remainders[r].second];

  SeededRng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    auto& pool = members[g];
    // Partial Fisher-Yates: the first quota[g] slots become the sample.
    for (std::size_t i = 0; i < quota[g]; ++i) {
      const std::size_t j = i + rng.uniform_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota[g]));
  }
  std::sort(chosen.begin(), chosen.end());
  return select_columns(data, chosen);
}

}  // namespace poswise
