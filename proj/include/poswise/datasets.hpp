#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "poswise/matrix.hpp"

namespace poswise {

/// Column-per-sample training set.
struct Dataset {
  std::string name;
  Matrix inputs;            // features x N, entries in [0, 1]
  Matrix targets;           // outputs x N
  std::vector<int> labels;  // class index per column
  std::size_t class_count = 0;

  std::size_t size() const noexcept { return inputs.cols(); }
  std::size_t features() const noexcept { return inputs.rows(); }
  /// Two-class sets carry a single 0/1 target row; larger ones are one-hot.
  bool is_binary() const noexcept { return class_count == 2 && targets.rows() == 1; }
};

/// K x N matrix with a single 1 per column at labels[i].
Matrix one_hot(std::span<const int> labels, std::size_t k);

/// Parses an IDX image file (magic 2051) and label file (magic 2049).
/// Pixels are divided by 255; targets are one-hot over 10 classes.
/// Throws DataFormatError with the byte offset of the first inconsistency.
Dataset load_mnist_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path);

/// Parses CIFAR-10 binary batches (3073-byte records: label, then R, G, B planes).
Dataset load_cifar10_bin(std::span<const std::filesystem::path> paths);

/// Writes `data` as an IDX image/label pair. Inputs are scaled by 255 and must
/// land on whole bytes; images are square with side sqrt(features).
void write_mnist_idx(const Dataset& data, const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path);

struct SyntheticSpec {
  std::size_t n_per_class = 105;
  std::size_t features = 128;
  double separation = 0.5;  // Euclidean distance between the two class centres
  double noise = 0.15;      // per-feature standard deviation
  std::uint64_t seed = 0;
};

/// Two Gaussian clusters centred symmetrically about 0.5 along a random unit
/// direction, clipped to [0, 1]. Class 0 occupies the first n_per_class columns.
Dataset synthetic_binary(const SyntheticSpec& spec);

/// n columns drawn without replacement, stratified by label with largest-remainder
/// allocation, returned in their original order.
Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed);

}  // namespace poswise
