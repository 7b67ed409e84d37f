#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poswise/datasets.hpp"
#include "poswise/losses.hpp"
#include "poswise/optimizers.hpp"

namespace poswise {

enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kDiverged = 3,
  kThresholdNotReached = 4,
};

enum class DatasetKind { kMnist, kCifar10, kSynthetic };
enum class LossChoice { kAuto, kBce, kAMSoftmax };
enum class OptimizerChoice { kGd, kPoswise, kBoth };

/// Bad flag values or combinations; maps to ExitCode::kUsage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::kSynthetic;
  std::filesystem::path data_dir;
  std::size_t subsample = 0;  // 0 keeps every sample
  std::vector<std::size_t> hidden = {20, 7, 5};
  std::optional<double> lr;         // default depends on the task
  std::optional<double> threshold;  // default depends on the dataset
  std::size_t max_epochs = 3000;
  std::uint64_t seed = 0;
  LossChoice loss = LossChoice::kAuto;
  double margin = 0.35;
  double scale = 10.0;
  RefreshMode refresh_mode = RefreshMode::kSuffix;
  bool train_bias = true;
  OptimizerChoice optimizer = OptimizerChoice::kBoth;
  std::size_t synthetic_per_class = 105;
  std::size_t synthetic_features = 128;
  double synthetic_separation = 0.5;
};

std::string to_string(DatasetKind kind);

inline constexpr double kDefaultBinaryLr = 0.1;
inline constexpr double kDefaultMulticlassLr = 0.03;
inline constexpr double kDefaultBinaryThreshold = 0.1;
inline constexpr double kDefaultCifarThreshold = 3.23;
inline constexpr double kDefaultMnistThreshold = 3.248;

/// Loads (and optionally subsamples) the configured dataset.
/// Throws DataFormatError when files are missing or malformed.
Dataset load_dataset(const ExperimentConfig& cfg);

struct RunOutcome {
  OptimizerKind kind;
  TrainRecord record;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;

  std::string dataset;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  double threshold = 0.0;
  std::vector<std::size_t> widths;
  LossSpec loss;
  RefreshMode refresh_mode = RefreshMode::kSuffix;
  bool train_bias = true;
  std::size_t max_epochs = 0;
  std::string kernel_backend;
  std::vector<RunOutcome> runs;

  const RunOutcome* find(OptimizerKind kind) const;
  bool any_diverged() const;
  bool all_reached_threshold() const;
};

/// Builds one initialization, duplicates it, and trains gradient descent then
/// the position-wise optimizer (whichever are requested) one after the other.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Same, on an already-loaded dataset.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& data);

ExitCode exit_code_for(const ExperimentReport& report);

}  // namespace poswise
