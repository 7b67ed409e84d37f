#include "poswise/experiment.hpp"

#include <algorithm>

#include "poswise/errors.hpp"
#include "poswise/initializer.hpp"
#include "poswise/kernels.hpp"

namespace poswise {
namespace {

std::filesystem::path require_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw DataFormatError("missing data file " + path.string(), 0);
  }
  return path;
}

LossSpec resolve_loss(const ExperimentConfig& cfg, const Dataset& data) {
  LossChoice choice = cfg.loss;
  if (choice == LossChoice::kAuto) {
    choice = data.is_binary() ? LossChoice::kBce : LossChoice::kAMSoftmax;
  }
  if (choice == LossChoice::kAMSoftmax && data.targets.rows() < 2) {
    throw UsageError("amsoftmax needs at least two output classes; use --loss bce for " +
                     data.name);
  }
  LossSpec spec;
  spec.kind = choice == LossChoice::kBce ? LossKind::kBinaryCrossEntropy : LossKind::kAMSoftmax;
  spec.margin = cfg.margin;
  spec.scale = cfg.scale;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

double default_threshold(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist: return kDefaultMnistThreshold;
    case DatasetKind::kCifar10: return kDefaultCifarThreshold;
    case DatasetKind::kSynthetic: return kDefaultBinaryThreshold;
  }
  return kDefaultBinaryThreshold;
}

}  // namespace

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist: return "mnist";
    case DatasetKind::kCifar10: return "cifar10";
    case DatasetKind::kSynthetic: return "synthetic";
  }
  return "unknown";
}

Dataset load_dataset(const ExperimentConfig& cfg) {
  Dataset data;
  switch (cfg.dataset) {
    case DatasetKind::kMnist:
      data = load_mnist_idx(require_file(cfg.data_dir / "train-images-idx3-ubyte"),
                            require_file(cfg.data_dir / "train-labels-idx1-ubyte"));
      break;
    case DatasetKind::kCifar10: {
      std::vector<std::filesystem::path> batches;
      for (int i = 1; i <= 5; ++i) {
        auto path = cfg.data_dir / ("data_batch_" + std::to_string(i) + ".bin");
        if (std::filesystem::is_regular_file(path)) batches.push_back(std::move(path));
      }
      if (batches.empty()) {
        throw DataFormatError("no data_batch_*.bin files in " + cfg.data_dir.string(), 0);
      }
      data = load_cifar10_bin(batches);
      break;
    }
    case DatasetKind::kSynthetic: {
      SyntheticSpec spec;
      spec.n_per_class = cfg.synthetic_per_class;
      spec.features = cfg.synthetic_features;
      spec.separation = cfg.synthetic_separation;
      spec.seed = cfg.seed;
      data = synthetic_binary(spec);
      break;
    }
  }
  if (cfg.subsample > 0) {
    if (cfg.subsample > data.size()) {
      throw UsageError("--subsample " + std::to_string(cfg.subsample) + " exceeds the " +
                       std::to_string(data.size()) + " available samples");
    }
    data = subsample(data, cfg.subsample, cfg.seed);
  }
  return data;
}

const RunOutcome* ExperimentReport::find(OptimizerKind kind) const {
  for (const auto& run : runs) {
    if (run.kind == kind) return &run;
  }
  return nullptr;
}

bool ExperimentReport::any_diverged() const {
  return std::any_of(runs.begin(), runs.end(), [](const auto& r) { return r.record.diverged; });
}

bool ExperimentReport::all_reached_threshold() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const auto& r) { return r.record.epochs_to_threshold.has_value(); });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, load_dataset(cfg));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& data) {
  if (cfg.hidden.empty() ||
      std::any_of(cfg.hidden.begin(), cfg.hidden.end(), [](std::size_t w) { return w == 0; })) {
    throw UsageError("--hidden needs one or more positive widths");
  }
  if (cfg.max_epochs < 1) throw UsageError("--max-epochs must be at least 1");

  ExperimentReport report;
  report.dataset = data.name;
  report.samples = data.size();
  report.seed = cfg.seed;
  report.loss = resolve_loss(cfg, data);
  report.eta = cfg.lr.value_or(data.is_binary() ? kDefaultBinaryLr : kDefaultMulticlassLr);
  report.threshold = cfg.threshold.value_or(default_threshold(cfg.dataset));
  report.refresh_mode = cfg.refresh_mode;
  report.train_bias = cfg.train_bias;
  report.max_epochs = cfg.max_epochs;
  report.kernel_backend = std::string(kernels::backend_name(kernels::active().backend));

  report.widths.push_back(data.features());
  report.widths.insert(report.widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  report.widths.push_back(data.targets.rows());

  std::vector<ActivationKind> activations(cfg.hidden.size(), ActivationKind::kReLU);
  activations.push_back(report.loss.kind == LossKind::kBinaryCrossEntropy ? ActivationKind::kSigmoid
                                                                          : ActivationKind::kLinear);

  TrainConfig train_cfg;
  train_cfg.eta = report.eta;
  train_cfg.loss_threshold = report.threshold;
  train_cfg.max_epochs = cfg.max_epochs;
  train_cfg.loss = report.loss;
  train_cfg.refresh_mode = cfg.refresh_mode;
  train_cfg.train_bias = cfg.train_bias;
  try {
    train_cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Network initial = init_network(report.widths, activations, InitSpec{cfg.seed, 0.0});
  auto [gd_net, pw_net] = duplicate_network(initial);

  if (cfg.optimizer != OptimizerChoice::kPoswise) {
    report.runs.push_back({OptimizerKind::kGradientDescent,
                           train(gd_net, data, train_cfg, OptimizerKind::kGradientDescent)});
  }
  if (cfg.optimizer != OptimizerChoice::kGd) {
    report.runs.push_back({OptimizerKind::kPositionWise,
                           train(pw_net, data, train_cfg, OptimizerKind::kPositionWise)});
  }
  return report;
}

ExitCode exit_code_for(const ExperimentReport& report) {
  if (report.any_diverged()) return ExitCode::kDiverged;
  if (!report.all_reached_threshold()) return ExitCode::kThresholdNotReached;
  return ExitCode::kOk;
}

}  // namespace poswise
