#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poswise/datasets.hpp"
#include "poswise/losses.hpp"
#include "poswise/matrix.hpp"
#include "poswise/network.hpp"

namespace poswise {

/// How the position-wise optimizer brings its forward cache up to date after
/// updating the deepest layers of a phase.
///   kSuffix   re-run the forward pass from the shallowest layer touched in the
///             phase, so the next phase sees a consistent cache
///   kLiteral  only recompute each layer right after its own update, deepest
///             first, which leaves deeper activations computed from stale inputs
enum class RefreshMode { kSuffix, kLiteral };

enum class OptimizerKind { kGradientDescent, kPositionWise };

std::string_view to_string(RefreshMode mode) noexcept;
std::string_view to_string(OptimizerKind kind) noexcept;

struct TrainConfig {
  double eta = 0.1;
  double loss_threshold = 0.1;
  std::size_t max_epochs = 1000;
  LossSpec loss;
  RefreshMode refresh_mode = RefreshMode::kSuffix;
  bool train_bias = true;

  void validate() const;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Matrix> bias;
};

/// Backpropagates through every layer without touching the weights.
/// `cache` must come from a forward pass of `net` on the current weights.
Gradients backward_full(const Network& net, const ForwardCache& cache, const Matrix& target,
                        const LossSpec& spec);

struct EpochResult {
  double loss = 0.0;
  /// Weight updates applied to each layer during the epoch, shallow to deep.
  std::vector<std::size_t> update_counts;
  /// Loss seen at the start of each phase (position-wise only).
  std::vector<double> phase_losses;
};

/// One batch gradient-descent epoch: forward, backward, then every layer is
/// updated at once. Returns the loss measured before the update.
EpochResult gd_epoch(Network& net, const Dataset& data, const TrainConfig& cfg);

/// One position-wise epoch over L phases; phase i updates the deepest i + 1
/// layers, deepest first, so layer l is updated l + 1 times. Returns the loss
/// on a consistent forward pass after the last phase.
EpochResult poswise_epoch(Network& net, const Dataset& data, const TrainConfig& cfg);

struct TrainRecord {
  OptimizerKind kind = OptimizerKind::kGradientDescent;
  double initial_loss = 0.0;
  std::vector<double> loss_history;
  std::optional<std::size_t> epochs_to_threshold;
  double wall_seconds = 0.0;
  std::vector<std::vector<std::size_t>> update_counts;
  std::vector<std::vector<double>> phase_losses;
  bool diverged = false;
  std::string divergence_message;

  double final_loss() const { return loss_history.empty() ? initial_loss : loss_history.back(); }
};

/// Runs epochs until the end-of-epoch loss drops below cfg.loss_threshold or
/// cfg.max_epochs is reached. A non-finite loss stops the run and marks the
/// record as diverged instead of throwing.
TrainRecord train(Network& net, const Dataset& data, const TrainConfig& cfg, OptimizerKind kind);

}  // namespace poswise
