#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "poswise/matrix.hpp"
#include "poswise/network.hpp"

namespace poswise {

enum class LossKind { kBinaryCrossEntropy, kAMSoftmax, kMSE };

std::string_view to_string(LossKind kind) noexcept;

struct LossSpec {
  LossKind kind = LossKind::kBinaryCrossEntropy;
  double margin = 0.35;  // AM-softmax only
  double scale = 10.0;   // AM-softmax only

  /// Throws std::invalid_argument for a negative margin or non-positive scale.
  void validate() const;
};

/// Predictions are clamped to [kProbClamp, 1 - kProbClamp] before any logarithm.
inline constexpr double kProbClamp = 1e-12;

/// Mean binary log-loss over the N columns, summed over rows (one row per
/// independent binary output).
double cross_entropy(const Matrix& pred, const Matrix& target);

/// Additive-margin softmax cross-entropy over K x N logits. Each column's true
/// logit is reduced by `margin`, every logit is multiplied by `scale`, and the
/// result is averaged over columns. Uses max-subtraction.
double am_softmax_loss(const Matrix& logits, std::span<const int> labels, double margin,
                       double scale);

/// (1 / 2N) * sum of squared residuals.
double mse_loss(const Matrix& pred, const Matrix& target);

/// Row index of the 1 in each one-hot column.
std::vector<int> labels_from_one_hot(const Matrix& one_hot);

/// Loss of the network output against `target` (one-hot for AM-softmax).
double evaluate_loss(const LossSpec& spec, const Matrix& output, const Matrix& target);

/// Throws std::invalid_argument unless the output activation and loss are one of
/// the supported pairings: Sigmoid + BCE, Linear + AM-softmax, Linear + MSE.
void check_pairing(const LossSpec& spec, ActivationKind output_activation);

/// dE/dY at the output layer's pre-activation, 1/N already applied.
Matrix output_delta(const LossSpec& spec, ActivationKind output_activation, const Matrix& output,
                    const Matrix& target);

inline Matrix output_delta(const LossSpec& spec, const Network& net, const ForwardCache& cache,
                           const Matrix& target) {
  return output_delta(spec, net.output_activation(), cache.output(), target);
}

}  // namespace poswise
