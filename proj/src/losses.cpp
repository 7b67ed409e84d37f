#include "poswise/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poswise/errors.hpp"

namespace poswise {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.empty()) {
    throw ShapeError(std::string(op) + ": prediction " + a.shape_string() + " vs target " +
                     b.shape_string());
  }
}

// Log-softmax denominator for column i of the margin-adjusted, scaled logits,
// written into `shifted` as s*z_j (minus s*m for the true class).
double log_partition(const Matrix& logits, std::size_t col, int label, double margin, double scale,
                     std::vector<double>& shifted) {
  const std::size_t k = logits.rows();
  shifted.resize(k);
  double max_v = -INFINITY;
  for (std::size_t j = 0; j < k; ++j) {
    double z = logits(j, col);
    if (static_cast<int>(j) == label) z -= margin;
    shifted[j] = scale * z;
    max_v = std::max(max_v, shifted[j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += std::exp(shifted[j] - max_v);
  return max_v + std::log(sum);
}

}  // namespace

std::string_view to_string(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::kBinaryCrossEntropy: return "bce";
    case LossKind::kAMSoftmax: return "amsoftmax";
    case LossKind::kMSE: return "mse";
  }
  return "unknown";
}

void LossSpec::validate() const {
  if (kind != LossKind::kAMSoftmax) return;
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw std::invalid_argument("AM-softmax margin must be >= 0");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("AM-softmax scale must be > 0");
  }
}

double cross_entropy(const Matrix& pred, const Matrix& target) {
  require_same_shape(pred, target, "cross_entropy");
  const auto p = pred.values();
  const auto t = target.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kProbClamp, 1.0 - kProbClamp);
    sum += t[i] * std::log(q) + (1.0 - t[i]) * std::log(1.0 - q);
  }
  return -sum / static_cast<double>(pred.cols());
}

double am_softmax_loss(const Matrix& logits, std::span<const int> labels, double margin,
                       double scale) {
  if (logits.rows() < 2) throw ShapeError("am_softmax_loss: need at least 2 classes");
  if (labels.size() != logits.cols()) {
    throw ShapeError("am_softmax_loss: " + std::to_string(labels.size()) + " labels for " +
                     logits.shape_string() + " logits");
  }
  const LossSpec spec{LossKind::kAMSoftmax, margin, scale};
  spec.validate();
  std::vector<double> shifted;
  double total = 0.0;
  for (std::size_t i = 0; i < logits.cols(); ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.rows()) {
      throw std::out_of_range("am_softmax_loss: label " + std::to_string(y) + " at column " +
                              std::to_string(i) + " outside [0, " +
                              std::to_string(logits.rows()) + ")");
    }
    const double lse = log_partition(logits, i, y, margin, scale, shifted);
    total += lse - shifted[static_cast<std::size_t>(y)];
  }
  return total / static_cast<double>(logits.cols());
}

double mse_loss(const Matrix& pred, const Matrix& target) {
  require_same_shape(pred, target, "mse_loss");
  const auto p = pred.values();
  const auto t = target.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = t[i] - p[i];
    sum += r * r;
  }
  return sum / (2.0 * static_cast<double>(pred.cols()));
}

std::vector<int> labels_from_one_hot(const Matrix& one_hot) {
  std::vector<int> labels(one_hot.cols(), -1);
  for (std::size_t i = 0; i < one_hot.cols(); ++i) {
    for (std::size_t j = 0; j < one_hot.rows(); ++j) {
      if (one_hot(j, i) == 1.0) {
        if (labels[i] != -1) {
          throw std::invalid_argument("column " + std::to_string(i) + " is not one-hot");
        }
        labels[i] = static_cast<int>(j);
      } else if (one_hot(j, i) != 0.0) {
        throw std::invalid_argument("column " + std::to_string(i) + " is not one-hot");
      }
    }
    if (labels[i] == -1) throw std::invalid_argument("column " + std::to_string(i) + " is not one-hot");
  }
  return labels;
}

double evaluate_loss(const LossSpec& spec, const Matrix& output, const Matrix& target) {
  switch (spec.kind) {
    case LossKind::kBinaryCrossEntropy:
      return cross_entropy(output, target);
    case LossKind::kMSE:
      return mse_loss(output, target);
    case LossKind::kAMSoftmax:
      require_same_shape(output, target, "am_softmax_loss");
      return am_softmax_loss(output, labels_from_one_hot(target), spec.margin, spec.scale);
  }
  throw std::invalid_argument("unknown loss kind");
}

void check_pairing(const LossSpec& spec, ActivationKind output_activation) {
  spec.validate();
  const bool ok =
      (spec.kind == LossKind::kBinaryCrossEntropy && output_activation == ActivationKind::kSigmoid) ||
      (spec.kind == LossKind::kAMSoftmax && output_activation == ActivationKind::kLinear) ||
      (spec.kind == LossKind::kMSE && output_activation == ActivationKind::kLinear);
  if (!ok) {
    throw std::invalid_argument("unsupported output pairing: " +
                                std::string(to_string(output_activation)) + " activation with " +
                                std::string(to_string(spec.kind)) + " loss");
  }
}

Matrix output_delta(const LossSpec& spec, ActivationKind output_activation, const Matrix& output,
                    const Matrix& target) {
  check_pairing(spec, output_activation);
  require_same_shape(output, target, "output_delta");
  const double inv_n = 1.0 / static_cast<double>(output.cols());
  if (spec.kind != LossKind::kAMSoftmax) {
    // Sigmoid + BCE and Linear + MSE share the fused form (X - D) / N.
    return scaled(sub(output, target), inv_n);
  }
  const std::vector<int> labels = labels_from_one_hot(target);
  Matrix delta(output.rows(), output.cols());
  std::vector<double> shifted;
  for (std::size_t i = 0; i < output.cols(); ++i) {
    const double lse = log_partition(output, i, labels[i], spec.margin, spec.scale, shifted);
    for (std::size_t j = 0; j < output.rows(); ++j) {
      const double posterior = std::exp(shifted[j] - lse);
      delta(j, i) = (posterior - target(j, i)) * spec.scale * inv_n;
    }
  }
  return delta;
}

}  // namespace poswise
