#include "poswise/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poswise/errors.hpp"

namespace poswise {
namespace {

void check_cache(const Network& net, const ForwardCache& cache, const Matrix& target) {
  const std::size_t depth = net.depth();
  if (cache.x.size() != depth + 1 || cache.y.size() != depth) {
    throw ShapeError("backward: cache depth does not match network depth " +
                     std::to_string(depth));
  }
  const std::size_t n = cache.batch_size();
  for (std::size_t l = 0; l < depth; ++l) {
    const Layer& layer = net.layer(l);
    if (cache.x[l].rows() != layer.inputs() || cache.x[l].cols() != n ||
        cache.y[l].rows() != layer.outputs() || cache.y[l].cols() != n ||
        cache.x[l + 1].rows() != layer.outputs() || cache.x[l + 1].cols() != n) {
      throw ShapeError("backward: cache entries for layer " + std::to_string(l) +
                       " do not match its weights " + layer.weights.shape_string());
    }
  }
  if (target.rows() != net.output_width() || target.cols() != n) {
    throw ShapeError("backward: target " + target.shape_string() + " does not match output " +
                     cache.output().shape_string());
  }
}

double checked_loss(const LossSpec& spec, const Matrix& output, const Matrix& target,
                    const char* where) {
  const double loss = evaluate_loss(spec, output, target);
  if (!std::isfinite(loss)) throw DivergenceError(std::string("non-finite loss ") + where);
  return loss;
}

void apply_update(Layer& layer, const Matrix& dw, const Matrix& db, const TrainConfig& cfg) {
  layer.weights = scale_and_axpy(layer.weights, dw, cfg.eta);
  if (cfg.train_bias) layer.bias = scale_and_axpy(layer.bias, db, cfg.eta);
}

Matrix weight_gradient(const Matrix& delta, const Matrix& layer_input) {
  return matmul(delta, transpose(layer_input));
}

Matrix propagate_delta(const Layer& layer, const Matrix& delta) {
  return matmul(transpose(layer.weights), delta);
}

Matrix pre_activation_delta(const Layer& layer, const Matrix& upstream, const Matrix& y) {
  return hadamard(upstream, activate_prime(layer.activation, y));
}

}  // namespace

std::string_view to_string(RefreshMode mode) noexcept {
  return mode == RefreshMode::kSuffix ? "suffix" : "literal";
}

std::string_view to_string(OptimizerKind kind) noexcept {
  return kind == OptimizerKind::kGradientDescent ? "gd" : "poswise";
}

void TrainConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("learning rate must be > 0");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (std::isnan(loss_threshold)) throw std::invalid_argument("loss threshold is NaN");
  loss.validate();
}

Gradients backward_full(const Network& net, const ForwardCache& cache, const Matrix& target,
                        const LossSpec& spec) {
  check_cache(net, cache, target);
  const std::size_t depth = net.depth();
  Gradients grads;
  grads.weights.resize(depth);
  grads.bias.resize(depth);

  Matrix delta = output_delta(spec, net, cache, target);
  for (std::size_t l = depth; l-- > 0;) {
    const Layer& layer = net.layer(l);
    grads.weights[l] = weight_gradient(delta, cache.x[l]);
    grads.bias[l] = row_sums(delta);
    if (l >= 1) {
      delta = pre_activation_delta(net.layer(l - 1), propagate_delta(layer, delta), cache.y[l - 1]);
    }
  }
  return grads;
}

EpochResult gd_epoch(Network& net, const Dataset& data, const TrainConfig& cfg) {
  check_pairing(cfg.loss, net.output_activation());
  const ForwardCache cache = forward_full(net, data.inputs);
  EpochResult result;
  result.loss = checked_loss(cfg.loss, cache.output(), data.targets, "before gradient step");
  const Gradients grads = backward_full(net, cache, data.targets, cfg.loss);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    apply_update(net.layer(l), grads.weights[l], grads.bias[l], cfg);
  }
  result.update_counts.assign(net.depth(), 1);
  return result;
}

EpochResult poswise_epoch(Network& net, const Dataset& data, const TrainConfig& cfg) {
  check_pairing(cfg.loss, net.output_activation());
  const std::size_t depth = net.depth();
  const std::size_t last = depth - 1;
  ForwardCache cache = forward_full(net, data.inputs);

  EpochResult result;
  result.update_counts.assign(depth, 0);
  for (std::size_t phase = 0; phase < depth; ++phase) {
    result.phase_losses.push_back(
        checked_loss(cfg.loss, cache.output(), data.targets, "during position-wise phase"));
    const std::size_t shallowest = last - phase;

    Matrix delta = output_delta(cfg.loss, net, cache, data.targets);
    Matrix upstream;
    for (std::size_t l = last + 1; l-- > shallowest;) {
      Layer& layer = net.layer(l);
      if (l < last) delta = pre_activation_delta(layer, upstream, cache.y[l]);
      const Matrix dw = weight_gradient(delta, cache.x[l]);
      const Matrix db = row_sums(delta);
      // Propagate through the weights as they were before this layer's update.
      if (l >= 1) upstream = propagate_delta(layer, delta);
      apply_update(layer, dw, db, cfg);
      ++result.update_counts[l];
      // In suffix mode the re-forward below overwrites this layer's outputs, and
      // nothing later in the phase reads them, so the per-layer refresh is skipped.
      if (cfg.refresh_mode == RefreshMode::kLiteral) refresh_layer(net, cache, l);
    }
    if (cfg.refresh_mode == RefreshMode::kSuffix) refresh_suffix(net, cache, shallowest);
  }

  if (cfg.refresh_mode == RefreshMode::kLiteral) cache = forward_full(net, data.inputs);
  result.loss = checked_loss(cfg.loss, cache.output(), data.targets, "after position-wise epoch");
  return result;
}

TrainRecord train(Network& net, const Dataset& data, const TrainConfig& cfg, OptimizerKind kind) {
  cfg.validate();
  check_pairing(cfg.loss, net.output_activation());
  TrainRecord record;
  record.kind = kind;
  record.initial_loss =
      evaluate_loss(cfg.loss, forward_full(net, data.inputs).output(), data.targets);

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochResult result;
    try {
      result = kind == OptimizerKind::kGradientDescent ? gd_epoch(net, data, cfg)
                                                       : poswise_epoch(net, data, cfg);
    } catch (const DivergenceError& e) {
      record.diverged = true;
      record.divergence_message = "epoch " + std::to_string(epoch) + ": " + e.what();
      break;
    }
    record.loss_history.push_back(result.loss);
    record.update_counts.push_back(std::move(result.update_counts));
    if (kind == OptimizerKind::kPositionWise) record.phase_losses.push_back(std::move(result.phase_losses));
    if (result.loss < cfg.loss_threshold) {
      record.epochs_to_threshold = epoch;
      break;
    }
  }
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace poswise
