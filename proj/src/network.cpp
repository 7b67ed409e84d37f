#include "poswise/network.hpp"

#include <cmath>
#include <string>

#include "poswise/errors.hpp"
#include "poswise/kernels.hpp"

namespace poswise {
namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_cache_shape(const Network& net, const ForwardCache& cache, std::size_t from_layer) {
  if (cache.x.size() != net.depth() + 1 || cache.y.size() != net.depth()) {
    throw ShapeError("forward cache holds " + std::to_string(cache.x.size()) +
                     " activations for a network of depth " + std::to_string(net.depth()));
  }
  if (cache.x[from_layer].rows() != net.layer(from_layer).inputs()) {
    throw ShapeError("layer " + std::to_string(from_layer) + ": cached input " +
                     cache.x[from_layer].shape_string() + " does not match weights " +
                     net.layer(from_layer).weights.shape_string());
  }
}

}  // namespace

std::string_view to_string(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::kReLU: return "relu";
    case ActivationKind::kSigmoid: return "sigmoid";
    case ActivationKind::kLinear: return "linear";
  }
  return "unknown";
}

Matrix activate(ActivationKind kind, const Matrix& y) {
  if (y.empty() || kind == ActivationKind::kLinear) return y;
  Matrix out(y.rows(), y.cols());
  if (kind == ActivationKind::kReLU) {
    kernels::active().relu(y.values().data(), out.values().data(), y.size());
  } else {
    auto src = y.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = stable_sigmoid(src[i]);
  }
  return out;
}

Matrix activate_prime(ActivationKind kind, const Matrix& y) {
  if (y.empty()) return y;
  Matrix out(y.rows(), y.cols(), 1.0);
  if (kind == ActivationKind::kReLU) {
    kernels::active().relu_prime(y.values().data(), out.values().data(), y.size());
  } else if (kind == ActivationKind::kSigmoid) {
    auto src = y.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double s = stable_sigmoid(src[i]);
      dst[i] = s * (1.0 - s);
    }
  }
  return out;
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.weights.empty()) throw ShapeError("layer " + std::to_string(l) + " has no weights");
    if (layer.bias.rows() != layer.weights.rows() || layer.bias.cols() != 1) {
      throw ShapeError("layer " + std::to_string(l) + ": bias " + layer.bias.shape_string() +
                       " does not match weights " + layer.weights.shape_string());
    }
    if (l > 0 && layer.inputs() != layers_[l - 1].outputs()) {
      throw ShapeError("layer " + std::to_string(l) + " expects " +
                       std::to_string(layer.inputs()) + " inputs but layer " +
                       std::to_string(l - 1) + " produces " +
                       std::to_string(layers_[l - 1].outputs()));
    }
  }
}

bool bitwise_equal(const Network& a, const Network& b) noexcept {
  if (a.depth() != b.depth()) return false;
  for (std::size_t l = 0; l < a.depth(); ++l) {
    const Layer& la = a.layer(l);
    const Layer& lb = b.layer(l);
    if (la.activation != lb.activation || !bitwise_equal(la.weights, lb.weights) ||
        !bitwise_equal(la.bias, lb.bias)) {
      return false;
    }
  }
  return true;
}

void refresh_layer(const Network& net, ForwardCache& cache, std::size_t l) {
  const Layer& layer = net.layer(l);
  if (cache.x[l].rows() != layer.inputs()) {
    throw ShapeError("layer " + std::to_string(l) + ": input " + cache.x[l].shape_string() +
                     " does not match weights " + layer.weights.shape_string());
  }
  cache.y[l] = broadcast_add_col(matmul(layer.weights, cache.x[l]), layer.bias);
  cache.x[l + 1] = activate(layer.activation, cache.y[l]);
}

void refresh_suffix(const Network& net, ForwardCache& cache, std::size_t from_layer) {
  if (from_layer >= net.depth()) {
    throw std::out_of_range("forward_suffix: from_layer " + std::to_string(from_layer) +
                            " outside [0, " + std::to_string(net.depth()) + ")");
  }
  check_cache_shape(net, cache, from_layer);
  for (std::size_t l = from_layer; l < net.depth(); ++l) refresh_layer(net, cache, l);
}

ForwardCache forward_full(const Network& net, const Matrix& x0) {
  if (net.depth() == 0) throw ShapeError("forward_full: empty network");
  if (x0.rows() != net.input_width()) {
    throw ShapeError("layer 0: input " + x0.shape_string() + " does not match weights " +
                     net.layer(0).weights.shape_string());
  }
  ForwardCache cache;
  cache.x.resize(net.depth() + 1);
  cache.y.resize(net.depth());
  cache.x[0] = x0;
  for (std::size_t l = 0; l < net.depth(); ++l) refresh_layer(net, cache, l);
  return cache;
}

ForwardCache forward_suffix(const Network& net, const ForwardCache& cache,
                            std::size_t from_layer) {
  ForwardCache out = cache;
  refresh_suffix(net, out, from_layer);
  return out;
}

}  // namespace poswise
