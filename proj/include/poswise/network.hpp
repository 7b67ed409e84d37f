#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "poswise/matrix.hpp"

namespace poswise {

enum class ActivationKind { kReLU, kSigmoid, kLinear };

std::string_view to_string(ActivationKind kind) noexcept;

/// Entrywise phi(y). Sigmoid uses a split form that never overflows exp.
Matrix activate(ActivationKind kind, const Matrix& y);

/// Entrywise phi'(y). ReLU'(0) is 0.
Matrix activate_prime(ActivationKind kind, const Matrix& y);

struct Layer {
  Matrix weights;  // n_out x n_in
  Matrix bias;     // n_out x 1
  ActivationKind activation = ActivationKind::kLinear;

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }
};

/// Ordered stack of dense layers; index 0 is the shallowest.
class Network {
 public:
  Network() = default;
  /// Throws ShapeError unless each layer's input width equals the previous output width
  /// and every bias is a matching column vector.
  explicit Network(std::vector<Layer> layers);

  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_width() const { return layers_.front().inputs(); }
  std::size_t output_width() const { return layers_.back().outputs(); }
  ActivationKind output_activation() const { return layers_.back().activation; }

  const Layer& layer(std::size_t l) const { return layers_.at(l); }
  Layer& layer(std::size_t l) { return layers_.at(l); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

 private:
  std::vector<Layer> layers_;
};

bool bitwise_equal(const Network& a, const Network& b) noexcept;

/// Activations x[0..L] (x[0] is the input) and pre-activations y[0..L-1].
struct ForwardCache {
  std::vector<Matrix> x;
  std::vector<Matrix> y;

  const Matrix& output() const { return x.back(); }
  std::size_t batch_size() const { return x.empty() ? 0 : x.front().cols(); }
};

ForwardCache forward_full(const Network& net, const Matrix& x0);

/// Recomputes layers from_layer..L-1 from the cached x[from_layer]; shallower entries
/// are left untouched.
ForwardCache forward_suffix(const Network& net, const ForwardCache& cache, std::size_t from_layer);

/// In-place form of forward_suffix for callers that own the cache.
void refresh_suffix(const Network& net, ForwardCache& cache, std::size_t from_layer);

/// Recomputes only layer l: y[l] and x[l+1] from the cached x[l].
void refresh_layer(const Network& net, ForwardCache& cache, std::size_t l);

}  // namespace poswise
