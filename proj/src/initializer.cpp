#include "poswise/initializer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "poswise/errors.hpp"

namespace poswise {

double xavier_sigma(std::size_t n_out, std::size_t n_in) {
  return std::sqrt(2.0 / static_cast<double>(n_out + n_in));
}

Matrix xavier_normal(SeededRng& rng, std::size_t n_out, std::size_t n_in, double mu) {
  if (n_out == 0 || n_in == 0) {
    throw ShapeError("xavier_normal: layer dimensions must be positive, got " +
                     std::to_string(n_out) + "x" + std::to_string(n_in));
  }
  return draw_normal(rng, n_out, n_in, mu, xavier_sigma(n_out, n_in));
}

Network init_network(std::span<const std::size_t> widths,
                     std::span<const ActivationKind> activations, const InitSpec& spec) {
  if (widths.size() < 2) {
    throw ShapeError("init_network: need at least an input and an output width");
  }
  if (activations.size() != widths.size() - 1) {
    throw ShapeError("init_network: " + std::to_string(activations.size()) +
                     " activations for " + std::to_string(widths.size() - 1) + " weight layers");
  }
  SeededRng rng(spec.seed);
  std::vector<Layer> layers;
  layers.reserve(activations.size());
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.weights = xavier_normal(rng, widths[l + 1], widths[l], spec.mu);
    layer.bias = Matrix(widths[l + 1], 1);
    layer.activation = activations[l];
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

std::pair<Network, Network> duplicate_network(const Network& net) { return {net, net}; }

}  // namespace poswise
