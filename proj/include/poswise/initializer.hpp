#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "poswise/matrix.hpp"
#include "poswise/network.hpp"
#include "poswise/rng.hpp"

namespace poswise {

struct InitSpec {
  std::uint64_t seed = 0;
  double mu = 0.0;
};

/// Glorot/Xavier normal scale for a layer with n_out outputs and n_in inputs.
double xavier_sigma(std::size_t n_out, std::size_t n_in);

/// n_out x n_in weights drawn from N(mu, xavier_sigma(n_out, n_in)).
Matrix xavier_normal(SeededRng& rng, std::size_t n_out, std::size_t n_in, double mu = 0.0);

/// Builds a network for `widths` = (input, hidden..., output); activations[l] is
/// applied after weight layer l. Weights are drawn shallow to deep from a single
/// stream seeded with spec.seed; every bias starts at zero.
Network init_network(std::span<const std::size_t> widths,
                     std::span<const ActivationKind> activations, const InitSpec& spec);

/// Two independent deep copies of `net`.
std::pair<Network, Network> duplicate_network(const Network& net);

}  // namespace poswise
