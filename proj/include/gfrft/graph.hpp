#pragma once

#include <cstdint>
#include <optional>

#include "gfrft/types.hpp"

namespace gfrft {

// Undirected weighted graph. weights is symmetric with a zero diagonal and
// nonnegative entries; coords carries planted 2-D positions for geometric
// models so they can round-trip through files and plots.
struct Graph {
  Index n = 0;
  RMatrix weights;
  std::optional<RMatrix> coords;

  bool connected() const;
  Index edge_count() const;  // unordered pairs with nonzero weight
  RVector degrees() const;   // weighted degree per vertex
};

// All generators are deterministic per seed and retry seed+1, seed+2, ... (up
// to 100 attempts) until the sample is connected; they throw
// DisconnectedAfterRetries past that.

// G(n, p) with unit weights.
Graph erdos_renyi(Index n, double p, uint64_t seed);

// n points uniform in the unit square, symmetrized k-nearest-neighbor edges,
// weights exp(-d^2 / (2 sigma_d^2)) with sigma_d = mean kNN distance.
Graph random_sensor(Index n, int k, uint64_t seed);

// Planted partition: communities of near-equal size, edge probability p_in
// inside a block and p_out across blocks, unit weights. communities = 1
// degenerates to erdos_renyi(n, p_in, seed) draw for draw.
Graph community_graph(Index n, int communities, double p_in, double p_out,
                      uint64_t seed);

// Random pairs kept with probability `density`, Gaussian similarity weights
// exp(-(s_i - s_j)^2 / (2 sigma^2)) computed from a scalar signal.
Graph gaussian_kernel_graph(const RVector& signal, double sigma, double density,
                            uint64_t seed);

enum class ShiftKind { Adjacency, Laplacian };

// Symmetric shift matrix the transform is built on: the weight matrix itself
// or the combinatorial Laplacian D - W.
struct ShiftOperator {
  ShiftKind kind = ShiftKind::Laplacian;
  RMatrix matrix;
};

ShiftOperator make_shift(const Graph& g, ShiftKind kind);

}  // namespace gfrft
