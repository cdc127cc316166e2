#include "gfrft/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gfrft/rng.hpp"

namespace gfrft {
namespace {

constexpr int kMaxAttempts = 100;

void check_vertex_count(Index n) {
  if (n < 1) throw InvalidArgument("graph generator: need at least one vertex");
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string("graph generator: ") + name +
                          " must lie in [0, 1]");
  }
}

// Runs gen(seed + a) until the sample is connected.
template <typename Fn>
Graph connected_sample(uint64_t seed, Fn gen) {
  for (int a = 0; a < kMaxAttempts; ++a) {
    Graph g = gen(seed + static_cast<uint64_t>(a));
    if (g.connected()) return g;
  }
  throw DisconnectedAfterRetries(
      "graph generator: no connected sample within 100 seed retries");
}

Graph pair_probability_graph(Index n, uint64_t seed,
                             const std::function<double(Index, Index)>& prob,
                             double weight) {
  rng::SplitMix64 g(seed);
  Graph out;
  out.n = n;
  out.weights = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (g.uniform() <= prob(i, j)) {
        out.weights(i, j) = weight;
        out.weights(j, i) = weight;
      }
    }
  }
  return out;
}

}  // namespace

bool Graph::connected() const {
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index u = 0; u < n; ++u) {
      if (weights(v, u) != 0.0 && !seen[static_cast<size_t>(u)]) {
        seen[static_cast<size_t>(u)] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

Index Graph::edge_count() const {
  Index count = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (weights(i, j) != 0.0) ++count;
    }
  }
  return count;
}

RVector Graph::degrees() const { return weights.rowwise().sum(); }

Graph erdos_renyi(Index n, double p, uint64_t seed) {
  check_vertex_count(n);
  check_probability(p, "p");
  return connected_sample(seed, [&](uint64_t s) {
    return pair_probability_graph(n, s, [&](Index, Index) { return p; }, 1.0);
  });
}

Graph random_sensor(Index n, int k, uint64_t seed) {
  check_vertex_count(n);
  if (k < 1 || k >= n) {
    throw InvalidArgument("random_sensor: k must satisfy 1 <= k < n");
  }
  return connected_sample(seed, [&](uint64_t s) {
    rng::SplitMix64 g(s);
    RMatrix pts(n, 2);
    for (Index i = 0; i < n; ++i) {
      pts(i, 0) = g.uniform();
      pts(i, 1) = g.uniform();
    }

    RMatrix dist(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        dist(i, j) = (pts.row(i) - pts.row(j)).norm();
      }
    }

    // k nearest per vertex; ties resolved by vertex index so the sample is a
    // pure function of the seed.
    std::vector<std::vector<Index>> knn(static_cast<size_t>(n));
    double dist_sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      std::vector<Index> order;
      order.reserve(static_cast<size_t>(n - 1));
      for (Index j = 0; j < n; ++j) {
        if (j != i) order.push_back(j);
      }
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
        return a < b;
      });
      order.resize(static_cast<size_t>(k));
      for (Index j : order) dist_sum += dist(i, j);
      knn[static_cast<size_t>(i)] = std::move(order);
    }
    const double sigma_d = dist_sum / (static_cast<double>(n) * k);

    Graph out;
    out.n = n;
    out.weights = RMatrix::Zero(n, n);
    out.coords = pts;
    for (Index i = 0; i < n; ++i) {
      for (Index j : knn[static_cast<size_t>(i)]) {
        const double w =
            std::exp(-dist(i, j) * dist(i, j) / (2.0 * sigma_d * sigma_d));
        out.weights(i, j) = w;
        out.weights(j, i) = w;
      }
    }
    return out;
  });
}

Graph community_graph(Index n, int communities, double p_in, double p_out,
                      uint64_t seed) {
  check_vertex_count(n);
  check_probability(p_in, "p_in");
  check_probability(p_out, "p_out");
  if (communities < 1 || communities > n) {
    throw InvalidArgument("community_graph: communities must satisfy 1 <= c <= n");
  }
  // Consecutive blocks; the first n % c blocks take the extra vertex.
  std::vector<int> block(static_cast<size_t>(n));
  const Index base = n / communities;
  const Index rem = n % communities;
  Index v = 0;
  for (int c = 0; c < communities; ++c) {
    const Index len = base + (c < rem ? 1 : 0);
    for (Index t = 0; t < len; ++t) block[static_cast<size_t>(v++)] = c;
  }
  return connected_sample(seed, [&](uint64_t s) {
    return pair_probability_graph(
        n, s,
        [&](Index i, Index j) {
          return block[static_cast<size_t>(i)] == block[static_cast<size_t>(j)]
                     ? p_in
                     : p_out;
        },
        1.0);
  });
}

Graph gaussian_kernel_graph(const RVector& signal, double sigma, double density,
                            uint64_t seed) {
  const Index n = signal.size();
  check_vertex_count(n);
  check_probability(density, "density");
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_kernel_graph: sigma must be positive");
  return connected_sample(seed, [&](uint64_t s) {
    rng::SplitMix64 g(s);
    Graph out;
    out.n = n;
    out.weights = RMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (g.uniform() <= density) {
          const double d = signal(i) - signal(j);
          const double w = std::exp(-d * d / (2.0 * sigma * sigma));
          out.weights(i, j) = w;
          out.weights(j, i) = w;
        }
      }
    }
    return out;
  });
}

ShiftOperator make_shift(const Graph& g, ShiftKind kind) {
  if (g.weights.rows() != g.n || g.weights.cols() != g.n) {
    throw DimensionMismatch("make_shift: weight matrix does not match n");
  }
  ShiftOperator s;
  s.kind = kind;
  if (kind == ShiftKind::Adjacency) {
    s.matrix = g.weights;
  } else {
    s.matrix = RMatrix(g.degrees().asDiagonal());
    s.matrix -= g.weights;
  }
  return s;
}

}  // namespace gfrft
