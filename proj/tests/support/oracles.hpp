#pragma once

// Independent reference implementations used to check the engine.  They are
// written for clarity, not speed, and share no code with the library beyond
// the plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "scimap/mapping/graph.hpp"
#include "scimap/mfas/mfas.hpp"

namespace oracle {

using scimap::mapping::Graph;

/// Random simple graph on `n` nodes with integer weights in [1, 5].
inline Graph randomGraph(std::mt19937_64& gen, std::size_t n, double density, bool directed) {
  scimap::mapping::GraphBuilder b(directed);
  for (std::size_t i = 0; i < n; ++i) b.addNode("n" + std::to_string(i), "", 1.0);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<int> w(1, 5);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (!directed && j < i)) continue;
      if (coin(gen)) b.addEdge("n" + std::to_string(i), "n" + std::to_string(j), w(gen));
    }
  return b.build();
}

/// Dense weight matrix; undirected edges are mirrored.
inline std::vector<std::vector<double>> denseWeights(const Graph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges) {
    a[e.u][e.v] += e.weight;
    if (!g.directed) a[e.v][e.u] += e.weight;
  }
  return a;
}

/// Power iteration on the explicit Google matrix.
inline std::vector<double> densePagerank(const Graph& g, double d = 0.85) {
  const std::size_t n = g.nodes.size();
  const auto a = denseWeights(g);
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));  // m[i][j]: i -> j
  for (std::size_t i = 0; i < n; ++i) {
    double out = 0.0;
    for (double w : a[i]) out += w;
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = d * (out > 0 ? a[i][j] / out : 1.0 / static_cast<double>(n)) + (1.0 - d) / static_cast<double>(n);
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[j] += x[i] * m[i][j];
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::abs(y[i] - x[i]);
    x = y;
    if (diff < 1e-15) break;
  }
  return x;
}

/// Betweenness by listing every shortest path of every ordered pair.
/// Undirected graphs count each unordered pair once.
inline std::vector<double> enumeratedBetweenness(const Graph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    if (!g.directed) adj[e.v].push_back(e.u);
  }
  std::vector<double> cb(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto w : adj[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || dist[t] < 0) continue;
      if (!g.directed && t < s) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (auto w : adj[v])
          if (dist[w] == dist[v] + 1 && dist[w] <= dist[t]) {
            path.push_back(w);
            walk(w);
            path.pop_back();
          }
      };
      walk(s);
      std::vector<std::size_t> through(n, 0);
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.size(); ++k) ++through[p[k]];
      for (std::size_t v = 0; v < n; ++v)
        cb[v] += static_cast<double>(through[v]) / static_cast<double>(paths.size());
    }
  }
  return cb;
}

/// Newman modularity from the dense adjacency matrix.
inline double modularity(const Graph& g, const std::vector<std::size_t>& membership) {
  const auto a = [&] {
    auto m = denseWeights(g);
    if (g.directed)
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) m[i][j] = m[j][i] = m[i][j] + m[j][i];
    return m;
  }();
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += a[i][j];
      two_m += a[i][j];
    }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (membership[i] == membership[j]) q += a[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

/// Largest modularity over every partition of the nodes (restricted growth
/// strings); only usable for a handful of nodes.
inline double bestModularity(const Graph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> m(n, 0);
  double best = -1.0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      best = std::max(best, oracle::modularity(g, m));
      return;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      m[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return 0.0;
  rec(0, 0);
  return best;
}

/// Exact distribution of the removal size produced by one run of the random
/// procedure: repeatedly delete one arc chosen uniformly among the arcs on a
/// directed cycle.  Returns size -> probability.
inline std::map<std::size_t, double> exactRunDistribution(const scimap::mfas::Multigraph& mg) {
  const auto bundles = mg.bundles();
  const std::size_t n = mg.nodes().size();
  std::map<std::vector<std::size_t>, std::map<std::size_t, double>> memo;
  std::function<std::map<std::size_t, double>(const std::vector<std::size_t>&)> go =
      [&](const std::vector<std::size_t>& left) -> std::map<std::size_t, double> {
    if (const auto it = memo.find(left); it != memo.end()) return it->second;
    const auto reaches = [&](std::size_t from, std::size_t to) {
      std::vector<bool> seen(n, false);
      std::vector<std::size_t> stack{from};
      seen[from] = true;
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (std::size_t b = 0; b < bundles.size(); ++b)
          if (left[b] > 0 && bundles[b].u == v && !seen[bundles[b].v]) {
            seen[bundles[b].v] = true;
            stack.push_back(bundles[b].v);
          }
      }
      return false;
    };
    std::size_t on_cycle = 0;
    std::vector<std::size_t> candidates;
    for (std::size_t b = 0; b < bundles.size(); ++b)
      if (left[b] > 0 && reaches(bundles[b].v, bundles[b].u)) {
        on_cycle += left[b];
        candidates.push_back(b);
      }
    std::map<std::size_t, double> out;
    if (on_cycle == 0) {
      out[0] = 1.0;
    } else {
      for (auto b : candidates) {
        auto next = left;
        --next[b];
        const double p = static_cast<double>(left[b]) / static_cast<double>(on_cycle);
        for (const auto& [size, q] : go(next)) out[size + 1] += p * q;
      }
    }
    memo[left] = out;
    return out;
  };
  std::vector<std::size_t> start;
  for (const auto& b : bundles) start.push_back(b.multiplicity);
  return go(start);
}

inline scimap::mfas::Multigraph triangle() {
  scimap::mfas::Multigraph mg;
  mg.addArcs("J", "E", 3);
  mg.addArcs("E", "T", 1);
  mg.addArcs("T", "J", 2);
  return mg;
}

}  // namespace oracle
