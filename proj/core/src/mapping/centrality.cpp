#include "scimap/mapping/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::mapping {

std::vector<double> pagerank(const Graph& g, const PageRankOptions& options) {
  const std::size_t n = g.nodes.size();
  if (n == 0) throw DomainError("pagerank of an empty graph");
  const auto adj = g.adjacency();
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, w] : adj[i]) out_weight[i] += w;

  const double nd = static_cast<double>(n);
  std::vector<double> x(n, 1.0 / nd);
  std::vector<double> next(n);
  double residual = 0.0;
  for (int it = 0; it < options.max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (out_weight[i] <= 0.0) dangling += x[i];
    const double base = (1.0 - options.damping) / nd + options.damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] <= 0.0) continue;
      const double share = options.damping * x[i] / out_weight[i];
      for (const auto& [j, w] : adj[i]) next[j] += share * w;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - x[i]);
    x.swap(next);
    if (residual < options.tolerance) return x;
  }
  throw Error("pagerank did not converge in " + std::to_string(options.max_iter) +
              " iterations (residual " + text::shortest(residual) + ")");
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  const auto weighted = g.adjacency();
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, w] : weighted[i]) adj[i].push_back(j);

  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<std::size_t>> pred(n);
  std::vector<double> sigma(n);
  std::vector<long long> dist(n);
  std::vector<double> delta(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& p : pred) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::vector<std::size_t> order;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      order.push_back(v);
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  if (!g.directed)
    for (auto& c : cb) c /= 2.0;
  return cb;
}

namespace {

// One community during agglomeration.  `walk` is the averaged t-step
// transition row of its members.
struct Community {
  std::size_t size = 0;
  std::vector<double> walk;
  std::map<std::size_t, double> delta;  // neighbour community -> delta sigma
  bool alive = true;
};

struct Candidate {
  double delta;
  std::size_t a;
  std::size_t b;
  bool operator>(const Candidate& o) const {
    if (delta != o.delta) return delta > o.delta;
    if (a != o.a) return a > o.a;
    return b > o.b;
  }
};

}  // namespace

Clustering walktrap(const Graph& g, int walk_length) {
  const std::size_t n = g.nodes.size();
  Clustering result;
  if (n < 2) {
    result.membership.assign(n, 0);
    result.cluster_count = n;
    result.modularity = modularity(g, result.membership);
    return result;
  }
  if (walk_length < 1) throw DomainError("walk length must be at least 1");

  // Undirected view with one self-loop per vertex carrying the vertex's mean
  // incident weight (1 for isolated vertices).
  std::vector<std::map<std::size_t, double>> nb(n);
  for (const auto& e : g.edges) {
    nb[e.u][e.v] += e.weight;
    nb[e.v][e.u] += e.weight;
  }
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (const auto& [j, w] : nb[i]) total += w;
    const double loop = nb[i].empty() ? 1.0 : total / static_cast<double>(nb[i].size());
    nb[i][i] += loop;
    d[i] = total + loop;
  }

  std::vector<Community> comm(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    std::vector<double> next(n);
    for (int step = 0; step < walk_length; ++step) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (row[k] == 0.0) continue;
        const double share = row[k] / d[k];
        for (const auto& [j, w] : nb[k]) next[j] += share * w;
      }
      row.swap(next);
    }
    comm[i].size = 1;
    comm[i].walk = std::move(row);
  }

  const double nd = static_cast<double>(n);
  const auto sigma = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    const auto& pa = comm[a].walk;
    const auto& pb = comm[b].walk;
    for (std::size_t k = 0; k < n; ++k) {
      const double diff = pa[k] - pb[k];
      s += diff * diff / d[k];
    }
    const double sa = static_cast<double>(comm[a].size);
    const double sb = static_cast<double>(comm[b].size);
    return sa * sb / (sa + sb) * s / nd;
  };

  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  for (const auto& e : g.edges) {
    if (comm[e.u].delta.count(e.v)) continue;
    const double ds = sigma(e.u, e.v);
    comm[e.u].delta[e.v] = ds;
    comm[e.v].delta[e.u] = ds;
    heap.push({ds, std::min(e.u, e.v), std::max(e.u, e.v)});
  }

  // Union-find style owner per original vertex, recorded per stage.
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i;
  std::vector<std::size_t> best = owner;
  double bestQ = modularity(g, [&] {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return m;
  }());

  std::vector<std::vector<std::size_t>> members(2 * n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  // Running modularity pieces per community, on the original graph.
  double m = 0.0;
  for (const auto& e : g.edges) m += e.weight;
  std::vector<double> inside(2 * n, 0.0);
  std::vector<double> degree(2 * n, 0.0);
  for (const auto& e : g.edges) {
    degree[e.u] += e.weight;
    degree[e.v] += e.weight;
  }
  std::vector<std::map<std::size_t, double>> between(2 * n);
  for (const auto& e : g.edges) {
    between[e.u][e.v] += e.weight;
    between[e.v][e.u] += e.weight;
  }
  double q = bestQ;

  std::size_t nextId = n;
  while (!heap.empty()) {
    const Candidate c = heap.top();
    heap.pop();
    if (!comm[c.a].alive || !comm[c.b].alive) continue;
    const auto stale = comm[c.a].delta.find(c.b);
    if (stale == comm[c.a].delta.end() || stale->second != c.delta) continue;

    const std::size_t a = c.a;
    const std::size_t b = c.b;
    const std::size_t merged = nextId++;
    Community& ca = comm[a];
    Community& cb = comm[b];
    Community& cm = comm[merged];
    cm.size = ca.size + cb.size;
    cm.walk.resize(n);
    const double wa = static_cast<double>(ca.size) / static_cast<double>(cm.size);
    const double wb = static_cast<double>(cb.size) / static_cast<double>(cm.size);
    for (std::size_t k = 0; k < n; ++k) cm.walk[k] = wa * ca.walk[k] + wb * cb.walk[k];

    // Modularity bookkeeping.
    if (m > 0.0) {
      const double ab = between[a].count(b) ? between[a][b] : 0.0;
      const double before = inside[a] / m - std::pow(degree[a] / (2 * m), 2) + inside[b] / m -
                            std::pow(degree[b] / (2 * m), 2);
      inside[merged] = inside[a] + inside[b] + ab;
      degree[merged] = degree[a] + degree[b];
      q += inside[merged] / m - std::pow(degree[merged] / (2 * m), 2) - before;
      for (auto src : {a, b})
        for (const auto& [other, w] : between[src]) {
          if (other == a || other == b) continue;
          between[merged][other] += w;
          auto& back = between[other];
          back.erase(src);
          back[merged] += w;
        }
      between[a].clear();
      between[b].clear();
    }

    // New delta sigma to every neighbour of either side.
    std::map<std::size_t, double> neighbours;
    for (const auto& [other, ds] : ca.delta)
      if (other != b) neighbours[other];
    for (const auto& [other, ds] : cb.delta)
      if (other != a) neighbours[other];
    const double dab = c.delta;
    for (auto& [other, value] : neighbours) {
      const auto ia = ca.delta.find(other);
      const auto ib = cb.delta.find(other);
      if (ia != ca.delta.end() && ib != cb.delta.end()) {
        const double sa = static_cast<double>(ca.size);
        const double sb = static_cast<double>(cb.size);
        const double so = static_cast<double>(comm[other].size);
        value = ((sa + so) * ia->second + (sb + so) * ib->second - so * dab) / (sa + sb + so);
      } else {
        value = sigma(merged, other);
      }
    }
    for (auto& [other, ds] : ca.delta) comm[other].delta.erase(a);
    for (auto& [other, ds] : cb.delta) comm[other].delta.erase(b);
    ca.delta.clear();
    cb.delta.clear();
    ca.alive = false;
    cb.alive = false;
    ca.walk.clear();
    cb.walk.clear();
    for (const auto& [other, value] : neighbours) {
      cm.delta[other] = value;
      comm[other].delta[merged] = value;
      heap.push({value, std::min(merged, other), std::max(merged, other)});
    }

    members[merged] = std::move(members[a]);
    members[merged].insert(members[merged].end(), members[b].begin(), members[b].end());
    members[b].clear();
    for (auto v : members[merged]) owner[v] = merged;

    if (q > bestQ + 1e-12) {
      bestQ = q;
      best = owner;
    }
  }

  // Renumber clusters by first appearance in node order.
  std::map<std::size_t, std::size_t> renumber;
  result.membership.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, inserted] = renumber.try_emplace(best[i], renumber.size());
    result.membership[i] = it->second;
  }
  result.cluster_count = renumber.size();
  result.modularity = modularity(g, result.membership);
  return result;
}

}  // namespace scimap::mapping
