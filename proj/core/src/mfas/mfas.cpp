#include "scimap/mfas/mfas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "scimap/error.hpp"
#include "scimap/mfas/rng.hpp"

namespace scimap::mfas {

std::size_t Multigraph::addNode(const std::string& id) {
  const auto [it, inserted] = index_.try_emplace(id, nodes_.size());
  if (inserted) nodes_.push_back(id);
  return it->second;
}

void Multigraph::addArcs(const std::string& u, const std::string& v, std::size_t multiplicity) {
  if (u == v) throw DomainError("loop arc on node " + u);
  if (multiplicity == 0) throw DomainError("zero multiplicity for " + u + " -> " + v);
  const auto a = addNode(u);
  const auto b = addNode(v);
  bundles_[{a, b}] += multiplicity;
}

std::vector<Multigraph::Bundle> Multigraph::bundles() const {
  std::vector<Bundle> out;
  out.reserve(bundles_.size());
  for (const auto& [key, m] : bundles_) out.push_back({key.first, key.second, m});
  return out;
}

std::size_t Multigraph::arcCount() const {
  std::size_t n = 0;
  for (const auto& [key, m] : bundles_) n += m;
  return n;
}

std::optional<std::size_t> Multigraph::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::optional<std::vector<std::size_t>> topo(std::size_t n,
                                             const std::vector<Multigraph::Bundle>& bundles,
                                             const std::vector<std::size_t>& mult) {
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (mult[i] == 0) continue;
    out[bundles[i].u].push_back(bundles[i].v);
    ++indeg[bundles[i].v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto w : out[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::vector<std::size_t> residual(const std::vector<Multigraph::Bundle>& bundles, const Removal& removed) {
  std::vector<std::size_t> mult(bundles.size());
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const auto it = removed.find({bundles[i].u, bundles[i].v});
    const std::size_t r = it == removed.end() ? 0 : it->second;
    mult[i] = bundles[i].multiplicity - std::min(r, bundles[i].multiplicity);
  }
  return mult;
}

// Tarjan's strongly connected components, iterative.
std::vector<std::size_t> components(std::size_t n, const std::vector<Multigraph::Bundle>& bundles,
                                    const std::vector<std::size_t>& mult) {
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < bundles.size(); ++i)
    if (mult[i] > 0) out[bundles[i].u].push_back(bundles[i].v);

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> onStack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  std::size_t ncomp = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge)
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < out[v].size()) {
        const auto w = out[v][next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = true;
          call.emplace_back(w, 0);
        } else if (onStack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          onStack[w] = false;
          comp[w] = ncomp;
        } while (w != done);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) {
        const auto parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

}  // namespace

std::optional<std::vector<std::size_t>> topologicalOrder(const Multigraph& mg, const Removal& removed) {
  const auto bundles = mg.bundles();
  return topo(mg.nodes().size(), bundles, residual(bundles, removed));
}

bool isAcyclic(const Multigraph& mg, const Removal& removed) {
  return topologicalOrder(mg, removed).has_value();
}

McSolution runOnce(const Multigraph& mg, std::uint64_t seed) {
  const auto bundles = mg.bundles();
  const std::size_t n = mg.nodes().size();
  std::vector<std::size_t> mult(bundles.size());
  for (std::size_t i = 0; i < bundles.size(); ++i) mult[i] = bundles[i].multiplicity;

  Rng rng(seed);
  McSolution sol;
  for (;;) {
    const auto comp = components(n, bundles, mult);
    // An arc lies on a cycle exactly when both ends share a component.
    std::uint64_t onCycle = 0;
    for (std::size_t i = 0; i < bundles.size(); ++i)
      if (mult[i] > 0 && comp[bundles[i].u] == comp[bundles[i].v]) onCycle += mult[i];
    if (onCycle == 0) break;
    std::uint64_t pick = rng.below(onCycle);
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      if (mult[i] == 0 || comp[bundles[i].u] != comp[bundles[i].v]) continue;
      if (pick < mult[i]) {
        --mult[i];
        ++sol.removed[{bundles[i].u, bundles[i].v}];
        ++sol.size;
        break;
      }
      pick -= mult[i];
    }
  }
  sol.witness_order = *topo(n, bundles, mult);
  return sol;
}

SolveResult solve(const Multigraph& mg, int t, std::uint64_t seed) {
  if (t < 1) throw DomainError("number of runs must be at least 1, got " + std::to_string(t));
  SolveResult result;
  result.report.runs = t;
  result.report.seed = seed;
  result.report.reference_bound = successLowerBound(t);
  for (int i = 0; i < t; ++i) {
    McSolution s = runOnce(mg, deriveSeed(seed, static_cast<std::uint64_t>(i)));
    result.report.run_sizes.push_back(s.size);
    if (i == 0 || s.size < result.best.size) result.best = std::move(s);
  }
  result.report.best_size = result.best.size;
  return result;
}

long double successLowerBound(int t) {
  if (t < 1) throw DomainError("number of runs must be at least 1, got " + std::to_string(t));
  return 1.0L - std::ldexp(1.0L, -t);
}

std::string successLowerBoundDecimal(int t) {
  if (t < 1) throw DomainError("number of runs must be at least 1, got " + std::to_string(t));
  // 2^-t = 5^t / 10^t, so 1 - 2^-t has exactly t decimals: 10^t - 5^t.
  std::vector<int> five{1};  // little-endian decimal digits of 5^t
  for (int i = 0; i < t; ++i) {
    int carry = 0;
    for (auto& d : five) {
      const int x = d * 5 + carry;
      d = x % 10;
      carry = x / 10;
    }
    while (carry) {
      five.push_back(carry % 10);
      carry /= 10;
    }
  }
  five.resize(static_cast<std::size_t>(t), 0);
  std::string digits(static_cast<std::size_t>(t), '0');
  int borrow = 0;
  for (std::size_t i = 0; i < five.size(); ++i) {
    int x = -five[i] - borrow;
    borrow = 0;
    if (x < 0) {
      x += 10;
      borrow = 1;
    }
    digits[five.size() - 1 - i] = static_cast<char>('0' + x);
  }
  return "0." + digits;
}

BruteForceResult bruteForceOptimum(const Multigraph& mg, std::size_t cap) {
  const std::size_t arcs = mg.arcCount();
  if (arcs > cap)
    throw DomainError("exhaustive search capped at " + std::to_string(cap) + " arcs, graph has " +
                      std::to_string(arcs));
  const auto bundles = mg.bundles();
  const std::size_t n = mg.nodes().size();
  const std::size_t b = bundles.size();
  // Taking part of a bundle never breaks a cycle, so candidate removal sets
  // are sets of whole bundles.  Scan them by cost, then by mask.
  std::vector<std::pair<std::size_t, std::uint32_t>> order;
  order.reserve(std::size_t{1} << b);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << b); ++mask) {
    std::size_t cost = 0;
    for (std::size_t i = 0; i < b; ++i)
      if (mask & (1u << i)) cost += bundles[i].multiplicity;
    order.emplace_back(cost, mask);
  }
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> mult(b);
  for (const auto& [cost, mask] : order) {
    for (std::size_t i = 0; i < b; ++i) mult[i] = (mask & (1u << i)) ? 0 : bundles[i].multiplicity;
    if (!topo(n, bundles, mult)) continue;
    BruteForceResult r;
    r.optimum = cost;
    for (std::size_t i = 0; i < b; ++i)
      if (mask & (1u << i)) r.witness[{bundles[i].u, bundles[i].v}] = bundles[i].multiplicity;
    return r;
  }
  throw Error("no acyclic residual found");  // unreachable: removing everything is acyclic
}

WilsonInterval wilson(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CalibrationReport calibrationHarness(const Multigraph& mg, int t, std::size_t trials,
                                     std::uint64_t seed, double z) {
  if (t < 1) throw DomainError("number of runs must be at least 1, got " + std::to_string(t));
  CalibrationReport rep;
  rep.optimum = bruteForceOptimum(mg).optimum;
  rep.runs = t;
  rep.trials = trials;
  rep.seed = seed;
  std::vector<std::size_t> reached(static_cast<std::size_t>(t), 0);
  for (std::size_t k = 0; k < trials; ++k) {
    TrialRecord rec;
    rec.trial = k;
    rec.seed = deriveSeed(seed, k);
    const auto solved = solve(mg, t, rec.seed);
    rec.best_size = solved.report.best_size;
    for (int r = 0; r < t; ++r) {
      const bool ok = solved.report.run_sizes[static_cast<std::size_t>(r)] == rep.optimum;
      rec.run_optimal.push_back(ok);
      if (ok) {
        ++rep.optimal_runs;
        if (!rec.first_optimal_run) rec.first_optimal_run = r + 1;
      }
      if (rec.first_optimal_run) ++reached[static_cast<std::size_t>(r)];
    }
    rep.total_runs += static_cast<std::size_t>(t);
    rep.records.push_back(std::move(rec));
  }
  for (int r = 0; r < t; ++r) {
    rep.empirical_curve.push_back(
        trials == 0 ? 0.0 : static_cast<double>(reached[static_cast<std::size_t>(r)]) / static_cast<double>(trials));
    rep.theoretical_curve.push_back(successLowerBound(r + 1));
  }
  rep.per_run_rate =
      rep.total_runs == 0 ? 0.0 : static_cast<double>(rep.optimal_runs) / static_cast<double>(rep.total_runs);
  rep.per_run_interval = wilson(rep.optimal_runs, rep.total_runs, z);
  return rep;
}

}  // namespace scimap::mfas
