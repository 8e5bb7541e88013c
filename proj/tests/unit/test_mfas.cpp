#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scimap/error.hpp"
#include "scimap/mfas/mfas.hpp"
#include "scimap/mfas/rng.hpp"

using namespace scimap;
using namespace scimap::mfas;

namespace {

Multigraph randomMultigraph(std::mt19937_64& gen, std::size_t nodes, std::size_t max_arcs) {
  Multigraph mg;
  for (std::size_t i = 0; i < nodes; ++i) mg.addNode("n" + std::to_string(i));
  std::size_t arcs = 0;
  while (arcs < max_arcs) {
    const auto u = gen() % nodes;
    const auto v = gen() % nodes;
    if (u == v) continue;
    const std::size_t m = 1 + gen() % 3;
    if (arcs + m > max_arcs) break;
    mg.addArcs("n" + std::to_string(u), "n" + std::to_string(v), m);
    arcs += m;
  }
  return mg;
}

Multigraph residual(const Multigraph& mg, const Removal& removed) {
  Multigraph r;
  for (const auto& n : mg.nodes()) r.addNode(n);
  for (const auto& b : mg.bundles()) {
    const auto it = removed.find({b.u, b.v});
    const std::size_t left = b.multiplicity - (it == removed.end() ? 0 : it->second);
    if (left > 0) r.addArcs(mg.nodes()[b.u], mg.nodes()[b.v], left);
  }
  return r;
}

}  // namespace

TEST_CASE("multigraph bundles") {
  Multigraph mg;
  mg.addArcs("a", "b", 2);
  mg.addArcs("a", "b");
  CHECK(mg.arcCount() == 3);
  REQUIRE(mg.bundles().size() == 1);
  CHECK(mg.bundles()[0].multiplicity == 3);
  CHECK_THROWS_AS(mg.addArcs("a", "a"), DomainError);
  CHECK_THROWS_AS(mg.addArcs("a", "b", 0), DomainError);
}

TEST_CASE("acyclicity") {
  CHECK_FALSE(isAcyclic(oracle::triangle()));
  CHECK(isAcyclic(Multigraph{}));
  Multigraph two;
  two.addArcs("a", "b");
  two.addArcs("b", "a");
  CHECK_FALSE(isAcyclic(two));
  Multigraph chain;
  chain.addArcs("a", "b");
  chain.addArcs("b", "c");
  CHECK(topologicalOrder(chain) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("one run on the triangle is optimal with probability exactly one sixth") {
  const auto dist = oracle::exactRunDistribution(oracle::triangle());
  CHECK(dist.at(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  double total = 0.0;
  for (const auto& [size, p] : dist) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("runOnce matches the exact run distribution") {
  const auto mg = oracle::triangle();
  const auto dist = oracle::exactRunDistribution(mg);
  std::map<std::size_t, std::size_t> seen;
  const std::size_t n = 60000;
  for (std::size_t i = 0; i < n; ++i) ++seen[runOnce(mg, deriveSeed(99, i)).size];
  for (const auto& [size, p] : dist) {
    const double sd = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(seen[size]) / static_cast<double>(n) - p) < 5 * sd + 1e-12);
  }
}

TEST_CASE("runOnce soundness and determinism") {
  CHECK(runOnce(Multigraph{}, 1).size == 0);
  Multigraph chain;
  chain.addArcs("a", "b", 3);
  chain.addArcs("b", "c");
  CHECK(runOnce(chain, 5).removed.empty());

  std::mt19937_64 gen(12);
  for (int round = 0; round < 300; ++round) {
    const auto mg = randomMultigraph(gen, 2 + gen() % 5, 12);
    const auto seed = gen();
    const auto s = runOnce(mg, seed);
    std::size_t total = 0;
    for (const auto& [bundle, k] : s.removed) total += k;
    CHECK(total == s.size);
    CHECK(isAcyclic(mg, s.removed));
    CHECK(isAcyclic(residual(mg, s.removed)));
    const auto again = runOnce(mg, seed);
    CHECK(again.removed == s.removed);
    CHECK(again.witness_order == s.witness_order);
  }
}

TEST_CASE("reference bound") {
  CHECK(successLowerBound(1) == 0.5L);
  CHECK(successLowerBound(10) == 0.9990234375L);
  CHECK(successLowerBoundDecimal(1) == "0.5");
  CHECK(successLowerBoundDecimal(10) == "0.9990234375");
  CHECK(successLowerBoundDecimal(20) == "0.99999904632568359375");
  for (int t = 1; t < 60; ++t) {
    CHECK(successLowerBound(t + 1) > successLowerBound(t));
    CHECK(successLowerBound(t) < 1.0L);
  }
  CHECK_THROWS_AS(successLowerBound(0), DomainError);
  CHECK_THROWS_AS(solve(oracle::triangle(), 0, 1), DomainError);
}

TEST_CASE("brute-force optimum") {
  const auto tri = bruteForceOptimum(oracle::triangle());
  CHECK(tri.optimum == 1);
  REQUIRE(tri.witness.size() == 1);
  const auto mg = oracle::triangle();
  const auto [u, v] = tri.witness.begin()->first;
  CHECK(mg.nodes()[u] == "E");
  CHECK(mg.nodes()[v] == "T");

  Multigraph chain;
  chain.addArcs("a", "b");
  CHECK(bruteForceOptimum(chain).optimum == 0);
  Multigraph two;
  two.addArcs("a", "b");
  two.addArcs("b", "a");
  CHECK(bruteForceOptimum(two).optimum == 1);
  Multigraph big;
  big.addArcs("a", "b", 21);
  CHECK_THROWS_AS(bruteForceOptimum(big), DomainError);
}

TEST_CASE("solve dominance with prefix-shared seeds") {
  std::mt19937_64 gen(31);
  for (int round = 0; round < 100; ++round) {
    const auto mg = randomMultigraph(gen, 3 + gen() % 4, 12);
    const auto seed = gen();
    const auto small = solve(mg, 5, seed);
    const auto large = solve(mg, 12, seed);
    CHECK(large.best.size <= small.best.size);
    for (std::size_t i = 0; i < 5; ++i) CHECK(large.report.run_sizes[i] == small.report.run_sizes[i]);
    CHECK(isAcyclic(mg, large.best.removed));
  }
}

TEST_CASE("best of fifty meets the oracle on small instances") {
  std::mt19937_64 gen(4);
  for (int inst = 0; inst < 8; ++inst) {
    const auto mg = randomMultigraph(gen, 3 + gen() % 3, 12);
    const auto opt = bruteForceOptimum(mg).optimum;
    const auto dist = oracle::exactRunDistribution(mg);
    const double p = dist.count(opt) ? dist.at(opt) : 0.0;
    CHECK(p > 0.0);
    std::size_t hits = 0;
    for (std::size_t trial = 0; trial < 200; ++trial) hits += solve(mg, 50, deriveSeed(1000 + static_cast<std::uint64_t>(inst), trial)).best.size == opt;
    // Expected misses are 200 * (1 - p)^50; allow a generous Poisson tail.
    const double expected_miss = 200.0 * std::pow(1.0 - p, 50);
    CHECK(static_cast<double>(200 - hits) <= expected_miss + 4.0 * std::sqrt(expected_miss) + 2.0);
  }
}

TEST_CASE("wilson interval") {
  const auto w = wilson(50, 100, kZ99);
  CHECK(w.lower < 0.5);
  CHECK(w.upper > 0.5);
  CHECK(w.lower == doctest::Approx(0.3753).epsilon(1e-3));
  const auto zero = wilson(0, 10, kZ99);
  CHECK(zero.lower == 0.0);
}

TEST_CASE("calibration on an acyclic graph is trivially optimal") {
  Multigraph chain;
  chain.addArcs("a", "b");
  const auto rep = calibrationHarness(chain, 5, 20, 3);
  for (double v : rep.empirical_curve) CHECK(v == 1.0);
  CHECK(rep.per_run_rate == 1.0);
}

TEST_CASE("calibration on an instance with one-half per-run success") {
  Multigraph mg;
  mg.addArcs("a", "b", 1);
  mg.addArcs("b", "c", 1);
  mg.addArcs("c", "a", 2);
  CHECK(oracle::exactRunDistribution(mg).at(1) == doctest::Approx(0.5));
  const auto rep = calibrationHarness(mg, 10, 1000, 17);
  const double per_trial = static_cast<double>(rep.optimal_runs) / static_cast<double>(rep.trials);
  CHECK(std::abs(per_trial - 5.0) < 0.3);
  CHECK(rep.per_run_interval.lower <= 0.5);
  CHECK(rep.per_run_interval.upper >= 0.5);
}

TEST_CASE("rng streams") {
  CHECK(deriveSeed(1, 0) != deriveSeed(1, 1));
  CHECK(deriveSeed(1, 0) != deriveSeed(2, 0));
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng r(8);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) ++hist[r.below(6)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  CHECK_THROWS_AS(r.below(0), DomainError);
}
