#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scimap::mfas {

/// Directed multigraph without loops.  Parallel arcs are stored as one bundle
/// with a multiplicity.
class Multigraph {
 public:
  struct Bundle {
    std::size_t u = 0;
    std::size_t v = 0;
    std::size_t multiplicity = 0;
  };

  std::size_t addNode(const std::string& id);
  /// Adds `multiplicity` parallel arcs u -> v.  Throws DomainError on a loop
  /// or a zero multiplicity.
  void addArcs(const std::string& u, const std::string& v, std::size_t multiplicity = 1);

  const std::vector<std::string>& nodes() const { return nodes_; }
  /// Ordered by (u, v) node index.
  std::vector<Bundle> bundles() const;
  std::size_t arcCount() const;
  std::optional<std::size_t> find(const std::string& id) const;

 private:
  std::vector<std::string> nodes_;
  std::map<std::string, std::size_t> index_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> bundles_;
};

/// (u, v) -> number of arcs taken out of that bundle.
using Removal = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

struct McSolution {
  Removal removed;
  std::size_t size = 0;
  /// Topological order of the residual graph.
  std::vector<std::size_t> witness_order;
};

/// Topological order (smallest index first among ready nodes) or nullopt when
/// a directed cycle exists.  Multiplicities do not matter.
std::optional<std::vector<std::size_t>> topologicalOrder(const Multigraph& mg,
                                                         const Removal& removed = {});
bool isAcyclic(const Multigraph& mg, const Removal& removed = {});

/// Removes arcs one at a time, each drawn uniformly among the arcs that
/// currently lie on a directed cycle, until none is left.
McSolution runOnce(const Multigraph& mg, std::uint64_t seed);

struct ConfidenceReport {
  int runs = 0;
  std::size_t best_size = 0;
  long double reference_bound = 0.0L;
  std::optional<double> empirical_success_rate;
  std::uint64_t seed = 0;
  std::vector<std::size_t> run_sizes;
};

struct SolveResult {
  McSolution best;
  ConfidenceReport report;
};

/// Best of `t` runs; run i uses deriveSeed(seed, i).  Throws DomainError when
/// t < 1.
SolveResult solve(const Multigraph& mg, int t, std::uint64_t seed);

/// 1 - 2^-t.  Throws DomainError when t < 1.
long double successLowerBound(int t);
/// Exact decimal expansion of 1 - 2^-t.
std::string successLowerBoundDecimal(int t);

struct BruteForceResult {
  std::size_t optimum = 0;
  Removal witness;
};

inline constexpr std::size_t kBruteForceCap = 20;

/// Exhaustive search in increasing removal size.  Throws DomainError when the
/// arc count exceeds `cap`.
BruteForceResult bruteForceOptimum(const Multigraph& mg, std::size_t cap = kBruteForceCap);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
WilsonInterval wilson(std::size_t successes, std::size_t n, double z);

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<bool> run_optimal;
  std::size_t best_size = 0;
  /// 1-based run index of the first optimal run.
  std::optional<int> first_optimal_run;
};

struct CalibrationReport {
  std::size_t optimum = 0;
  int runs = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  /// Entry r-1: share of trials whose best of the first r runs is optimal.
  std::vector<double> empirical_curve;
  std::vector<long double> theoretical_curve;
  std::size_t optimal_runs = 0;
  std::size_t total_runs = 0;
  double per_run_rate = 0.0;
  WilsonInterval per_run_interval;
};

/// `trials` independent best-of-t solves scored against the exhaustive
/// optimum.  Trial i uses deriveSeed(seed, i) as its solve seed.
CalibrationReport calibrationHarness(const Multigraph& mg, int t, std::size_t trials,
                                     std::uint64_t seed, double z = kZ99);

}  // namespace scimap::mfas
