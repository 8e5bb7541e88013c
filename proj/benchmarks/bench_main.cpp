#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "scimap/ingest/record.hpp"
#include "scimap/mapping/centrality.hpp"
#include "scimap/mapping/graph.hpp"
#include "scimap/mfas/mfas.hpp"

namespace {

using namespace scimap;

mapping::Graph randomGraph(std::size_t n, double density, bool directed) {
  std::mt19937_64 gen(42);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<int> w(1, 5);
  mapping::GraphBuilder b(directed);
  for (std::size_t i = 0; i < n; ++i) b.addNode("n" + std::to_string(i), "", 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j)
      if (i != j && coin(gen)) b.addEdge("n" + std::to_string(i), "n" + std::to_string(j), w(gen));
  return b.build();
}

mfas::Multigraph randomMultigraph(std::size_t n, double density) {
  std::mt19937_64 gen(7);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::size_t> mult(1, 3);
  mfas::Multigraph mg;
  for (std::size_t i = 0; i < n; ++i) mg.addNode("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && coin(gen)) mg.addArcs("v" + std::to_string(i), "v" + std::to_string(j), mult(gen));
  return mg;
}

void BM_Pagerank(benchmark::State& state) {
  const auto g = randomGraph(static_cast<std::size_t>(state.range(0)), 0.05, true);
  for (auto _ : state) benchmark::DoNotOptimize(mapping::pagerank(g));
}
BENCHMARK(BM_Pagerank)->Arg(200)->Arg(1000);

void BM_Betweenness(benchmark::State& state) {
  const auto g = randomGraph(static_cast<std::size_t>(state.range(0)), 0.05, false);
  for (auto _ : state) benchmark::DoNotOptimize(mapping::betweenness(g));
}
BENCHMARK(BM_Betweenness)->Arg(200)->Arg(1000);

void BM_Walktrap(benchmark::State& state) {
  const auto g = randomGraph(static_cast<std::size_t>(state.range(0)), 0.1, false);
  for (auto _ : state) benchmark::DoNotOptimize(mapping::walktrap(g));
}
BENCHMARK(BM_Walktrap)->Arg(50)->Arg(200);

void BM_MfasRunOnce(benchmark::State& state) {
  const auto mg = randomMultigraph(static_cast<std::size_t>(state.range(0)), 0.2);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mfas::runOnce(mg, seed++));
}
BENCHMARK(BM_MfasRunOnce)->Arg(10)->Arg(40);

void BM_ParsePlaintext(benchmark::State& state) {
  std::ifstream in(std::string(SCIMAP_FIXTURES) + "/sample_wos.txt", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string one = ss.str();
  // Repeat the record block between the header and the end-of-file marker.
  const auto start = one.find("\nPT ") + 1;
  const auto stop = one.rfind("\nEF");
  std::string bytes = one.substr(0, start);
  for (int i = 0; i < state.range(0); ++i) bytes += one.substr(start, stop + 1 - start);
  bytes += "EF\n";
  for (auto _ : state) benchmark::DoNotOptimize(ingest::parsePlaintextExport(bytes, "bench.txt"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_ParsePlaintext)->Arg(1)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
