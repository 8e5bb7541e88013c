#include <doctest.h>

#include <random>
#include <sstream>

#include "builders.hpp"
#include "scimap/error.hpp"
#include "scimap/io/corpus_io.hpp"
#include "scimap/io/graph_io.hpp"
#include "scimap/io/table.hpp"
#include "scimap/mapping/centrality.hpp"

using namespace scimap;
using namespace scimap::io;
using build::Doc;

namespace {

std::string render(const Table& t, const ArtifactHeader& h = {}) {
  std::ostringstream ss;
  writeTable(ss, t, h);
  return ss.str();
}

mapping::Graph cycle3(bool directed) {
  mapping::GraphBuilder b(directed);
  for (const char* id : {"a", "b", "c"}) b.addNode(id, std::string("label ") + id, 2);
  b.addEdge("a", "b", 1.5);
  b.addEdge("b", "c", 2);
  b.addEdge("c", "a", 3);
  return b.build();
}

}  // namespace

TEST_CASE("tables quote and round trip") {
  Table t;
  t.columns = {"name", "value"};
  CHECK(render(t) == "name,value\r\n");
  t.addRow({"plain", "1"});
  t.addRow({"with, comma", "say \"hi\""});
  t.addRow({"multi\nline", ""});
  ArtifactHeader h;
  h.add("engine", "x");
  const auto text = render(t, h);
  CHECK(text.find("\"with, comma\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(text.rfind("# engine: x\r\n", 0) == 0);
  ArtifactHeader back;
  const auto parsed = readTable(text, "t.csv", &back);
  CHECK(parsed.columns == t.columns);
  CHECK(parsed.rows == t.rows);
  REQUIRE(back.entries.size() == 1);
  CHECK(back.entries[0].second == "x");
  CHECK(render(t, h) == text);

  Table ragged;
  ragged.columns = {"a"};
  ragged.addRow({"1", "2"});
  CHECK_THROWS_AS(render(ragged), DomainError);
  CHECK_THROWS_AS(readTable("a,b\r\n\"open,1\r\n"), ParseError);
}

TEST_CASE("random fields survive quoting") {
  std::mt19937_64 gen(6);
  const std::string alphabet = "ab,\"\n\r x#";
  for (int round = 0; round < 500; ++round) {
    Table t;
    t.columns = {"c1", "c2", "c3"};
    for (int r = 0; r < 4; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < 3; ++c) {
        std::string f;
        const auto n = gen() % 6;
        for (std::size_t k = 0; k < n; ++k) f.push_back(alphabet[gen() % alphabet.size()]);
        row.push_back(f);
      }
      // A lone "#" at the start of a row would read back as a comment line.
      if (!row[0].empty() && row[0][0] == '#') row[0] = "x" + row[0];
      t.addRow(row);
    }
    const auto back = readTable(render(t));
    CHECK(back.rows == t.rows);
  }
}

TEST_CASE("graph export counts and clusters") {
  for (auto flavor : {GraphFlavor::GraphML, GraphFlavor::Dot}) {
    const auto g = cycle3(true);
    const auto c = mapping::walktrap(cycle3(false));
    const auto text = writeGraph(g, &c, flavor);
    const auto back = flavor == GraphFlavor::GraphML ? readGraphml(text) : readDot(text);
    CHECK(back.graph.nodes.size() == 3);
    CHECK(back.graph.edges.size() == 3);
    CHECK(back.graph.directed);
    REQUIRE(back.clusters.has_value());
    CHECK(back.clusters->size() == 3);
  }
}

TEST_CASE("graph round trip preserves weights and labels") {
  std::mt19937_64 gen(10);
  for (int round = 0; round < 50; ++round) {
    mapping::GraphBuilder b(round % 2 == 0);
    const std::size_t n = 1 + gen() % 8;
    for (std::size_t i = 0; i < n; ++i) b.addNode("id \"" + std::to_string(i) + "\" <&>", "L" + std::to_string(i), static_cast<double>(gen() % 9) / 4);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && gen() % 3 == 0)
          b.addEdge("id \"" + std::to_string(i) + "\" <&>", "id \"" + std::to_string(j) + "\" <&>", static_cast<double>(gen() % 100) / 7);
    const auto g = b.build();
    for (auto flavor : {GraphFlavor::GraphML, GraphFlavor::Dot}) {
      const auto text = writeGraph(g, nullptr, flavor);
      const auto back = flavor == GraphFlavor::GraphML ? readGraphml(text) : readDot(text);
      REQUIRE(back.graph.nodes.size() == g.nodes.size());
      REQUIRE(back.graph.edges.size() == g.edges.size());
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        CHECK(back.graph.nodes[i].id == g.nodes[i].id);
        CHECK(back.graph.nodes[i].label == g.nodes[i].label);
        CHECK(back.graph.nodes[i].weight == g.nodes[i].weight);
      }
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        CHECK(back.graph.edges[i].u == g.edges[i].u);
        CHECK(back.graph.edges[i].v == g.edges[i].v);
        CHECK(back.graph.edges[i].weight == g.edges[i].weight);
      }
    }
  }
  CHECK_THROWS_AS(readGraphml("<not graphml"), ParseError);
  CHECK_THROWS_AS(readDot("strict nonsense"), ParseError);
}

TEST_CASE("corpus file round trip") {
  const auto c = ingest::Corpus(
      {Doc("a").year(2001).tc(3).authors({"DOE, J"}).title("T, with comma").de({"x"}).cites("ALTMAN EI, 1968, J FINANC, V23, P589"),
       Doc("b").year(std::nullopt).doi("10.1/b").abstract("text")},
      2022, {"file.txt@0000 plaintext records=2"},
      {ingest::ScreeningEntry{"c", "duplicate-doi", "b", "file.txt", 2}});
  const auto text = saveCorpus(c, 2022);
  const auto back = loadCorpus(text);
  REQUIRE(back.size() == 2);
  CHECK(back.referenceYear() == 2022);
  CHECK(back.provenance() == c.provenance());
  REQUIRE(back.screening().size() == 1);
  CHECK(back.screening()[0].kept_id == "b");
  CHECK(back.documents()[0].cited_refs == c.documents()[0].cited_refs);
  CHECK(back.documents()[0].title == "T, with comma");
  CHECK_FALSE(back.documents()[1].pub_year.has_value());
  CHECK(saveCorpus(back, 2022) == text);
  CHECK_THROWS_AS(loadCorpus("{\"schema\":\"other\"}\n"), ParseError);
}

TEST_CASE("multigraph file") {
  const auto mg = readMultigraph("# comment\nJ E 3\nE,T\n\nT J 2\n");
  CHECK(mg.arcCount() == 6);
  CHECK_THROWS_AS(readMultigraph("A A 1\n"), Error);
  CHECK_THROWS_AS(readMultigraph("A B x\n"), ParseError);
}

TEST_CASE("fnv hash is stable") {
  CHECK(fnv1a64Hex("") == "cbf29ce484222325");
  CHECK(fnv1a64Hex("a") == "af63dc4c8601ec8c");
}
