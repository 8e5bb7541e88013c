#include <doctest.h>

#include <random>
#include <string>

#include "scimap/error.hpp"
#include "scimap/ingest/corpus.hpp"
#include "scimap/ingest/document.hpp"
#include "scimap/ingest/record.hpp"
#include "scimap/io/table.hpp"
#include "scimap/text.hpp"

using namespace scimap;
using namespace scimap::ingest;

namespace {

std::string fixture(const std::string& name) { return io::readFile(std::string(SCIMAP_FIXTURES) + "/" + name); }

Document doc(const std::string& id, std::optional<std::string> doi, long long tc, const std::string& title = "T",
             int year = 2010) {
  Document d;
  d.id = id;
  d.doi = std::move(doi);
  d.total_citations = tc;
  d.title = title;
  d.pub_year = year;
  d.source = "S";
  return d;
}

}  // namespace

TEST_CASE("plaintext continuation lines belong to the open tag") {
  const std::string bytes =
      "FN x\nVR 1.0\nPT J\nAU A, B\nCR ONE A, 2001, X\n   TWO B, 2002, Y\n   THREE C, 2003, Z\n   FOUR D, 2004, W\n"
      "NR 4\nER\nEF\n";
  const auto recs = parsePlaintextExport(bytes, "f.txt");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].values("CR").size() == 4);
}

TEST_CASE("a three-line CR block yields three values") {
  const std::string bytes = "PT J\nCR R1, 2001, X\n   R2, 2002, Y\n   R3, 2003, Z\nER\n";
  const auto recs = parsePlaintextExport(bytes);
  CHECK(recs.at(0).values("CR").size() == 3);
}

TEST_CASE("minimal record and empty export") {
  const auto recs = parsePlaintextExport("FN x\nVR 1.0\nPT J\nAU A, B\nTI t\nSO s\nPY 2001\nTC 3\nER\nEF\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].tagCount() == 6);
  CHECK(parsePlaintextExport("FN x\nVR 1.0\nEF\n").empty());
  CHECK(parsePlaintextExport("\xEF\xBB\xBF" "FN x\nPT J\nER\n").size() == 1);
}

TEST_CASE("BibTeX times-cited maps to TC and a missing abstract stays absent") {
  const auto recs = parseBibtexExport("@article{k,\n Times-Cited = {187},\n Title = {x},\n}\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].joined("TC") == "187");
  CHECK_FALSE(recs[0].has("AB"));
}

TEST_CASE("unterminated plaintext record is a positioned parse error") {
  try {
    parsePlaintextExport("PT J\nAU A, B\nER\nPT J\nTI never closed\n", "cut.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file() == "cut.txt");
    CHECK(e.recordIndex().has_value());
  }
}

TEST_CASE("BibTeX cited references are split on the separator") {
  const std::string bytes =
      "@article{k1,\n  Author = {Doe, John and Roe, Jane},\n  Title = {A {Nested} title},\n  Year = {2019},\n"
      "  Cited-References = {ALTMAN EI, 1968, J FINANC\n   OHLSON JA, 1980, J ACCOUNTING RES},\n}\n";
  const auto recs = parseBibtexExport(bytes, "x.bib");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].values("CR").size() == 2);
  CHECK(recs[0].values("AU").size() == 2);

  BibtexOptions semi;
  semi.reference_separator = ";";
  const auto recs2 = parseBibtexExport("@article{k,\n Cited-References = {A X, 2001, S; B Y, 2002, T},\n}\n", "y.bib", semi);
  CHECK(recs2.at(0).values("CR").size() == 2);
}

TEST_CASE("unbalanced BibTeX braces report a byte offset") {
  try {
    parseBibtexExport("@article{k,\n Title = {open\n", "b.bib");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.byteOffset().has_value());
  }
}

TEST_CASE("NR disagreeing with the parsed CR count is flagged and both kept") {
  std::string bytes = "PT J\nAU A, B\nCR R1, 2001, X\n";
  for (int i = 2; i <= 31; ++i) bytes += "   R" + std::to_string(i) + ", 2001, X\n";
  bytes += "NR 33\nPY 2010\nER\n";
  const auto d = toDocument(parsePlaintextExport(bytes).at(0), 2023);
  CHECK(d.cited_refs.size() == 31);
  CHECK(d.ref_count == 33);
  CHECK(d.hasFlag("NR-CR-mismatch"));
}

TEST_CASE("cited reference shapes") {
  const auto r = parseCitedReference("KUMAR PR, 2007, EUR J OPER RES, V180, P1, DOI 10.1016/j.ejor.2006.08.043");
  CHECK(r.first_author == "KUMAR, PR");
  CHECK(r.year == 2007);
  CHECK(r.source == "EUR J OPER RES");
  CHECK(r.volume == "V180");
  CHECK(r.page == "P1");
  CHECK(r.doi == "10.1016/j.ejor.2006.08.043");

  const auto a = parseCitedReference("ALTMAN EI, 1968, J FINANC, V23, P589");
  CHECK(a.first_author == "ALTMAN, EI");
  CHECK(a.year == 1968);
  CHECK(a.source == "J FINANC");
  CHECK(a.volume == "V23");
  CHECK(a.page == "P589");
  const auto empty = parseCitedReference("");
  CHECK(empty.raw.empty());
  CHECK_FALSE(empty.first_author.has_value());
  CHECK_FALSE(empty.year.has_value());

  const auto u = parseCitedReference("SOMEBODY A, 20XX, VENUE");
  CHECK_FALSE(u.year.has_value());
  CHECK(u.first_author.has_value());
  CHECK(u.source == "VENUE");

  const auto future = parseCitedReference("AHEAD B, 2031, J X", 2023);
  CHECK_FALSE(future.year.has_value());
}

TEST_CASE("author names normalize idempotently") {
  CHECK(normalizeAuthorName("Tsai, Chih-Fong") == "TSAI, CF");
  CHECK(normalizeAuthorName("SHIN KS") == "SHIN, KS");
  CHECK(normalizeAuthorName("Müller, Hans") == "MULLER, H");
  CHECK_THROWS_AS(normalizeAuthorName("   "), Error);

  std::mt19937_64 gen(11);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ ,.-'";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 24);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = len(gen);
    for (int k = 0; k < n; ++k) s.push_back(alphabet[pick(gen)]);
    std::string once;
    try {
      once = normalizeAuthorName(s);
    } catch (const Error&) {
      continue;
    }
    CHECK(normalizeAuthorName(once) == once);
  }
}

TEST_CASE("DOIs normalize to the bare lowercase form") {
  CHECK(normalizeDoi("https://doi.org/10.1016/J.ESWA.2007.06.037") == "10.1016/j.eswa.2007.06.037");
  CHECK(normalizeDoi("DOI 10.1000/ABC") == "10.1000/abc");
  CHECK_FALSE(normalizeDoi("not a doi").has_value());
}

TEST_CASE("parsers are total on arbitrary bytes") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 400);
  const std::string pieces[] = {"PT J\n", "ER\n", "AU ", "   ", "@article{", "}", "{", "=", ",", "\"", "\n", "CR "};
  std::uniform_int_distribution<std::size_t> piece(0, std::size(pieces) - 1);
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const int n = len(gen);
    for (int k = 0; k < n; ++k) {
      if (gen() % 3 == 0)
        s += pieces[piece(gen)];
      else
        s.push_back(static_cast<char>(byte(gen)));
    }
    for (int which = 0; which < 2; ++which) {
      try {
        const auto recs = which == 0 ? parsePlaintextExport(s, "fuzz") : parseBibtexExport(s, "fuzz");
        for (const auto& r : recs) {
          try {
            (void)toDocument(r, 2023);
          } catch (const Error&) {
          }
        }
      } catch (const ParseError&) {
      } catch (...) {
        FAIL("parser threw something other than ParseError");
      }
    }
  }
}

TEST_CASE("duplicate DOIs merge keeping the larger citation count") {
  const auto c = dedupeAndScreen({doc("a", "10.1/x", 5), doc("b", "10.1/x", 7)}, {});
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].total_citations == 7);
  CHECK(c.documents()[0].id == "a");
  REQUIRE(c.screening().size() == 1);
  CHECK(c.screening()[0].reason == "duplicate-doi");
}

TEST_CASE("title and year merge documents without DOI") {
  const auto c = dedupeAndScreen({doc("a", std::nullopt, 1, "Same Title!"), doc("b", std::nullopt, 2, "same title")}, {});
  CHECK(c.size() == 1);
  const auto d = dedupeAndScreen({doc("a", std::nullopt, 1, "Same", 2010), doc("b", std::nullopt, 2, "Same", 2011)}, {});
  CHECK(d.size() == 2);
}

TEST_CASE("retractions are screened out by id or DOI") {
  const auto c = dedupeAndScreen({doc("a", "10.1/a", 1, "A"), doc("b", "10.1/b", 1, "B"), doc("c", std::nullopt, 1, "C")},
                                 {"b", "10.1/a"});
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].id == "c");
}

TEST_CASE("deduplication is idempotent") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> small(0, 6);
  for (int round = 0; round < 200; ++round) {
    std::vector<Document> docs;
    for (int i = 0; i < 12; ++i) {
      const int k = small(gen);
      docs.push_back(doc("d" + std::to_string(i), k < 3 ? std::optional<std::string>("10.9/" + std::to_string(k)) : std::nullopt,
                         small(gen), "title " + std::to_string(small(gen)), 2000 + small(gen) % 2));
    }
    const auto once = dedupeAndScreen(docs, {});
    const auto twice = dedupeAndScreen(once.documents(), {});
    REQUIRE(twice.size() == once.size());
    CHECK(twice.screening().empty());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(twice.documents()[i].id == once.documents()[i].id);
      CHECK(twice.documents()[i].total_citations == once.documents()[i].total_citations);
    }
  }
}

TEST_CASE("coverage labels partition the percentage range") {
  CHECK((coverageLabel(0, 100) == CoverageLabel::Excellent));
  CHECK((coverageLabel(10, 100) == CoverageLabel::Good));
  CHECK((coverageLabel(11, 100) == CoverageLabel::Acceptable));
  CHECK((coverageLabel(20, 100) == CoverageLabel::Acceptable));
  CHECK((coverageLabel(21, 100) == CoverageLabel::Poor));
  CHECK((coverageLabel(50, 100) == CoverageLabel::Poor));
  CHECK((coverageLabel(51, 100) == CoverageLabel::Critical));
  CHECK((coverageLabel(99, 100) == CoverageLabel::Critical));
  CHECK((coverageLabel(100, 100) == CoverageLabel::CompletelyMissing));
  CHECK((coverageLabel(250, 1890) == CoverageLabel::Acceptable));
  for (std::size_t total = 1; total < 60; ++total)
    for (std::size_t m = 0; m <= total; ++m) CHECK_NOTHROW(coverageLabel(m, total));
}

TEST_CASE("sample export parses into the expected documents") {
  const auto recs = parsePlaintextExport(fixture("sample_wos.txt"), "sample_wos.txt");
  REQUIRE(recs.size() == 9);
  std::vector<Document> docs;
  for (const auto& r : recs) docs.push_back(toDocument(r, 2023));
  CHECK(docs[0].authors == std::vector<std::string>{"KUMAR, PR", "RAVI, V"});
  CHECK(docs[0].pub_year == 2007);
  CHECK(docs[0].total_citations == 187);
  CHECK(docs[0].countries == std::vector<std::string>{"INDIA"});
  CHECK((docs[0].doc_type == DocType::Review));
  CHECK(docs[2].countries == std::vector<std::string>{"KOREA"});
  REQUIRE(docs[0].corresponding.has_value());
  CHECK(docs[0].corresponding->name == "RAVI, V");
  const auto corpus = dedupeAndScreen(docs, {});
  CHECK(corpus.size() == 7);
  CHECK(corpus.referenceYear() == 2023);
}
