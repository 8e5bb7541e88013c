#include <doctest.h>

#include <algorithm>
#include <random>

#include "builders.hpp"
#include "scimap/error.hpp"
#include "scimap/metrics/amortize.hpp"
#include "scimap/metrics/descriptive.hpp"
#include "scimap/metrics/laws.hpp"
#include "scimap/metrics/terms.hpp"
#include "scimap/text.hpp"

using namespace scimap;
using namespace scimap::metrics;
using build::Doc;

namespace {

AnnualSeries tableB1() {
  AnnualSeries s;
  s.points = {{1991, 51}, {1992, 44}, {1993, 42}, {1994, 36}, {1995, 34},
              {1996, 27}, {1997, 21}, {1998, 14}, {1999, 11}, {2000, 5}};
  return s;
}

}  // namespace

TEST_CASE("amortization reproduces the worked example") {
  const auto rows = amortize(tableB1(), 2000);
  REQUIRE(rows.size() == 10);
  // Printed values are truncated to four decimals.
  const double ps[] = {1.0000, 1.1111, 1.2500, 1.4285, 1.6666, 2.0000, 2.5000, 3.3333, 5.0000, 10.0000};
  const double nps[] = {0.1000, 0.1111, 0.1250, 0.1428, 0.1666, 0.2000, 0.2500, 0.3333, 0.5000, 1.0000};
  const double am[] = {5.1000, 4.8888, 5.2500, 5.1428, 5.6666, 5.4000, 5.2500, 4.6666, 5.5000, 5.0000};
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(rows[i].citable_years == 10 - static_cast<int>(i));
    CHECK(std::abs(rows[i].pondering_scalar - ps[i]) < 1e-3);
    CHECK(std::abs(rows[i].normalized_ps - nps[i]) < 1e-3);
    CHECK(std::abs(rows[i].amortized - am[i]) < 1e-3);
  }
  CHECK(rows[9].amortized == 5.0);
  CHECK(rows[6].amortized == 5.25);
}

TEST_CASE("display scale never touches the stored value") {
  const auto rows = amortize(tableB1(), 2000, 100.0);
  CHECK(rows[0].amortized == doctest::Approx(5.1));
  CHECK(rows[0].display == doctest::Approx(510.0));
}

TEST_CASE("amortize rejects years after the reference year") {
  AnnualSeries s;
  s.points = {{2001, 3}};
  CHECK_THROWS_AS(amortize(s, 2000), DomainError);
}

TEST_CASE("h-index") {
  std::vector<long long> c(10, 0);
  std::fill(c.begin(), c.begin() + 5, 100);
  CHECK(hIndex(c) == 5);
  CHECK(hIndex(std::vector<long long>{}) == 0);
  CHECK(hIndex(std::vector<long long>{10, 8, 5, 4, 3}) == 4);
}

TEST_CASE("h-index never decreases when a document is added") {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> n(0, 40);
  std::uniform_int_distribution<long long> cites(0, 60);
  for (int i = 0; i < 1000; ++i) {
    std::vector<long long> c(static_cast<std::size_t>(n(gen)));
    for (auto& x : c) x = cites(gen);
    const long long before = hIndex(c);
    c.push_back(cites(gen));
    CHECK(hIndex(c) >= before);
  }
}

TEST_CASE("amortized h-index ranking and tie resolution") {
  const std::vector<HIndexItem> one{{"A", 7, 2010}};
  CHECK(amortizedHIndex(one, 2020)[0].amortized == doctest::Approx(7.0));

  const std::vector<HIndexItem> items{{"A", 10, 2022}, {"B", 5, 2023}};
  const auto ranked = amortizedHIndex(items, 2023);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].amortized == doctest::Approx(5.0));
  CHECK(ranked[1].amortized == doctest::Approx(5.0));
  CHECK(sameAmortized(ranked[0], ranked[1]));

  const auto res = resolveAmortizedTies(ranked);
  CHECK_FALSE(res.unresolved);
  REQUIRE(res.ranked.size() == 2);
  CHECK(res.ranked[0].id == "A");
  CHECK(res.ranked[0].amortized == doctest::Approx(4.5));
  CHECK(res.ranked[1].amortized == doctest::Approx(4.0));
  REQUIRE(res.ledger.size() == 2);

  const std::vector<HIndexItem> zeros{{"B", 0, 2023}, {"A", 0, 2023}};
  const auto z = resolveAmortizedTies(amortizedHIndex(zeros, 2023));
  CHECK(z.unresolved);
  CHECK(z.ranked[0].tie_flagged);

  const std::vector<HIndexItem> distinct{{"A", 9, 2020}, {"B", 2, 2023}};
  const auto plain = amortizedHIndex(distinct, 2023);
  const auto kept = resolveAmortizedTies(plain);
  CHECK(kept.ledger.empty());
  CHECK(kept.ranked[0].id == plain[0].id);
}

TEST_CASE("the worked example as items breaks the 1993 and 1997 tie") {
  std::vector<HIndexItem> items;
  for (const auto& [y, h] : tableB1().points) items.push_back({std::to_string(y), static_cast<long long>(h), y});
  const auto ranked = amortizedHIndex(items, 2000);
  CHECK(ranked.front().id == "1995");
  CHECK(ranked.front().amortized == doctest::Approx(34.0 / 6.0));
  const auto res = resolveAmortizedTies(ranked);
  CHECK_FALSE(res.unresolved);
  CHECK_FALSE(res.ledger.empty());
  for (std::size_t i = 0; i + 1 < res.ranked.size(); ++i)
    CHECK_FALSE(sameAmortized(res.ranked[i], res.ranked[i + 1]));
}

TEST_CASE("mean citation per elapsed years") {
  const auto c = build::corpus({Doc("a").year(2021).tc(8), Doc("b").year(2021).tc(9), Doc("c").year(2023).tc(5)}, 2023);
  const auto rows = meanCitationPerElapsedYearsRows(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].year == 2021);
  CHECK(rows[0].citable_years == 3);
  CHECK(rows[0].numerator * 6 == rows[0].denominator * 17);
  CHECK(text::fixed(rows[0].value, 2) == "2.83");
  CHECK(rows[1].value == 5.0);
  const auto series = meanCitationPerElapsedYears(c);
  CHECK(series.points.size() == 2);
}

TEST_CASE("descriptive summary arithmetic") {
  const auto c = build::corpus({Doc("a").year(2020).tc(10).source("S1"), Doc("b").year(2016).tc(20).source("S2"),
                                Doc("c").year(2020).tc(39).source("S1")},
                               2023);
  const auto s = descriptiveSummary(c);
  CHECK(s.average_citations_per_doc == doctest::Approx(23.0));
  CHECK(s.sources == 2);
  const auto age = build::corpus({Doc("a").year(2020), Doc("b").year(2016)}, 2023);
  CHECK(descriptiveSummary(age).document_average_age == doctest::Approx(5.0));
  CHECK(compoundGrowthPct(2, 8, 2000, 2002) == doctest::Approx(100.0));
  CHECK(compoundGrowthPct(5, 5, 2000, 2000) == 0.0);
}

TEST_CASE("annual production") {
  const auto c = build::corpus({Doc("a").year(1991), Doc("b").year(1991), Doc("c").year(1993), Doc("d").year(std::nullopt)});
  const auto p = annualProduction(c);
  CHECK(p.series.points == std::vector<std::pair<int, double>>{{1991, 2}, {1993, 1}});
  CHECK(p.undated == 1);
  CHECK(annualProduction(build::corpus({})).series.points.empty());
}

TEST_CASE("entity production carries cumulative totals forward") {
  const auto c = build::corpus({Doc("a").year(1991).source("S"), Doc("b").year(1992).source("T"),
                                Doc("c").year(1993).source("S"), Doc("d").year(std::nullopt).source("S")});
  const auto prod = entityProductionOverTime(c, Entity::Source);
  REQUIRE(prod.size() == 2);
  CHECK(prod[0].entity == "S");
  CHECK(prod[0].yearly.points == std::vector<std::pair<int, double>>{{1991, 1}, {1992, 0}, {1993, 1}});
  CHECK(prod[0].cumulative.points == std::vector<std::pair<int, double>>{{1991, 1}, {1992, 1}, {1993, 2}});
  CHECK(prod[0].total == 3);
  CHECK(prod[0].undated == 1);
}

TEST_CASE("collaboration indices") {
  CHECK(text::fixed(mcpRatioPct(538, 123), 1) == "18.6");
  CHECK(text::fixed(mcpRatioPct(29, 42), 1) == "59.2");
  const auto c = build::corpus({Doc("a").countries({"CHINA"}).corresponding("CHINA"),
                                Doc("b").countries({"CHINA", "USA"}).corresponding("CHINA"),
                                Doc("c").countries({"USA"}).corresponding("USA"), Doc("d")});
  const auto ci = collaborationIndices(c, correspondingCountry());
  REQUIRE(ci.countries.size() == 2);
  CHECK(ci.countries[0].country == "CHINA");
  CHECK(ci.countries[0].scp == 1);
  CHECK(ci.countries[0].mcp == 1);
  CHECK(ci.excluded == std::vector<std::string>{"d"});
  const auto single = build::corpus({Doc("a").countries({"X"}).corresponding("X"), Doc("b").countries({"Y"}).corresponding("Y")});
  for (const auto& r : collaborationIndices(single, correspondingCountry()).countries) CHECK(r.mcp_ratio == 0.0);
}

TEST_CASE("bradford zones on the twenty core sources") {
  const std::size_t counts[] = {173, 42, 39, 38, 35, 32, 28, 27, 23, 22, 20, 20, 20, 17, 16, 16, 16, 16, 15, 14};
  const std::size_t expected[] = {173, 215, 254, 292, 327, 359, 387, 414, 437, 459,
                                  479, 499, 519, 536, 552, 568, 584, 600, 615, 629};
  std::vector<SourceCount> sources;
  for (std::size_t i = 0; i < 20; ++i) sources.emplace_back("core" + std::string(i < 10 ? "0" : "") + std::to_string(i), counts[i]);
  for (int i = 0; i < 53; ++i) sources.emplace_back("mid" + std::to_string(100 + i), 13);
  sources.emplace_back("tail9", 9);
  for (int i = 0; i < 563; ++i) sources.emplace_back("z" + std::to_string(1000 + i), 1);
  REQUIRE(sources.size() == 637);
  const auto zones = bradfordZones(sources);
  REQUIRE(zones[0].sources.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(zones[0].cumulative[i] == expected[i]);
  CHECK(text::fixed(zones[0].article_share_pct, 2) == "33.28");
  CHECK(text::fixed(zones[0].source_share_pct, 2) == "3.14");
  std::size_t total = 0;
  for (const auto& z : zones) total += z.sources.size();
  CHECK(total == 637);
  CHECK(zones[2].cumulative_articles == 1890);
}

TEST_CASE("bradford zones partition and keep the most productive first") {
  const auto eq = bradfordZones({{"a", 5}, {"b", 5}, {"c", 5}});
  for (const auto& z : eq) CHECK(z.sources.size() == 1);
  CHECK_THROWS_AS(bradfordZones({{"a", 1}, {"b", 1}}), DomainError);

  std::mt19937_64 gen(9);
  std::uniform_int_distribution<std::size_t> cnt(1, 50);
  for (int round = 0; round < 200; ++round) {
    std::vector<SourceCount> s;
    const std::size_t n = 3 + gen() % 40;
    for (std::size_t i = 0; i < n; ++i) s.emplace_back("s" + std::to_string(i), cnt(gen));
    const auto z = bradfordZones(s);
    std::size_t seen = 0;
    for (const auto& zone : z) {
      CHECK_FALSE(zone.sources.empty());
      seen += zone.sources.size();
    }
    CHECK(seen == n);
    CHECK(z[0].sources.back().second >= z[1].sources.front().second);
    CHECK(z[1].sources.back().second >= z[2].sources.front().second);
  }
}

TEST_CASE("lotka inverse-square fit") {
  std::vector<std::pair<std::string, std::size_t>> authors;
  for (int i = 0; i < 10; ++i) authors.emplace_back("a" + std::to_string(i), 1);
  authors.emplace_back("b", 3);
  const auto fit = lotkaFit(authors);
  CHECK(fit.baseline_authors == 10);
  CHECK(fit.predicted.at(1) == 10.0);
  CHECK(std::abs(fit.predicted.at(3) - 10.0 / 9.0) < 0.01);
  CHECK(text::fixed(fit.predicted.at(3), 2) == "1.11");

  std::vector<std::pair<std::string, std::size_t>> hist;
  for (int i = 0; i < 100; ++i) hist.emplace_back("p" + std::to_string(i), 1);
  for (int i = 0; i < 25; ++i) hist.emplace_back("q" + std::to_string(i), 2);
  for (int i = 0; i < 11; ++i) hist.emplace_back("r" + std::to_string(i), 3);
  const auto h = lotkaFit(hist);
  for (const auto& [n, obs] : h.observed) CHECK(std::abs(static_cast<double>(obs) - h.predicted.at(n)) < 0.5);
  CHECK_THROWS_AS(lotkaFit({{"x", 2}}), DomainError);
}

TEST_CASE("term frequencies count presence per document") {
  std::vector<ingest::Document> docs;
  for (int i = 0; i < 306; ++i) docs.push_back(Doc("m" + std::to_string(i)).de({"machine learning", "machine learning"}));
  for (int i = 0; i < 10; ++i) docs.push_back(Doc("o" + std::to_string(i)).de({"other"}));
  const auto top = termFrequencies(build::corpus(docs), TermField::AuthorKeywords, 5);
  REQUIRE_FALSE(top.empty());
  CHECK(top[0].term == "machine learning");
  CHECK(top[0].frequency == 306);
  CHECK(termFrequencies(build::corpus({}), TermField::AuthorKeywords, 5).empty());
}

TEST_CASE("n-grams stop at stopwords, digits and punctuation") {
  const auto g = ngrams("Machine learning, for the 2020 credit scoring models.", 2);
  CHECK(g == std::vector<std::string>{"machine learning", "credit scoring", "scoring models"});
  CHECK(stopwords().count("the") == 1);
}

TEST_CASE("trending terms use nearest-rank quartiles") {
  CHECK(nearestRankQuantile({2014, 2015, 2015, 2016, 2017}, 0.5) == 2015);
  std::vector<ingest::Document> docs;
  int k = 0;
  for (int y : {2014, 2015, 2015, 2016, 2017}) docs.push_back(Doc("t" + std::to_string(k++)).year(y).de({"trend"}));
  for (int i = 0; i < 4; ++i) docs.push_back(Doc("r" + std::to_string(i)).year(2010).de({"rare"}));
  for (int i = 0; i < 6; ++i) docs.push_back(Doc("s" + std::to_string(i)).year(2012).de({"steady"}));
  const auto t = trendingTerms(build::corpus(docs));
  REQUIRE(t.size() == 2);
  CHECK(t[0].term == "steady");
  CHECK(t[0].q1_year == 2012);
  CHECK(t[0].q3_year == 2012);
  CHECK(t[1].term == "trend");
  CHECK(t[1].median_year == 2015);
  CHECK(*t[1].q1_year <= *t[1].median_year);
  CHECK(*t[1].median_year <= *t[1].q3_year);
}

TEST_CASE("method occurrence applies the threshold") {
  std::vector<ingest::Document> docs;
  for (int i = 0; i < 3; ++i) docs.push_back(Doc("a" + std::to_string(i)).de({"artificial neural network", "credit"}));
  for (int i = 0; i < 2; ++i) docs.push_back(Doc("b" + std::to_string(i)).de({"support vector machine", "credit"}));
  const Lexicon niches{{"credit", {"credit"}}};
  const Lexicon methods{{"ANN", {"artificial neural network"}}, {"SVM", {"support vector machine"}}, {"GA", {}}};
  const auto m = methodOccurrence(build::corpus(docs), nichesFromLexicon(niches), methods, 3);
  REQUIRE(m.niches.size() == 1);
  CHECK(m.counts[0][0] == 3);
  CHECK(m.counts[0][1] == 0);
  CHECK(m.counts[0][2] == 0);
  REQUIRE(m.suppressed.size() == 1);
  CHECK(std::get<2>(m.suppressed[0]) == 2);
  CHECK_THROWS_AS(methodOccurrence(build::corpus(docs), nichesFromLexicon(niches), {}, 3), DomainError);
}
