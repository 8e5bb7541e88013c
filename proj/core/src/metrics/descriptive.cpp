#include "scimap/metrics/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "scimap/error.hpp"
#include "scimap/metrics/amortize.hpp"
#include "scimap/text.hpp"

namespace scimap::metrics {

namespace {

std::string referenceIdentity(const ingest::CitedReference& r) {
  if (r.doi) return "doi:" + *r.doi;
  return text::collapseSpaces(text::toUpper(text::foldToAscii(r.raw)));
}

}  // namespace

double compoundGrowthPct(double first_count, double last_count, int first_year, int last_year) {
  if (last_year <= first_year || first_count <= 0) return 0.0;
  return (std::pow(last_count / first_count, 1.0 / (last_year - first_year)) - 1.0) * 100.0;
}

DescriptiveSummary descriptiveSummary(const Corpus& corpus, const SummaryOptions& options) {
  DescriptiveSummary s;
  s.documents = corpus.size();
  std::map<int, std::size_t> perYear;
  double ageSum = 0.0;
  long long tcSum = 0;
  std::set<std::string> sources, de, id, refs;
  std::map<std::string, std::size_t> authorDocs;
  std::size_t authorSlots = 0;
  std::size_t international = 0;

  for (const auto& d : corpus.documents()) {
    if (d.pub_year) {
      ++perYear[*d.pub_year];
      ageSum += corpus.referenceYear() - *d.pub_year;
    } else {
      ++s.undated_documents;
    }
    tcSum += d.total_citations;
    if (!d.source.empty()) sources.insert(d.source);
    de.insert(d.author_keywords.begin(), d.author_keywords.end());
    id.insert(d.keywords_plus.begin(), d.keywords_plus.end());
    s.reference_mentions += d.cited_refs.size();
    for (const auto& r : d.cited_refs) refs.insert(referenceIdentity(r));
    for (const auto& a : d.authors) ++authorDocs[a];
    authorSlots += d.authors.size();
    if (d.authors.size() == 1) ++s.single_authored_documents;
    if (d.countries.size() >= 2) ++international;
  }
  if (perYear.empty()) throw DomainError("descriptive summary needs at least one dated document");

  s.first_year = perYear.begin()->first;
  s.last_year = perYear.rbegin()->first;
  s.sources = sources.size();
  const std::size_t dated = s.documents - s.undated_documents;
  s.document_average_age = ageSum / static_cast<double>(dated);
  s.average_citations_per_doc = static_cast<double>(tcSum) / static_cast<double>(s.documents);
  s.distinct_references = refs.size();
  s.keywords_plus = id.size();
  s.author_keywords = de.size();
  s.authors = authorDocs.size();
  s.single_document_authors = static_cast<std::size_t>(std::count_if(
      authorDocs.begin(), authorDocs.end(), [](const auto& kv) { return kv.second == 1; }));
  s.coauthors_per_doc = static_cast<double>(authorSlots) / static_cast<double>(s.documents);
  s.international_coauthorship_pct =
      100.0 * static_cast<double>(international) / static_cast<double>(s.documents);

  s.growth_first_year = s.first_year;
  s.growth_last_year = s.last_year;
  if (options.growth_excludes_last_year && perYear.size() >= 2)
    s.growth_last_year = std::prev(perYear.end(), 2)->first;
  s.annual_growth_pct =
      compoundGrowthPct(static_cast<double>(perYear.at(s.growth_first_year)),
                        static_cast<double>(perYear.at(s.growth_last_year)), s.growth_first_year,
                        s.growth_last_year);
  return s;
}

AnnualProduction annualProduction(const Corpus& corpus) {
  AnnualProduction out;
  out.series.unit = "documents";
  std::map<int, std::size_t> perYear;
  for (const auto& d : corpus.documents()) {
    if (d.pub_year)
      ++perYear[*d.pub_year];
    else
      ++out.undated;
  }
  for (const auto& [y, n] : perYear) out.series.points.emplace_back(y, static_cast<double>(n));
  return out;
}

std::vector<CitationPerYearRow> meanCitationPerElapsedYearsRows(const Corpus& corpus) {
  std::map<int, std::pair<std::size_t, long long>> perYear;
  for (const auto& d : corpus.documents()) {
    if (!d.pub_year) continue;
    auto& slot = perYear[*d.pub_year];
    ++slot.first;
    slot.second += d.total_citations;
  }
  std::vector<CitationPerYearRow> rows;
  for (const auto& [year, agg] : perYear) {
    CitationPerYearRow r;
    r.year = year;
    r.documents = agg.first;
    r.total_citations = agg.second;
    r.citable_years = corpus.referenceYear() - year + 1;
    if (r.citable_years < 1)
      throw DomainError("publication year " + std::to_string(year) + " after reference year");
    r.numerator = r.total_citations;
    r.denominator = static_cast<long long>(r.documents) * r.citable_years;
    const long long g = std::gcd(r.numerator, r.denominator);
    if (g > 1) {
      r.numerator /= g;
      r.denominator /= g;
    }
    r.value = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
    rows.push_back(r);
  }
  return rows;
}

AnnualSeries meanCitationPerElapsedYears(const Corpus& corpus) {
  AnnualSeries s;
  s.unit = "mean citations per citable year";
  for (const auto& r : meanCitationPerElapsedYearsRows(corpus)) s.points.emplace_back(r.year, r.value);
  return s;
}

std::string_view toString(Entity e) {
  switch (e) {
    case Entity::Source:
      return "source";
    case Entity::Country:
      return "country";
    case Entity::Affiliation:
      return "affiliation";
    case Entity::Author:
      return "author";
  }
  return "source";
}

std::optional<Entity> entityFromString(std::string_view s) {
  if (s == "source") return Entity::Source;
  if (s == "country") return Entity::Country;
  if (s == "affiliation" || s == "institution") return Entity::Affiliation;
  if (s == "author") return Entity::Author;
  return std::nullopt;
}

std::vector<std::string> entitiesOf(const Document& d, Entity e) {
  switch (e) {
    case Entity::Source:
      return d.source.empty() ? std::vector<std::string>{} : std::vector<std::string>{d.source};
    case Entity::Country:
      if (!d.countries.empty()) return d.countries;
      if (d.corresponding && !d.corresponding->country.empty())
        return {d.corresponding->country};
      return {};
    case Entity::Affiliation:
      return d.affiliations;
    case Entity::Author:
      return d.authors;
  }
  return {};
}

std::vector<EntityProduction> entityProductionOverTime(const Corpus& corpus, Entity entity) {
  std::map<std::string, std::map<int, std::size_t>> yearly;
  std::map<std::string, std::size_t> undated;
  int firstYear = std::numeric_limits<int>::max();
  int lastYear = std::numeric_limits<int>::min();
  for (const auto& d : corpus.documents()) {
    for (const auto& e : entitiesOf(d, entity)) {
      if (d.pub_year) {
        ++yearly[e][*d.pub_year];
        firstYear = std::min(firstYear, *d.pub_year);
        lastYear = std::max(lastYear, *d.pub_year);
      } else {
        ++undated[e];
        yearly[e];
      }
    }
  }
  std::vector<EntityProduction> out;
  for (const auto& [name, perYear] : yearly) {
    EntityProduction p;
    p.entity = name;
    p.yearly.unit = "documents";
    p.cumulative.unit = "cumulative documents";
    p.undated = undated.count(name) ? undated.at(name) : 0;
    std::size_t running = 0;
    for (int y = firstYear; y <= lastYear && firstYear <= lastYear; ++y) {
      const auto it = perYear.find(y);
      const std::size_t n = it == perYear.end() ? 0 : it->second;
      running += n;
      p.yearly.points.emplace_back(y, static_cast<double>(n));
      p.cumulative.points.emplace_back(y, static_cast<double>(running));
    }
    p.total = running + p.undated;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const EntityProduction& a, const EntityProduction& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.entity < b.entity;
  });
  return out;
}

std::vector<EntityImpact> entityImpact(const Corpus& corpus, Entity entity,
                                       const std::vector<long long>* local_citations) {
  struct Acc {
    std::vector<long long> tcs;
    long long local = 0;
    std::optional<int> first;
  };
  std::map<std::string, Acc> acc;
  const auto& docs = corpus.documents();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    for (const auto& e : entitiesOf(d, entity)) {
      auto& a = acc[e];
      a.tcs.push_back(d.total_citations);
      if (local_citations && i < local_citations->size()) a.local += (*local_citations)[i];
      if (d.pub_year && (!a.first || *d.pub_year < *a.first)) a.first = d.pub_year;
    }
  }
  std::vector<EntityImpact> out;
  for (const auto& [name, a] : acc) {
    EntityImpact r;
    r.entity = name;
    r.documents = a.tcs.size();
    r.total_citations = std::accumulate(a.tcs.begin(), a.tcs.end(), 0LL);
    r.local_citations = a.local;
    r.h_index = hIndex(a.tcs);
    r.first_year = a.first;
    r.average_citations = static_cast<double>(r.total_citations) / static_cast<double>(r.documents);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const EntityImpact& a, const EntityImpact& b) {
    if (a.documents != b.documents) return a.documents > b.documents;
    return a.entity < b.entity;
  });
  return out;
}

CountryResolver correspondingCountry() {
  return [](const Document& d) -> std::optional<std::string> {
    if (d.corresponding && !d.corresponding->country.empty()) return d.corresponding->country;
    if (!d.countries.empty()) return d.countries.front();
    return std::nullopt;
  };
}

double mcpRatioPct(std::size_t scp, std::size_t mcp) {
  if (scp + mcp == 0) return 0.0;
  return 100.0 * static_cast<double>(mcp) / static_cast<double>(scp + mcp);
}

CollaborationIndices collaborationIndices(const Corpus& corpus, const CountryResolver& country_of) {
  CollaborationIndices out;
  std::map<std::string, CountryCollaboration> acc;
  for (const auto& d : corpus.documents()) {
    const auto country = country_of(d);
    if (!country || country->empty()) {
      out.excluded.push_back(d.id);
      continue;
    }
    std::set<std::string> spanned(d.countries.begin(), d.countries.end());
    spanned.insert(*country);
    auto& row = acc[*country];
    row.country = *country;
    if (spanned.size() >= 2)
      ++row.mcp;
    else
      ++row.scp;
  }
  for (auto& [name, row] : acc) {
    row.mcp_ratio = mcpRatioPct(row.scp, row.mcp);
    out.countries.push_back(row);
  }
  std::sort(out.countries.begin(), out.countries.end(),
            [](const CountryCollaboration& a, const CountryCollaboration& b) {
              if (a.scp + a.mcp != b.scp + b.mcp) return a.scp + a.mcp > b.scp + b.mcp;
              return a.country < b.country;
            });
  return out;
}

}  // namespace scimap::metrics
