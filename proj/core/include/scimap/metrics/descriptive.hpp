#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scimap/ingest/corpus.hpp"
#include "scimap/metrics/series.hpp"

namespace scimap::metrics {

using ingest::Corpus;
using ingest::Document;

struct SummaryOptions {
  /// Leave the last dated year out of the growth rate (it is usually partial).
  bool growth_excludes_last_year = false;
};

struct DescriptiveSummary {
  int first_year = 0;
  int last_year = 0;
  std::size_t sources = 0;
  std::size_t documents = 0;
  std::size_t undated_documents = 0;
  /// Compound annual growth between the first and last counted year, percent.
  double annual_growth_pct = 0.0;
  int growth_first_year = 0;
  int growth_last_year = 0;
  double document_average_age = 0.0;
  double average_citations_per_doc = 0.0;
  std::size_t reference_mentions = 0;
  std::size_t distinct_references = 0;
  std::size_t keywords_plus = 0;
  std::size_t author_keywords = 0;
  std::size_t authors = 0;
  std::size_t single_document_authors = 0;
  std::size_t single_authored_documents = 0;
  double coauthors_per_doc = 0.0;
  double international_coauthorship_pct = 0.0;
};

/// Throws DomainError when the corpus has no dated document.
DescriptiveSummary descriptiveSummary(const Corpus& corpus, const SummaryOptions& options = {});

/// Compound annual growth in percent; 0 when both years coincide.
double compoundGrowthPct(double first_count, double last_count, int first_year, int last_year);

struct AnnualProduction {
  AnnualSeries series;
  std::size_t undated = 0;
};

AnnualProduction annualProduction(const Corpus& corpus);

struct CitationPerYearRow {
  int year = 0;
  std::size_t documents = 0;
  long long total_citations = 0;
  int citable_years = 0;
  /// total_citations / (documents * citable_years), exactly as a fraction.
  long long numerator = 0;
  long long denominator = 1;
  double value = 0.0;
};

/// Mean citations of each publication year divided by its citable years.
std::vector<CitationPerYearRow> meanCitationPerElapsedYearsRows(const Corpus& corpus);
AnnualSeries meanCitationPerElapsedYears(const Corpus& corpus);

enum class Entity { Source, Country, Affiliation, Author };

std::string_view toString(Entity e);
std::optional<Entity> entityFromString(std::string_view s);

/// Distinct entity values of one document.  Countries come from the
/// affiliation addresses, falling back to the corresponding author.
std::vector<std::string> entitiesOf(const Document& d, Entity e);

struct EntityProduction {
  std::string entity;
  AnnualSeries yearly;
  AnnualSeries cumulative;
  std::size_t total = 0;  // dated and undated documents
  std::size_t undated = 0;
};

/// Yearly and cumulative production per entity over the corpus year span.
/// Entities are ordered by total production (descending), then name.
std::vector<EntityProduction> entityProductionOverTime(const Corpus& corpus, Entity entity);

struct EntityImpact {
  std::string entity;
  std::size_t documents = 0;
  long long total_citations = 0;
  long long local_citations = 0;
  long long h_index = 0;
  std::optional<int> first_year;
  double average_citations = 0.0;
};

/// Per-entity production and impact; `local_citations` (indexed like the
/// corpus documents) is optional.  Ordered by documents, then name.
std::vector<EntityImpact> entityImpact(const Corpus& corpus, Entity entity,
                                       const std::vector<long long>* local_citations = nullptr);

using CountryResolver = std::function<std::optional<std::string>(const Document&)>;

/// Country of the corresponding author, falling back to the first address.
CountryResolver correspondingCountry();

struct CountryCollaboration {
  std::string country;
  std::size_t scp = 0;
  std::size_t mcp = 0;
  double mcp_ratio = 0.0;
};

struct CollaborationIndices {
  std::vector<CountryCollaboration> countries;
  std::vector<std::string> excluded;
};

/// SCP/MCP split per corresponding-author country.  Documents whose country
/// cannot be resolved are excluded and listed.
CollaborationIndices collaborationIndices(const Corpus& corpus, const CountryResolver& country_of);

/// MCP share in percent.
double mcpRatioPct(std::size_t scp, std::size_t mcp);

}  // namespace scimap::metrics
