#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scimap/ingest/corpus.hpp"

namespace scimap::metrics {

using SourceCount = std::pair<std::string, std::size_t>;

struct BradfordZone {
  int zone_index = 1;
  std::vector<SourceCount> sources;
  /// Running article total at every source of the zone, counted from the
  /// first source of zone 1.
  std::vector<std::size_t> cumulative;
  std::size_t articles = 0;
  std::size_t cumulative_articles = 0;
  double source_share_pct = 0.0;
  double article_share_pct = 0.0;
};

/// Articles per source, descending by count then name.
std::vector<SourceCount> sourceCounts(const ingest::Corpus& corpus);

/// Splits sources (sorted by descending count, ties by name) into three zones.
/// Zone 1 ends at the last source whose running total does not exceed
/// ceil(total/3), zone 2 at the last not exceeding ceil(2 total/3).  Each zone keeps at least one
/// source.  Throws DomainError with fewer than three sources.
std::array<BradfordZone, 3> bradfordZones(std::vector<SourceCount> source_counts);

struct LotkaFit {
  /// n_docs -> number of authors with exactly that many documents.
  std::map<std::size_t, std::size_t> observed;
  /// n_docs -> baseline / n^2.
  std::map<std::size_t, double> predicted;
  std::size_t baseline_authors = 0;
};

/// Classical inverse-square law fit.  Throws DomainError when no author has
/// exactly one document.
LotkaFit lotkaFit(const std::vector<std::pair<std::string, std::size_t>>& author_doc_counts);

/// Documents per normalized author name.
std::vector<std::pair<std::string, std::size_t>> authorDocCounts(const ingest::Corpus& corpus);

}  // namespace scimap::metrics
