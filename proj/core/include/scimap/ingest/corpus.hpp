#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scimap/ingest/document.hpp"

namespace scimap::ingest {

/// One removal performed while screening.
struct ScreeningEntry {
  std::string removed_id;
  /// "duplicate-doi", "duplicate-title-year", "retracted" or "retraction-notice".
  std::string reason;
  /// Document the duplicate was merged into; empty for retractions.
  std::string kept_id;
  std::string source_file;
  std::size_t record_index = 0;
};

/// Deduplicated, screened document collection.  Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> documents, int reference_year,
         std::vector<std::string> provenance = {},
         std::vector<ScreeningEntry> screening = {});

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  int referenceYear() const { return reference_year_; }
  const std::vector<std::string>& provenance() const { return provenance_; }
  const std::vector<ScreeningEntry>& screening() const { return screening_; }

  const Document* findById(const std::string& id) const;
  const Document* findByDoi(const std::string& doi) const;
  const Document* findByTitleYear(const std::string& title, int year) const;

 private:
  std::vector<Document> documents_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::size_t> by_doi_;
  std::map<std::pair<std::string, int>, std::size_t> by_title_year_;
  std::vector<std::string> provenance_;
  std::vector<ScreeningEntry> screening_;
  int reference_year_ = 0;
};

struct ScreenOptions {
  /// Defaults to the latest publication year among the kept documents.
  std::optional<int> reference_year;
  std::vector<std::string> provenance;
};

/// Removes retracted items (listed by id or DOI, or carrying a retraction
/// document type / title marker), then merges duplicates: DOI match first,
/// otherwise normalized title + year.  A merged document keeps its first id,
/// the maximum citation count and the union of list fields.
Corpus dedupeAndScreen(std::vector<Document> documents, const std::set<std::string>& retracted,
                       const ScreenOptions& options = {});

enum class CoverageLabel { Excellent, Good, Acceptable, Poor, Critical, CompletelyMissing };

std::string_view toString(CoverageLabel label);

/// Quality label for `missing` out of `total`.  Exact integer comparison, so
/// the six labels partition [0, 100].
CoverageLabel coverageLabel(std::size_t missing, std::size_t total);

struct CoverageRow {
  std::string tag;
  std::string description;
  std::size_t missing_count = 0;
  double missing_pct = 0.0;
  CoverageLabel label = CoverageLabel::Excellent;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
};

/// Throws DomainError on an empty corpus.
CoverageReport coverageReport(const Corpus& corpus);

}  // namespace scimap::ingest
