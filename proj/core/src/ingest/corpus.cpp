#include "scimap/ingest/corpus.hpp"

#include <algorithm>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::ingest {

Corpus::Corpus(std::vector<Document> documents, int reference_year,
               std::vector<std::string> provenance, std::vector<ScreeningEntry> screening)
    : documents_(std::move(documents)),
      provenance_(std::move(provenance)),
      screening_(std::move(screening)),
      reference_year_(reference_year) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (!by_id_.emplace(d.id, i).second) throw Error("duplicate document id in corpus: " + d.id);
    if (d.doi && !by_doi_.emplace(*d.doi, i).second)
      throw Error("duplicate DOI in corpus: " + *d.doi);
    if (d.pub_year && !d.title.empty())
      by_title_year_.emplace(std::make_pair(text::matchKey(d.title), *d.pub_year), i);
  }
}

const Document* Corpus::findById(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

const Document* Corpus::findByDoi(const std::string& doi) const {
  const auto it = by_doi_.find(doi);
  return it == by_doi_.end() ? nullptr : &documents_[it->second];
}

const Document* Corpus::findByTitleYear(const std::string& title, int year) const {
  const auto it = by_title_year_.find({text::matchKey(title), year});
  return it == by_title_year_.end() ? nullptr : &documents_[it->second];
}

namespace {

template <typename T>
void unionInto(std::vector<T>& into, const std::vector<T>& from) {
  for (const auto& x : from)
    if (std::find(into.begin(), into.end(), x) == into.end()) into.push_back(x);
}

void mergeInto(Document& kept, const Document& dup) {
  kept.total_citations = std::max(kept.total_citations, dup.total_citations);
  unionInto(kept.authors, dup.authors);
  unionInto(kept.author_keywords, dup.author_keywords);
  unionInto(kept.keywords_plus, dup.keywords_plus);
  unionInto(kept.affiliations, dup.affiliations);
  unionInto(kept.countries, dup.countries);
  unionInto(kept.categories, dup.categories);
  unionInto(kept.cited_refs, dup.cited_refs);
  unionInto(kept.flags, dup.flags);
  if (kept.title.empty()) kept.title = dup.title;
  if (kept.source.empty()) kept.source = dup.source;
  if (kept.source_abbrev.empty()) kept.source_abbrev = dup.source_abbrev;
  if (!kept.pub_year) kept.pub_year = dup.pub_year;
  if (!kept.ref_count) kept.ref_count = dup.ref_count;
  if (!kept.abstract) kept.abstract = dup.abstract;
  if (!kept.corresponding) kept.corresponding = dup.corresponding;
  if (!kept.doi) kept.doi = dup.doi;
  if (kept.language.empty()) kept.language = dup.language;
  for (const auto& [tag, vals] : dup.extra) unionInto(kept.extra[tag], vals);
  // A field stays missing only if every copy lacked it.
  std::vector<std::string> missing;
  for (const auto& tag : kept.missing)
    if (std::find(dup.missing.begin(), dup.missing.end(), tag) != dup.missing.end())
      missing.push_back(tag);
  kept.missing = std::move(missing);
}

}  // namespace

Corpus dedupeAndScreen(std::vector<Document> documents, const std::set<std::string>& retracted,
                       const ScreenOptions& options) {
  std::vector<ScreeningEntry> ledger;
  std::vector<Document> kept;
  std::map<std::string, std::size_t> byDoi;
  std::map<std::pair<std::string, int>, std::size_t> byTitleYear;
  std::map<std::string, std::size_t> byId;

  const auto indexDoc = [&](std::size_t i) {
    const Document& d = kept[i];
    if (d.doi) byDoi.emplace(*d.doi, i);
    if (d.pub_year && !d.title.empty())
      byTitleYear.emplace(std::make_pair(text::matchKey(d.title), *d.pub_year), i);
  };

  for (auto& doc : documents) {
    const bool listed = retracted.count(doc.id) || (doc.doi && retracted.count(*doc.doi));
    if (listed || doc.hasFlag("retraction-notice")) {
      ledger.push_back({doc.id, listed ? "retracted" : "retraction-notice", "", doc.source_file,
                        doc.record_index});
      continue;
    }

    std::optional<std::size_t> match;
    std::string reason;
    if (doc.doi) {
      if (const auto it = byDoi.find(*doc.doi); it != byDoi.end()) {
        match = it->second;
        reason = "duplicate-doi";
      }
    }
    if (!match && doc.pub_year && !doc.title.empty()) {
      const auto it = byTitleYear.find({text::matchKey(doc.title), *doc.pub_year});
      // Two different DOIs mean two different works even with equal titles.
      if (it != byTitleYear.end() && !(doc.doi && kept[it->second].doi)) {
        match = it->second;
        reason = "duplicate-title-year";
      }
    }

    if (match) {
      ledger.push_back({doc.id, reason, kept[*match].id, doc.source_file, doc.record_index});
      mergeInto(kept[*match], doc);
      indexDoc(*match);
      continue;
    }

    // Keep surrogate keys unique even when an exporter reuses one.
    if (byId.count(doc.id)) {
      const std::string base = doc.id;
      for (int n = 2;; ++n) {
        doc.id = base + "~" + std::to_string(n);
        if (!byId.count(doc.id)) break;
      }
      doc.flags.push_back("id-collision");
    }
    byId.emplace(doc.id, kept.size());
    kept.push_back(std::move(doc));
    indexDoc(kept.size() - 1);
  }

  int referenceYear = 0;
  if (options.reference_year) {
    referenceYear = *options.reference_year;
  } else {
    for (const auto& d : kept)
      if (d.pub_year) referenceYear = std::max(referenceYear, *d.pub_year);
  }
  return Corpus(std::move(kept), referenceYear, options.provenance, std::move(ledger));
}

std::string_view toString(CoverageLabel label) {
  switch (label) {
    case CoverageLabel::Excellent:
      return "Excellent";
    case CoverageLabel::Good:
      return "Good";
    case CoverageLabel::Acceptable:
      return "Acceptable";
    case CoverageLabel::Poor:
      return "Poor";
    case CoverageLabel::Critical:
      return "Critical";
    case CoverageLabel::CompletelyMissing:
      return "Completely Missing";
  }
  return "Critical";
}

CoverageLabel coverageLabel(std::size_t missing, std::size_t total) {
  if (total == 0) throw DomainError("coverage label of an empty population");
  if (missing == 0) return CoverageLabel::Excellent;
  if (missing >= total) return CoverageLabel::CompletelyMissing;
  const auto pct100 = static_cast<unsigned long long>(missing) * 100;
  const auto n = static_cast<unsigned long long>(total);
  if (pct100 <= 10 * n) return CoverageLabel::Good;
  if (pct100 <= 20 * n) return CoverageLabel::Acceptable;
  if (pct100 <= 50 * n) return CoverageLabel::Poor;
  return CoverageLabel::Critical;
}

CoverageReport coverageReport(const Corpus& corpus) {
  if (corpus.empty()) throw DomainError("coverage report of an empty corpus");
  static const std::map<std::string, std::string> kDescriptions = {
      {"AU", "Author"},
      {"CR", "Cited References"},
      {"DT", "Document Type"},
      {"SO", "Journal"},
      {"LA", "Language"},
      {"NR", "No. of Cited References"},
      {"TI", "Title"},
      {"TC", "Total Citation"},
      {"AB", "Abstract"},
      {"C1", "Affiliation"},
      {"RP", "Corresponding Author"},
      {"DI", "Digital Object Identifier"},
      {"PY", "Publication Year"},
      {"DE", "Keywords"},
      {"ID", "Keywords Plus"},
      {"WC", "Science Categories"},
  };
  CoverageReport report;
  const std::size_t n = corpus.size();
  for (const auto& tag : coverageTags()) {
    CoverageRow row;
    row.tag = tag;
    row.description = kDescriptions.at(tag);
    for (const auto& d : corpus.documents())
      if (std::find(d.missing.begin(), d.missing.end(), tag) != d.missing.end())
        ++row.missing_count;
    row.missing_pct = 100.0 * static_cast<double>(row.missing_count) / static_cast<double>(n);
    row.label = coverageLabel(row.missing_count, n);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace scimap::ingest
