#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scimap/ingest/record.hpp"

namespace scimap::ingest {

inline constexpr int kEarliestYear = 1450;

enum class DocType { Article, Review, EarlyAccess, Other };

std::string_view toString(DocType type);
DocType docTypeFromString(std::string_view s);

struct CitedReference {
  std::string raw;
  std::optional<std::string> first_author;
  std::optional<int> year;
  std::optional<std::string> source;
  std::optional<std::string> volume;
  std::optional<std::string> page;
  std::optional<std::string> doi;

  bool operator==(const CitedReference&) const = default;
};

/// Address split into the pieces the analyses need.
struct Address {
  std::string institution;
  std::string country;
};

struct Corresponding {
  std::string name;
  std::string institution;
  std::string country;

  bool operator==(const Corresponding&) const = default;
};

struct Document {
  std::string id;
  std::vector<std::string> authors;
  std::string title;
  std::string source;
  /// Abbreviated source (J9 / JI) when exported; used for reference matching.
  std::string source_abbrev;
  std::optional<int> pub_year;
  long long total_citations = 0;
  std::vector<CitedReference> cited_refs;
  std::optional<long long> ref_count;
  std::vector<std::string> author_keywords;
  std::vector<std::string> keywords_plus;
  std::optional<std::string> abstract;
  std::vector<std::string> affiliations;
  /// Countries of the C1 addresses, deduplicated, in first-seen order.
  std::vector<std::string> countries;
  std::optional<Corresponding> corresponding;
  std::optional<std::string> doi;
  DocType doc_type = DocType::Other;
  std::string language;
  std::vector<std::string> categories;

  /// Table-of-coverage tags whose field came out empty.
  std::vector<std::string> missing;
  /// Data-quality observations; never fatal.
  std::vector<std::string> flags;
  /// Unknown tags and unmapped BibTeX fields, verbatim.
  std::map<std::string, std::vector<std::string>> extra;

  std::string source_file;
  std::size_t record_index = 0;

  bool hasFlag(std::string_view flag) const;
};

/// The sixteen fields reported by the coverage table, in report order.
const std::vector<std::string>& coverageTags();

/// Maps a raw record onto a Document.  Years outside [1450, reference_year]
/// and unparseable years leave pub_year empty and add a flag.  Throws
/// scimap::Error when TC is present but not a non-negative integer.
Document toDocument(const RawRecord& record, int reference_year);

/// Positional and shape-based split of a "AUTHOR, YEAR, SOURCE, Vnn, Pnn, DOI x"
/// reference string.  Total: unclassifiable pieces stay only in `raw`.
CitedReference parseCitedReference(std::string_view raw, int max_year = 9999);

/// "Tsai, Chih-Fong" -> "TSAI, CF"; "SHIN KS" -> "SHIN, KS".  Idempotent and
/// insensitive to input case.  Throws scimap::Error on blank input.
std::string normalizeAuthorName(std::string_view raw);

/// Lowercased DOI without resolver prefixes, or nullopt when the text does
/// not have the "10.<registrant>/<suffix>" shape.
std::optional<std::string> normalizeDoi(std::string_view raw);

/// Splits one C1 address ("[authors] Inst, Dept, City, Country.").
Address parseAddress(std::string_view raw);

/// Canonical upper-case country name for the last address segment.
std::string normalizeCountry(std::string_view raw);

/// Upper-case ASCII institution name with collapsed whitespace.
std::string normalizeInstitution(std::string_view raw);

}  // namespace scimap::ingest
