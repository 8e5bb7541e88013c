#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scimap::ingest {

/// One exported item before any interpretation.  Tags follow the Web of
/// Science field-tag vocabulary (two characters: an uppercase letter followed
/// by an uppercase letter or digit, e.g. "AU", "C1", "J9").
struct RawRecord {
  /// Ordered multimap: a tag may occur more than once, and each occurrence
  /// keeps its own list of value lines.
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  /// BibTeX fields with no tag equivalent, kept verbatim as (field, value).
  std::vector<std::pair<std::string, std::string>> unmapped;
  std::string source_file;
  std::size_t record_index = 0;
  /// Non-fatal parser observations, e.g. "duplicate-field:title".
  std::vector<std::string> flags;

  bool has(std::string_view tag) const;
  /// All value lines of every occurrence of `tag`, in order.
  std::vector<std::string> values(std::string_view tag) const;
  /// Value lines joined with a single space; empty when absent.
  std::string joined(std::string_view tag) const;
  std::size_t tagCount() const { return entries.size(); }
};

bool isFieldTag(std::string_view tag);

/// Tagged plaintext export: "FN"/"VR" header lines, records of "TAG value"
/// lines with three-space continuation lines, "ER" closing each record and an
/// optional "EF" trailer.  A UTF-8 byte order mark is tolerated.
/// Throws ParseError naming `source_file` and the record ordinal when a record
/// is not closed by "ER".
std::vector<RawRecord> parsePlaintextExport(std::string_view bytes,
                                            const std::string& source_file = {});

struct BibtexOptions {
  /// Separator between entries of the cited-references field.
  std::string reference_separator = "\n";
};

/// BibTeX-flavoured export (one @entry per document).  Field names are mapped
/// onto the plaintext tag vocabulary.  Throws ParseError with a byte offset on
/// unbalanced braces or quotes.
std::vector<RawRecord> parseBibtexExport(std::string_view bytes,
                                         const std::string& source_file = {},
                                         const BibtexOptions& options = {});

}  // namespace scimap::ingest
