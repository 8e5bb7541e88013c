#pragma once

#include <string>
#include <string_view>

#include "scimap/ingest/corpus.hpp"
#include "scimap/io/table.hpp"
#include "scimap/mfas/mfas.hpp"

namespace scimap::io {

inline constexpr std::string_view kCorpusSchema = "scimap-corpus";
inline constexpr int kCorpusSchemaVersion = 1;

/// JSON Lines: a header object (schema, version, reference year, the year
/// bound used when parsing cited references, provenance, screening ledger),
/// then one object per document.  Cited references are stored as raw strings
/// and parsed again on load.
std::string saveCorpus(const ingest::Corpus& corpus, int reference_parse_year);

/// Throws ParseError (with the line number as record index) on malformed
/// input or an unknown schema.
ingest::Corpus loadCorpus(std::string_view text, const std::string& file = "<corpus>");

Table screeningTable(const ingest::Corpus& corpus);

/// "u v multiplicity" per line, whitespace separated; blank lines and lines
/// starting with '#' are skipped.  A missing multiplicity means 1.
mfas::Multigraph readMultigraph(std::string_view text, const std::string& file = "<multigraph>");

}  // namespace scimap::io
