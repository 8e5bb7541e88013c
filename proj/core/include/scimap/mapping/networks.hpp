#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scimap/ingest/corpus.hpp"
#include "scimap/mapping/graph.hpp"
#include "scimap/metrics/terms.hpp"

namespace scimap::mapping {

/// Source prefix used in reference matching: the first six alphanumeric
/// characters of the ASCII-folded, upper-cased name (all of them if shorter).
std::string sourcePrefix(std::string_view source);

struct LocalCitations {
  /// Distinct citing corpus documents, per corpus document index.
  std::vector<long long> per_document;
  /// Distinct citing corpus documents per reference key.  Covers references
  /// outside the corpus too.
  std::map<std::string, std::size_t> per_reference;
  /// Display label per reference key (first raw form seen).
  std::map<std::string, std::string> labels;
  /// Reference keys cited by each corpus document, deduplicated, sorted.
  std::vector<std::vector<std::string>> cited_keys;
  /// Corpus documents cited by each corpus document (self-citations dropped).
  std::vector<std::vector<std::size_t>> cites;
};

/// Reference matching: DOI, else (first-author surname, year, source prefix)
/// against either the full or the abbreviated source of a document.
class ReferenceMatcher {
 public:
  explicit ReferenceMatcher(const ingest::Corpus& corpus);
  /// Corpus document index the reference points to, if any.
  std::optional<std::size_t> match(const ingest::CitedReference& ref) const;
  /// "doc:<id>" for corpus documents, else "doi:<doi>", else
  /// "ref:<SURNAME>|<year>|<prefix>", else "raw:<raw>".
  std::string key(const ingest::CitedReference& ref) const;

 private:
  const ingest::Corpus* corpus_;
  std::map<std::string, std::size_t> by_doi_;
  std::map<std::string, std::size_t> by_triple_;
};

LocalCitations matchLocalCitations(const ingest::Corpus& corpus);

/// Keyword co-occurrence with full counting.  Node weight is the number of
/// documents carrying the term.
Graph cooccurrenceGraph(const ingest::Corpus& corpus, metrics::TermField field,
                        std::size_t min_occurrence = 5);

/// References cited by at least `min_citations` documents; edge weight is the
/// number of documents citing both.
Graph cocitationGraph(const ingest::Corpus& corpus, std::size_t min_citations = 20);

enum class CollaborationLevel { Author, Institution, Country };
std::optional<CollaborationLevel> collaborationLevelFromString(std::string_view s);
std::string_view toString(CollaborationLevel level);

/// Co-authorship between entities; isolated nodes are dropped.  `top_n`
/// restricts nodes to the most productive entities before edges are added.
Graph collaborationGraph(const ingest::Corpus& corpus, CollaborationLevel level,
                         std::optional<std::size_t> top_n = std::nullopt);

/// Direct-citation network among the `n` most locally cited documents, arcs
/// from citing to cited.  Arcs pointing forward in time are dropped; same-year
/// arcs are kept while the graph stays acyclic.  Both cases are flagged.
Graph historiograph(const ingest::Corpus& corpus, std::size_t n = 30);

enum class FlowField { Country, AuthorKeyword, KeywordPlus, Affiliation, Author, Source };
std::optional<FlowField> flowFieldFromString(std::string_view s);
std::string_view toString(FlowField f);

/// Distinct values of one flow field for a document.
std::vector<std::string> flowValues(const ingest::Document& d, FlowField field);

struct FlowPillar {
  FlowField field = FlowField::Country;
  /// (item, document count), most frequent first.
  std::vector<std::pair<std::string, std::size_t>> items;
};

struct Flow {
  std::string from;
  std::string to;
  std::size_t weight = 0;
};

struct ThreeFieldFlow {
  FlowPillar left;
  FlowPillar middle;
  FlowPillar right;
  std::vector<Flow> left_middle;
  std::vector<Flow> middle_right;
};

ThreeFieldFlow threeFieldFlow(const ingest::Corpus& corpus, FlowField left, FlowField middle,
                              FlowField right, std::size_t k_left, std::size_t k_mid,
                              std::size_t k_right);

struct ThemeCluster {
  std::string label;
  std::vector<std::string> terms;
  std::size_t frequency = 0;
};

struct ThemeLink {
  std::size_t from = 0;  // cluster index in this slice
  std::size_t to = 0;    // cluster index in the next slice
  double weight = 0.0;
};

struct ThematicSlice {
  int start_year = 0;
  int end_year = 0;
  std::vector<ThemeCluster> clusters;
  std::vector<ThemeLink> links_to_next;
  std::vector<std::string> flags;
};

struct ThematicOptions {
  std::size_t n_terms = 1000;
  std::size_t min_cluster_freq = 20;
  double min_weight_index = 0.02;
  int ngram = 2;
};

/// |A ∩ B| / min(|A|, |B|); zero when either set is empty.
double inclusionIndex(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Throws DomainError when the slices are empty, reversed or overlapping.
std::vector<ThematicSlice> thematicEvolution(const ingest::Corpus& corpus,
                                             const std::vector<std::pair<int, int>>& slices,
                                             const ThematicOptions& options = {});

struct RpysRow {
  int year = 0;
  std::size_t n_references = 0;
  std::size_t citations = 0;
};

struct Rpys {
  std::vector<RpysRow> rows;
  std::size_t undated_mentions = 0;
  std::size_t undated_references = 0;
};

/// Reference publication year spectroscopy over the full cited-year range.
Rpys rpys(const ingest::Corpus& corpus);

}  // namespace scimap::mapping
