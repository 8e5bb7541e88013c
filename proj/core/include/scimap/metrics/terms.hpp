#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scimap/ingest/corpus.hpp"
#include "scimap/metrics/series.hpp"

namespace scimap::metrics {

enum class TermField { AuthorKeywords, KeywordsPlus, TitleNgrams, AbstractNgrams };

std::string_view toString(TermField f);
std::optional<TermField> termFieldFromString(std::string_view s);

struct TermStat {
  std::string term;
  std::size_t frequency = 0;
  std::optional<int> q1_year;
  std::optional<int> median_year;
  std::optional<int> q3_year;
};

/// Shipped stopword list (data/stopwords-v1.txt).
const std::set<std::string>& stopwords();
std::string_view stopwordsVersion();

/// Lowercase ASCII word n-grams of `text`.  A stopword, digit-only token or
/// punctuation boundary breaks adjacency, so no n-gram spans one.
std::vector<std::string> ngrams(std::string_view text, int n);

/// Distinct terms of one document for the field, in first-seen order.
std::vector<std::string> termsOf(const ingest::Document& d, TermField field, int ngram = 2);

/// Per-document presence counts, descending, ties lexicographic.
/// `top_n == 0` keeps every term.
std::vector<TermStat> termFrequencies(const ingest::Corpus& corpus, TermField field,
                                      std::size_t top_n, int ngram = 2);

/// Nearest-rank quantile of an ascending sample (rank ceil(p * n), 1-based).
int nearestRankQuantile(const std::vector<int>& sorted, double p);

struct TrendingOptions {
  TermField field = TermField::AuthorKeywords;
  std::size_t min_freq = 5;
  std::size_t max_per_year = 4;
};

/// Terms with at least `min_freq` dated occurrences, placed at their median
/// year with Q1/Q3 bounds.  Each median year keeps its `max_per_year` most
/// frequent terms.  Output is ordered by median year, then frequency.
std::vector<TermStat> trendingTerms(const ingest::Corpus& corpus, const TrendingOptions& options = {});

struct TermDynamics {
  std::string term;
  AnnualSeries cumulative;
};

/// Cumulative yearly occurrence of the `top_n` most frequent terms.
std::vector<TermDynamics> termDynamics(const ingest::Corpus& corpus, TermField field,
                                       std::size_t top_n);

/// Ordered (label, synonyms) list; synonyms are matched case-insensitively
/// against whole keywords.
using Lexicon = std::vector<std::pair<std::string, std::vector<std::string>>>;
using NicheResolver = std::function<std::set<std::string>(const ingest::Document&)>;

/// A document belongs to a niche when one of its author keywords or
/// keywords-plus matches a synonym of that niche.
NicheResolver nichesFromLexicon(Lexicon niche_terms);

struct MethodMatrix {
  std::vector<std::string> niches;
  std::vector<std::string> methods;
  /// counts[niche][method]; counts below the threshold are reported as 0.
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> niche_totals;
  std::vector<std::size_t> method_totals;
  std::size_t grand_total = 0;
  /// (niche, method, raw count) of every suppressed non-zero cell.
  std::vector<std::tuple<std::string, std::string, std::size_t>> suppressed;
};

/// Documents per (niche, method) whose author keywords match a method synonym.
/// Throws DomainError on an empty lexicon.
MethodMatrix methodOccurrence(const ingest::Corpus& corpus, const NicheResolver& niche_of,
                              const Lexicon& lexicon, std::size_t min_occ = 3);

}  // namespace scimap::metrics
