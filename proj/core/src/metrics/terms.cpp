#include "scimap/metrics/terms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "scimap/error.hpp"
#include "scimap/stopwords_data.hpp"
#include "scimap/text.hpp"

namespace scimap::metrics {

std::string_view toString(TermField f) {
  switch (f) {
    case TermField::AuthorKeywords:
      return "DE";
    case TermField::KeywordsPlus:
      return "ID";
    case TermField::TitleNgrams:
      return "title";
    case TermField::AbstractNgrams:
      return "abstract";
  }
  return "DE";
}

std::optional<TermField> termFieldFromString(std::string_view s) {
  const std::string l = text::toLower(s);
  if (l == "de" || l == "keywords") return TermField::AuthorKeywords;
  if (l == "id" || l == "keywords-plus") return TermField::KeywordsPlus;
  if (l == "title" || l == "ti" || l == "title-bigrams") return TermField::TitleNgrams;
  if (l == "abstract" || l == "ab" || l == "abstract-bigrams") return TermField::AbstractNgrams;
  return std::nullopt;
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords = [] {
    std::set<std::string> out;
    for (const auto& line : text::split(detail::kStopwordsText, '\n')) {
      const auto t = text::trim(line);
      if (t.empty() || t.front() == '#') continue;
      out.emplace(t);
    }
    return out;
  }();
  return kWords;
}

std::string_view stopwordsVersion() { return detail::kStopwordsVersion; }

std::vector<std::string> ngrams(std::string_view input, int n) {
  if (n < 1) throw DomainError("n-gram size must be at least 1");
  const std::string folded = text::toLower(text::foldToAscii(input));
  const auto& stop = stopwords();
  std::vector<std::string> out;
  std::vector<std::string> window;

  const auto flushToken = [&](std::string& tok) {
    if (tok.empty()) return;
    // Strip hyphens hanging at the ends ("-based", "data-").
    while (!tok.empty() && tok.front() == '-') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == '-') tok.pop_back();
    const bool drop = tok.size() < 2 || stop.count(tok) || text::isAllDigits(tok);
    if (drop) {
      window.clear();
    } else {
      window.push_back(tok);
      if (static_cast<int>(window.size()) > n) window.erase(window.begin());
      if (static_cast<int>(window.size()) == n) {
        std::string g = window.front();
        for (std::size_t i = 1; i < window.size(); ++i) g += " " + window[i];
        out.push_back(std::move(g));
      }
    }
    tok.clear();
  };

  std::string tok;
  for (char c : folded) {
    const bool word = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (word) {
      tok.push_back(c);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flushToken(tok);
    } else {
      // Punctuation ends the phrase.
      flushToken(tok);
      window.clear();
    }
  }
  flushToken(tok);
  return out;
}

std::vector<std::string> termsOf(const ingest::Document& d, TermField field, int ngram) {
  std::vector<std::string> raw;
  switch (field) {
    case TermField::AuthorKeywords:
      raw = d.author_keywords;
      break;
    case TermField::KeywordsPlus:
      raw = d.keywords_plus;
      break;
    case TermField::TitleNgrams:
      raw = ngrams(d.title, ngram);
      break;
    case TermField::AbstractNgrams:
      if (d.abstract) raw = ngrams(*d.abstract, ngram);
      break;
  }
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& t : raw) {
    std::string term = text::toLower(text::collapseSpaces(t));
    if (term.empty() || !seen.insert(term).second) continue;
    out.push_back(std::move(term));
  }
  return out;
}

namespace {

bool byFrequency(const TermStat& a, const TermStat& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.term < b.term;
}

}  // namespace

std::vector<TermStat> termFrequencies(const ingest::Corpus& corpus, TermField field,
                                      std::size_t top_n, int ngram) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : corpus.documents())
    for (const auto& t : termsOf(d, field, ngram)) ++counts[t];
  std::vector<TermStat> out;
  out.reserve(counts.size());
  for (const auto& [term, n] : counts) out.push_back({term, n, {}, {}, {}});
  std::sort(out.begin(), out.end(), byFrequency);
  if (top_n > 0 && out.size() > top_n) out.resize(top_n);
  return out;
}

int nearestRankQuantile(const std::vector<int>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<TermStat> trendingTerms(const ingest::Corpus& corpus, const TrendingOptions& options) {
  std::map<std::string, std::vector<int>> years;
  for (const auto& d : corpus.documents()) {
    if (!d.pub_year) continue;
    for (const auto& t : termsOf(d, options.field)) years[t].push_back(*d.pub_year);
  }
  std::map<int, std::vector<TermStat>> byMedian;
  for (auto& [term, ys] : years) {
    if (ys.size() < options.min_freq) continue;
    std::sort(ys.begin(), ys.end());
    TermStat s;
    s.term = term;
    s.frequency = ys.size();
    s.q1_year = nearestRankQuantile(ys, 0.25);
    s.median_year = nearestRankQuantile(ys, 0.5);
    s.q3_year = nearestRankQuantile(ys, 0.75);
    byMedian[*s.median_year].push_back(std::move(s));
  }
  std::vector<TermStat> out;
  for (auto& [year, stats] : byMedian) {
    std::sort(stats.begin(), stats.end(), byFrequency);
    if (stats.size() > options.max_per_year) stats.resize(options.max_per_year);
    out.insert(out.end(), stats.begin(), stats.end());
  }
  return out;
}

std::vector<TermDynamics> termDynamics(const ingest::Corpus& corpus, TermField field,
                                       std::size_t top_n) {
  const auto top = termFrequencies(corpus, field, top_n);
  std::map<std::string, std::map<int, std::size_t>> perYear;
  int first = std::numeric_limits<int>::max();
  int last = std::numeric_limits<int>::min();
  for (const auto& d : corpus.documents()) {
    if (!d.pub_year) continue;
    first = std::min(first, *d.pub_year);
    last = std::max(last, *d.pub_year);
    for (const auto& t : termsOf(d, field)) ++perYear[t][*d.pub_year];
  }
  std::vector<TermDynamics> out;
  for (const auto& stat : top) {
    TermDynamics td;
    td.term = stat.term;
    td.cumulative.unit = "cumulative occurrences";
    std::size_t running = 0;
    const auto& counts = perYear[stat.term];
    for (int y = first; y <= last && first <= last; ++y) {
      const auto it = counts.find(y);
      running += it == counts.end() ? 0 : it->second;
      td.cumulative.points.emplace_back(y, static_cast<double>(running));
    }
    out.push_back(std::move(td));
  }
  return out;
}

NicheResolver nichesFromLexicon(Lexicon niche_terms) {
  return [lex = std::move(niche_terms)](const ingest::Document& d) {
    std::set<std::string> terms;
    for (const auto& t : d.author_keywords) terms.insert(text::toLower(t));
    for (const auto& t : d.keywords_plus) terms.insert(text::toLower(t));
    std::set<std::string> out;
    for (const auto& [label, synonyms] : lex)
      for (const auto& s : synonyms)
        if (terms.count(text::toLower(text::collapseSpaces(s)))) {
          out.insert(label);
          break;
        }
    return out;
  };
}

MethodMatrix methodOccurrence(const ingest::Corpus& corpus, const NicheResolver& niche_of,
                              const Lexicon& lexicon, std::size_t min_occ) {
  if (lexicon.empty()) throw DomainError("method lexicon is empty");
  MethodMatrix m;
  for (const auto& [label, synonyms] : lexicon) m.methods.push_back(label);

  std::map<std::string, std::vector<std::size_t>> raw;
  for (const auto& d : corpus.documents()) {
    const auto niches = niche_of(d);
    if (niches.empty()) continue;
    std::set<std::string> terms;
    for (const auto& t : d.author_keywords) terms.insert(text::toLower(t));
    std::vector<bool> hit(lexicon.size(), false);
    for (std::size_t k = 0; k < lexicon.size(); ++k)
      for (const auto& s : lexicon[k].second)
        if (terms.count(text::toLower(text::collapseSpaces(s)))) {
          hit[k] = true;
          break;
        }
    for (const auto& niche : niches) {
      auto& row = raw[niche];
      row.resize(lexicon.size(), 0);
      for (std::size_t k = 0; k < lexicon.size(); ++k)
        if (hit[k]) ++row[k];
    }
  }

  m.method_totals.assign(lexicon.size(), 0);
  for (const auto& [niche, row] : raw) {
    m.niches.push_back(niche);
    std::vector<std::size_t> kept(lexicon.size(), 0);
    std::size_t total = 0;
    for (std::size_t k = 0; k < lexicon.size(); ++k) {
      if (row[k] >= min_occ) {
        kept[k] = row[k];
        total += row[k];
        m.method_totals[k] += row[k];
      } else if (row[k] > 0) {
        m.suppressed.emplace_back(niche, m.methods[k], row[k]);
      }
    }
    m.counts.push_back(std::move(kept));
    m.niche_totals.push_back(total);
    m.grand_total += total;
  }
  return m;
}

}  // namespace scimap::metrics
