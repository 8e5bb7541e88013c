#include "scimap/mapping/networks.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "scimap/error.hpp"
#include "scimap/mapping/centrality.hpp"
#include "scimap/metrics/descriptive.hpp"
#include "scimap/text.hpp"

namespace scimap::mapping {

using ingest::CitedReference;
using ingest::Corpus;
using ingest::Document;

std::string sourcePrefix(std::string_view source) {
  std::string out;
  for (char c : text::toUpper(text::foldToAscii(source))) {
    if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) out.push_back(c);
    if (out.size() == 6) break;
  }
  return out;
}

namespace {

std::string surnameOf(std::string_view normalized) {
  const auto comma = normalized.find(',');
  return std::string(text::trim(normalized.substr(0, comma)));
}

std::string tripleKey(const std::string& surname, int year, const std::string& prefix) {
  return surname + "|" + std::to_string(year) + "|" + prefix;
}

std::string docLabel(const Document& d) {
  std::string label;
  if (!d.authors.empty()) {
    std::string a = d.authors.front();
    a.erase(std::remove(a.begin(), a.end(), ','), a.end());
    label = a;
  } else {
    label = d.id;
  }
  if (d.pub_year) label += ", " + std::to_string(*d.pub_year);
  if (!d.source_abbrev.empty()) {
    label += ", " + d.source_abbrev;
  } else if (!d.source.empty()) {
    label += ", " + d.source;
  }
  return label;
}

}  // namespace

ReferenceMatcher::ReferenceMatcher(const Corpus& corpus) : corpus_(&corpus) {
  const auto& docs = corpus.documents();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const Document& d = docs[i];
    if (d.doi) by_doi_.try_emplace(*d.doi, i);
    if (d.authors.empty() || !d.pub_year) continue;
    const std::string surname = surnameOf(d.authors.front());
    for (const auto& src : {d.source, d.source_abbrev}) {
      const auto prefix = sourcePrefix(src);
      if (prefix.empty()) continue;
      by_triple_.try_emplace(tripleKey(surname, *d.pub_year, prefix), i);
    }
  }
}

std::optional<std::size_t> ReferenceMatcher::match(const CitedReference& ref) const {
  if (ref.doi) {
    const auto it = by_doi_.find(*ref.doi);
    if (it != by_doi_.end()) return it->second;
  }
  if (ref.first_author && ref.year && ref.source) {
    const auto prefix = sourcePrefix(*ref.source);
    if (!prefix.empty()) {
      const auto it = by_triple_.find(tripleKey(surnameOf(*ref.first_author), *ref.year, prefix));
      if (it != by_triple_.end()) return it->second;
    }
  }
  return std::nullopt;
}

std::string ReferenceMatcher::key(const CitedReference& ref) const {
  if (const auto doc = match(ref)) return "doc:" + corpus_->documents()[*doc].id;
  if (ref.doi) return "doi:" + *ref.doi;
  if (ref.first_author && ref.year && ref.source)
    return "ref:" + surnameOf(*ref.first_author) + "|" + std::to_string(*ref.year) + "|" +
           sourcePrefix(*ref.source);
  return "raw:" + text::toUpper(text::collapseSpaces(ref.raw));
}

LocalCitations matchLocalCitations(const Corpus& corpus) {
  const ReferenceMatcher matcher(corpus);
  const auto& docs = corpus.documents();
  LocalCitations out;
  out.per_document.assign(docs.size(), 0);
  out.cited_keys.resize(docs.size());
  out.cites.resize(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::set<std::string> keys;
    std::set<std::size_t> targets;
    for (const auto& ref : docs[i].cited_refs) {
      const auto target = matcher.match(ref);
      const std::string key = matcher.key(ref);
      if (!out.labels.count(key))
        out.labels[key] = target ? docLabel(docs[*target]) : text::collapseSpaces(ref.raw);
      keys.insert(key);
      if (target && *target != i) targets.insert(*target);
    }
    for (const auto& k : keys) ++out.per_reference[k];
    for (auto t : targets) ++out.per_document[t];
    out.cited_keys[i].assign(keys.begin(), keys.end());
    out.cites[i].assign(targets.begin(), targets.end());
  }
  return out;
}

Graph cooccurrenceGraph(const Corpus& corpus, metrics::TermField field, std::size_t min_occurrence) {
  std::vector<std::vector<std::string>> perDoc;
  std::map<std::string, std::size_t> occurrence;
  for (const auto& d : corpus.documents()) {
    perDoc.push_back(metrics::termsOf(d, field));
    for (const auto& t : perDoc.back()) ++occurrence[t];
  }
  GraphBuilder b;
  for (const auto& [term, n] : occurrence)
    if (n >= min_occurrence) b.addNode(term, term, static_cast<double>(n));
  for (auto& terms : perDoc) {
    std::vector<std::string> kept;
    for (auto& t : terms)
      if (b.hasNode(t)) kept.push_back(std::move(t));
    std::sort(kept.begin(), kept.end());
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j) b.addEdge(kept[i], kept[j], 1.0);
  }
  Graph g = b.build();
  g.metadata["counting"] = "full";
  g.metadata["field"] = std::string(metrics::toString(field));
  g.metadata["min_occurrence"] = std::to_string(min_occurrence);
  return g;
}

Graph cocitationGraph(const Corpus& corpus, std::size_t min_citations) {
  const auto local = matchLocalCitations(corpus);
  GraphBuilder b;
  for (const auto& [key, n] : local.per_reference)
    if (n >= min_citations) b.addNode(key, local.labels.at(key), static_cast<double>(n));
  for (const auto& keys : local.cited_keys) {
    std::vector<std::string> kept;
    for (const auto& k : keys)
      if (b.hasNode(k)) kept.push_back(k);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j) b.addEdge(kept[i], kept[j], 1.0);
  }
  Graph g = b.build();
  g.metadata["counting"] = "full";
  g.metadata["min_citations"] = std::to_string(min_citations);
  return g;
}

std::optional<CollaborationLevel> collaborationLevelFromString(std::string_view s) {
  const std::string l = text::toLower(s);
  if (l == "author" || l == "authors") return CollaborationLevel::Author;
  if (l == "institution" || l == "affiliation" || l == "institutions")
    return CollaborationLevel::Institution;
  if (l == "country" || l == "countries") return CollaborationLevel::Country;
  return std::nullopt;
}

std::string_view toString(CollaborationLevel level) {
  switch (level) {
    case CollaborationLevel::Author:
      return "author";
    case CollaborationLevel::Institution:
      return "institution";
    case CollaborationLevel::Country:
      return "country";
  }
  return "author";
}

namespace {

std::vector<std::string> distinctSorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  v.erase(std::remove(v.begin(), v.end(), std::string()), v.end());
  return v;
}

template <typename Count>
bool byCountThenName(const std::pair<std::string, Count>& a, const std::pair<std::string, Count>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

}  // namespace

Graph collaborationGraph(const Corpus& corpus, CollaborationLevel level,
                         std::optional<std::size_t> top_n) {
  metrics::Entity entity = metrics::Entity::Author;
  if (level == CollaborationLevel::Institution) entity = metrics::Entity::Affiliation;
  if (level == CollaborationLevel::Country) entity = metrics::Entity::Country;

  std::vector<std::vector<std::string>> perDoc;
  std::map<std::string, std::size_t> docs;
  for (const auto& d : corpus.documents()) {
    perDoc.push_back(distinctSorted(metrics::entitiesOf(d, entity)));
    for (const auto& e : perDoc.back()) ++docs[e];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(docs.begin(), docs.end());
  std::sort(ranked.begin(), ranked.end(), byCountThenName<std::size_t>);
  if (top_n && ranked.size() > *top_n) ranked.resize(*top_n);

  GraphBuilder b;
  b.dropIsolated();
  for (const auto& [name, n] : ranked) b.addNode(name, name, static_cast<double>(n));
  for (const auto& ents : perDoc) {
    std::vector<std::string> kept;
    for (const auto& e : ents)
      if (b.hasNode(e)) kept.push_back(e);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j) b.addEdge(kept[i], kept[j], 1.0);
  }
  Graph g = b.build();
  g.metadata["level"] = std::string(toString(level));
  g.metadata["counting"] = "full";
  if (top_n) g.metadata["top_n"] = std::to_string(*top_n);
  return g;
}

Graph historiograph(const Corpus& corpus, std::size_t n) {
  const auto local = matchLocalCitations(corpus);
  const auto& docs = corpus.documents();
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (local.per_document[a] != local.per_document[b])
      return local.per_document[a] > local.per_document[b];
    const int ya = docs[a].pub_year.value_or(std::numeric_limits<int>::max());
    const int yb = docs[b].pub_year.value_or(std::numeric_limits<int>::max());
    if (ya != yb) return ya < yb;
    return docs[a].id < docs[b].id;
  });
  if (order.size() > n) order.resize(n);
  const std::set<std::size_t> chosen(order.begin(), order.end());

  std::vector<std::string> flags;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  std::vector<std::pair<std::size_t, std::size_t>> sameYear;
  for (auto citing : chosen) {
    for (auto cited : local.cites[citing]) {
      if (!chosen.count(cited)) continue;
      const auto& yc = docs[citing].pub_year;
      const auto& yd = docs[cited].pub_year;
      if (yc && yd && *yc > *yd) {
        arcs.emplace_back(citing, cited);
      } else if (yc && yd && *yc < *yd) {
        flags.push_back("dropped-backward:" + docs[citing].id + "->" + docs[cited].id);
      } else {
        sameYear.emplace_back(citing, cited);
      }
    }
  }

  // Reachability over the arcs kept so far.
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (const auto& [a, b] : arcs) out[a].push_back(b);
  const auto reaches = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> stack{from};
    std::set<std::size_t> seen{from};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (auto w : out[v])
        if (seen.insert(w).second) stack.push_back(w);
    }
    return false;
  };
  for (const auto& [a, b] : sameYear) {
    const std::string tag = docs[a].id + "->" + docs[b].id;
    if (reaches(b, a)) {
      flags.push_back("dropped-same-year-cycle:" + tag);
      continue;
    }
    flags.push_back(
        (docs[a].pub_year && docs[b].pub_year ? "same-year:" : "undated:") + tag);
    arcs.emplace_back(a, b);
    out[a].push_back(b);
  }

  GraphBuilder builder(true);
  for (auto i : chosen)
    builder.addNode(docs[i].id, docLabel(docs[i]), static_cast<double>(local.per_document[i]));
  for (const auto& [a, b] : arcs) builder.addEdge(docs[a].id, docs[b].id, 1.0);
  Graph g = builder.build();
  g.flags = std::move(flags);
  g.metadata["orientation"] = "citing->cited";
  g.metadata["n"] = std::to_string(n);
  return g;
}

std::optional<FlowField> flowFieldFromString(std::string_view s) {
  const std::string l = text::toLower(s);
  if (l == "country" || l == "cu") return FlowField::Country;
  if (l == "de" || l == "keyword" || l == "keywords") return FlowField::AuthorKeyword;
  if (l == "id" || l == "keywords-plus") return FlowField::KeywordPlus;
  if (l == "affiliation" || l == "institution" || l == "c1") return FlowField::Affiliation;
  if (l == "author" || l == "au") return FlowField::Author;
  if (l == "source" || l == "so") return FlowField::Source;
  return std::nullopt;
}

std::string_view toString(FlowField f) {
  switch (f) {
    case FlowField::Country:
      return "country";
    case FlowField::AuthorKeyword:
      return "DE";
    case FlowField::KeywordPlus:
      return "ID";
    case FlowField::Affiliation:
      return "affiliation";
    case FlowField::Author:
      return "author";
    case FlowField::Source:
      return "source";
  }
  return "country";
}

std::vector<std::string> flowValues(const Document& d, FlowField field) {
  switch (field) {
    case FlowField::Country:
      return distinctSorted(metrics::entitiesOf(d, metrics::Entity::Country));
    case FlowField::AuthorKeyword:
      return distinctSorted(metrics::termsOf(d, metrics::TermField::AuthorKeywords));
    case FlowField::KeywordPlus:
      return distinctSorted(metrics::termsOf(d, metrics::TermField::KeywordsPlus));
    case FlowField::Affiliation:
      return distinctSorted(metrics::entitiesOf(d, metrics::Entity::Affiliation));
    case FlowField::Author:
      return distinctSorted(metrics::entitiesOf(d, metrics::Entity::Author));
    case FlowField::Source:
      return distinctSorted(metrics::entitiesOf(d, metrics::Entity::Source));
  }
  return {};
}

namespace {

FlowPillar topItems(const Corpus& corpus, FlowField field, std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : corpus.documents())
    for (const auto& v : flowValues(d, field)) ++counts[v];
  FlowPillar p;
  p.field = field;
  p.items.assign(counts.begin(), counts.end());
  std::sort(p.items.begin(), p.items.end(), byCountThenName<std::size_t>);
  if (p.items.size() > k) p.items.resize(k);
  return p;
}

std::vector<Flow> flowsBetween(const Corpus& corpus, const FlowPillar& from, const FlowPillar& to) {
  std::set<std::string> a;
  std::set<std::string> b;
  for (const auto& [item, n] : from.items) a.insert(item);
  for (const auto& [item, n] : to.items) b.insert(item);
  std::map<std::pair<std::string, std::string>, std::size_t> w;
  for (const auto& d : corpus.documents()) {
    const auto va = flowValues(d, from.field);
    const auto vb = flowValues(d, to.field);
    for (const auto& x : va) {
      if (!a.count(x)) continue;
      for (const auto& y : vb)
        if (b.count(y)) ++w[{x, y}];
    }
  }
  std::vector<Flow> out;
  for (const auto& [key, n] : w) out.push_back({key.first, key.second, n});
  return out;
}

}  // namespace

ThreeFieldFlow threeFieldFlow(const Corpus& corpus, FlowField left, FlowField middle, FlowField right,
                              std::size_t k_left, std::size_t k_mid, std::size_t k_right) {
  ThreeFieldFlow f;
  f.left = topItems(corpus, left, k_left);
  f.middle = topItems(corpus, middle, k_mid);
  f.right = topItems(corpus, right, k_right);
  f.left_middle = flowsBetween(corpus, f.left, f.middle);
  f.middle_right = flowsBetween(corpus, f.middle, f.right);
  return f;
}

double inclusionIndex(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  return static_cast<double>(common) / static_cast<double>(std::min(sa.size(), sb.size()));
}

std::vector<ThematicSlice> thematicEvolution(const Corpus& corpus,
                                             const std::vector<std::pair<int, int>>& slices,
                                             const ThematicOptions& options) {
  if (slices.empty()) throw DomainError("thematic evolution needs at least one slice");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (slices[i].first > slices[i].second)
      throw DomainError("slice " + std::to_string(i + 1) + " ends before it starts");
    if (i > 0 && slices[i].first <= slices[i - 1].second)
      throw DomainError("slices must be ordered and non-overlapping");
  }
  const auto field = metrics::TermField::AbstractNgrams;

  std::vector<ThematicSlice> out;
  for (const auto& [start, end] : slices) {
    ThematicSlice slice;
    slice.start_year = start;
    slice.end_year = end;

    std::vector<std::vector<std::string>> perDoc;
    std::map<std::string, std::size_t> freq;
    for (const auto& d : corpus.documents()) {
      if (!d.pub_year || *d.pub_year < start || *d.pub_year > end || !d.abstract) continue;
      perDoc.push_back(metrics::termsOf(d, field, options.ngram));
      for (const auto& t : perDoc.back()) ++freq[t];
    }
    if (perDoc.empty()) {
      slice.flags.push_back("no-abstracts");
      out.push_back(std::move(slice));
      continue;
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), byCountThenName<std::size_t>);
    if (ranked.size() > options.n_terms) ranked.resize(options.n_terms);

    GraphBuilder b;
    for (const auto& [term, n] : ranked) b.addNode(term, term, static_cast<double>(n));
    for (auto& terms : perDoc) {
      std::vector<std::string> kept;
      for (auto& t : terms)
        if (b.hasNode(t)) kept.push_back(std::move(t));
      std::sort(kept.begin(), kept.end());
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j) b.addEdge(kept[i], kept[j], 1.0);
    }
    const Graph g = b.build();
    const Clustering c = walktrap(g);
    for (const auto& members : c.members()) {
      ThemeCluster cl;
      std::vector<std::pair<std::string, std::size_t>> terms;
      for (auto i : members) {
        const auto n = static_cast<std::size_t>(g.nodes[i].weight);
        terms.emplace_back(g.nodes[i].id, n);
        cl.frequency += n;
      }
      if (cl.frequency < options.min_cluster_freq) continue;
      std::sort(terms.begin(), terms.end(), byCountThenName<std::size_t>);
      for (const auto& [t, n] : terms) cl.terms.push_back(t);
      cl.label = cl.terms.front();
      slice.clusters.push_back(std::move(cl));
    }
    std::sort(slice.clusters.begin(), slice.clusters.end(),
              [](const ThemeCluster& a, const ThemeCluster& b) {
                if (a.frequency != b.frequency) return a.frequency > b.frequency;
                return a.label < b.label;
              });
    out.push_back(std::move(slice));
  }

  for (std::size_t s = 0; s + 1 < out.size(); ++s) {
    const auto& here = out[s].clusters;
    const auto& next = out[s + 1].clusters;
    for (std::size_t i = 0; i < here.size(); ++i)
      for (std::size_t j = 0; j < next.size(); ++j) {
        const double w = inclusionIndex(here[i].terms, next[j].terms);
        if (w > 0.0 && w >= options.min_weight_index) out[s].links_to_next.push_back({i, j, w});
      }
  }
  return out;
}

Rpys rpys(const Corpus& corpus) {
  const ReferenceMatcher matcher(corpus);
  std::map<int, std::set<std::string>> refs;
  std::map<int, std::size_t> mentions;
  std::set<std::string> undated;
  Rpys out;
  for (const auto& d : corpus.documents()) {
    for (const auto& ref : d.cited_refs) {
      if (!ref.year) {
        ++out.undated_mentions;
        undated.insert(matcher.key(ref));
        continue;
      }
      refs[*ref.year].insert(matcher.key(ref));
      ++mentions[*ref.year];
    }
  }
  out.undated_references = undated.size();
  if (refs.empty()) return out;
  const int first = refs.begin()->first;
  const int last = refs.rbegin()->first;
  for (int y = first; y <= last; ++y) {
    RpysRow row;
    row.year = y;
    const auto it = refs.find(y);
    if (it != refs.end()) {
      row.n_references = it->second.size();
      row.citations = mentions[y];
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace scimap::mapping
