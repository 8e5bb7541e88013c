#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scimap/ingest/corpus.hpp"
#include "scimap/ingest/document.hpp"

namespace build {

struct Doc {
  scimap::ingest::Document d;

  explicit Doc(std::string id) { d.id = std::move(id); }
  Doc& year(std::optional<int> y) { d.pub_year = y; return *this; }
  Doc& tc(long long n) { d.total_citations = n; return *this; }
  Doc& source(std::string s, std::string abbrev = {}) {
    d.source = std::move(s);
    d.source_abbrev = std::move(abbrev);
    return *this;
  }
  Doc& authors(std::vector<std::string> a) { d.authors = std::move(a); return *this; }
  Doc& de(std::vector<std::string> k) { d.author_keywords = std::move(k); return *this; }
  Doc& id_terms(std::vector<std::string> k) { d.keywords_plus = std::move(k); return *this; }
  Doc& title(std::string t) { d.title = std::move(t); return *this; }
  Doc& abstract(std::string a) { d.abstract = std::move(a); return *this; }
  Doc& doi(std::string x) { d.doi = std::move(x); return *this; }
  Doc& countries(std::vector<std::string> c) { d.countries = std::move(c); return *this; }
  Doc& affiliations(std::vector<std::string> a) { d.affiliations = std::move(a); return *this; }
  Doc& corresponding(std::string country) {
    d.corresponding = scimap::ingest::Corresponding{"X, Y", "", std::move(country)};
    return *this;
  }
  Doc& cites(const std::string& raw, int max_year = 9999) {
    d.cited_refs.push_back(scimap::ingest::parseCitedReference(raw, max_year));
    return *this;
  }
  operator scimap::ingest::Document() const { return d; }
};

inline scimap::ingest::Corpus corpus(std::vector<scimap::ingest::Document> docs, int reference_year = 2023) {
  return scimap::ingest::Corpus(std::move(docs), reference_year);
}

}  // namespace build
