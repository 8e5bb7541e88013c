#include "scimap/io/corpus_io.hpp"

#include <json.hpp>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::io {

using nlohmann::json;
using ingest::Corpus;
using ingest::Document;

namespace {

template <typename T>
json optional(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optionalFrom(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json toJson(const Document& d) {
  json refs = json::array();
  for (const auto& r : d.cited_refs) refs.push_back(r.raw);
  json j;
  j["id"] = d.id;
  j["authors"] = d.authors;
  j["title"] = d.title;
  j["source"] = d.source;
  j["source_abbrev"] = d.source_abbrev;
  j["pub_year"] = optional(d.pub_year);
  j["total_citations"] = d.total_citations;
  j["cited_refs"] = refs;
  j["ref_count"] = optional(d.ref_count);
  j["author_keywords"] = d.author_keywords;
  j["keywords_plus"] = d.keywords_plus;
  j["abstract"] = optional(d.abstract);
  j["affiliations"] = d.affiliations;
  j["countries"] = d.countries;
  if (d.corresponding) {
    j["corresponding"] = {{"name", d.corresponding->name},
                          {"institution", d.corresponding->institution},
                          {"country", d.corresponding->country}};
  } else {
    j["corresponding"] = nullptr;
  }
  j["doi"] = optional(d.doi);
  j["doc_type"] = std::string(ingest::toString(d.doc_type));
  j["language"] = d.language;
  j["categories"] = d.categories;
  j["missing"] = d.missing;
  j["flags"] = d.flags;
  j["extra"] = d.extra;
  j["source_file"] = d.source_file;
  j["record_index"] = d.record_index;
  return j;
}

Document fromJson(const json& j, int parse_year) {
  Document d;
  d.id = j.at("id").get<std::string>();
  d.authors = j.at("authors").get<std::vector<std::string>>();
  d.title = j.at("title").get<std::string>();
  d.source = j.at("source").get<std::string>();
  d.source_abbrev = j.value("source_abbrev", std::string());
  d.pub_year = optionalFrom<int>(j, "pub_year");
  d.total_citations = j.at("total_citations").get<long long>();
  for (const auto& raw : j.at("cited_refs"))
    d.cited_refs.push_back(ingest::parseCitedReference(raw.get<std::string>(), parse_year));
  d.ref_count = optionalFrom<long long>(j, "ref_count");
  d.author_keywords = j.at("author_keywords").get<std::vector<std::string>>();
  d.keywords_plus = j.at("keywords_plus").get<std::vector<std::string>>();
  d.abstract = optionalFrom<std::string>(j, "abstract");
  d.affiliations = j.at("affiliations").get<std::vector<std::string>>();
  d.countries = j.at("countries").get<std::vector<std::string>>();
  if (j.contains("corresponding") && !j.at("corresponding").is_null()) {
    const auto& c = j.at("corresponding");
    d.corresponding = ingest::Corresponding{c.at("name").get<std::string>(),
                                            c.at("institution").get<std::string>(),
                                            c.at("country").get<std::string>()};
  }
  d.doi = optionalFrom<std::string>(j, "doi");
  d.doc_type = ingest::docTypeFromString(j.at("doc_type").get<std::string>());
  d.language = j.value("language", std::string());
  d.categories = j.value("categories", std::vector<std::string>{});
  d.missing = j.value("missing", std::vector<std::string>{});
  d.flags = j.value("flags", std::vector<std::string>{});
  d.extra = j.value("extra", std::map<std::string, std::vector<std::string>>{});
  d.source_file = j.value("source_file", std::string());
  d.record_index = j.value("record_index", std::size_t{0});
  return d;
}

}  // namespace

std::string saveCorpus(const Corpus& corpus, int reference_parse_year) {
  json screening = json::array();
  for (const auto& s : corpus.screening())
    screening.push_back({{"removed_id", s.removed_id},
                         {"reason", s.reason},
                         {"kept_id", s.kept_id},
                         {"source_file", s.source_file},
                         {"record_index", s.record_index}});
  json header = {{"schema", kCorpusSchema},
                 {"version", kCorpusSchemaVersion},
                 {"reference_year", corpus.referenceYear()},
                 {"reference_parse_year", reference_parse_year},
                 {"provenance", corpus.provenance()},
                 {"screening", screening}};
  std::string out = header.dump() + "\n";
  for (const auto& d : corpus.documents()) out += toJson(d).dump() + "\n";
  return out;
}

Corpus loadCorpus(std::string_view text, const std::string& file) {
  const auto lines = text::split(text, '\n');
  std::size_t lineNo = 0;
  json header;
  std::vector<Document> docs;
  int parseYear = 9999;
  for (const auto& raw : lines) {
    ++lineNo;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(file, lineNo, std::nullopt, std::string("invalid JSON: ") + e.what());
    }
    try {
      if (header.is_null()) {
        if (j.value("schema", std::string()) != kCorpusSchema)
          throw ParseError(file, lineNo, std::nullopt, "not a corpus file (missing schema header)");
        if (j.value("version", 0) != kCorpusSchemaVersion)
          throw ParseError(file, lineNo, std::nullopt,
                           "unsupported corpus version " + std::to_string(j.value("version", 0)));
        header = std::move(j);
        parseYear = header.value("reference_parse_year", 9999);
        continue;
      }
      docs.push_back(fromJson(j, parseYear));
    } catch (const json::exception& e) {
      throw ParseError(file, lineNo, std::nullopt, std::string("bad field: ") + e.what());
    }
  }
  if (header.is_null()) throw ParseError(file, std::nullopt, std::nullopt, "empty corpus file");
  std::vector<ingest::ScreeningEntry> screening;
  try {
    for (const auto& s : header.at("screening"))
      screening.push_back({s.at("removed_id").get<std::string>(), s.at("reason").get<std::string>(),
                           s.at("kept_id").get<std::string>(), s.at("source_file").get<std::string>(),
                           s.at("record_index").get<std::size_t>()});
    return Corpus(std::move(docs), header.at("reference_year").get<int>(),
                  header.at("provenance").get<std::vector<std::string>>(), std::move(screening));
  } catch (const json::exception& e) {
    throw ParseError(file, 1, std::nullopt, std::string("bad header: ") + e.what());
  }
}

Table screeningTable(const Corpus& corpus) {
  Table t;
  t.columns = {"removed_id", "reason", "kept_id", "source_file", "record_index"};
  for (const auto& s : corpus.screening())
    t.addRow({s.removed_id, s.reason, s.kept_id, s.source_file, std::to_string(s.record_index)});
  return t;
}

mfas::Multigraph readMultigraph(std::string_view text, const std::string& file) {
  mfas::Multigraph mg;
  std::size_t lineNo = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineNo;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == ',') {
        if (!cur.empty()) parts.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    if (parts.size() < 2 || parts.size() > 3)
      throw ParseError(file, lineNo, std::nullopt, "expected 'u v multiplicity'");
    long long m = 1;
    if (parts.size() == 3 && (!text::parseNonNegative(parts[2], m) || m < 1))
      throw ParseError(file, lineNo, std::nullopt, "bad multiplicity '" + parts[2] + "'");
    try {
      mg.addArcs(parts[0], parts[1], static_cast<std::size_t>(m));
    } catch (const DomainError& e) {
      throw ParseError(file, lineNo, std::nullopt, e.what());
    }
  }
  return mg;
}

}  // namespace scimap::io
