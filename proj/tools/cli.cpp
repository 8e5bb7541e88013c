#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "scimap/error.hpp"
#include "scimap/ingest/corpus.hpp"
#include "scimap/ingest/record.hpp"
#include "scimap/io/corpus_io.hpp"
#include "scimap/io/graph_io.hpp"
#include "scimap/io/table.hpp"
#include "scimap/mapping/centrality.hpp"
#include "scimap/mapping/networks.hpp"
#include "scimap/metrics/amortize.hpp"
#include "scimap/metrics/descriptive.hpp"
#include "scimap/metrics/laws.hpp"
#include "scimap/metrics/terms.hpp"
#include "scimap/mfas/mfas.hpp"
#include "scimap/mfas/rng.hpp"
#include "scimap/text.hpp"
#include "scimap/version.hpp"

namespace scimap::cli {

namespace fs = std::filesystem;
using io::Table;

namespace {

/// Missing or contradictory parameters detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  // Shared flags.
  std::string out_dir = "scimap-out";
  std::string format = "auto";
  std::optional<int> reference_year;
  std::optional<std::size_t> min_occurrence;
  std::optional<std::size_t> min_citations;
  std::optional<std::size_t> top_n;
  std::string slices;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::size_t> trials;

  // Per-command inputs.
  std::vector<std::string> inputs;
  std::string corpus;
  std::string output;
  std::string retracted;
  std::string cr_separator = "\\n";
  std::string table;
  std::string graph;
  std::string field = "DE";
  std::string entity = "author";
  std::string level = "country";
  std::string network;
  std::string fields = "country,DE,affiliation";
  std::string ks = "10,10,10";
  std::string lexicon;
  std::string graph_format = "both";
  bool exclude_last_year = false;
  std::size_t min_freq = 5;
  std::size_t per_year = 4;
  std::size_t min_cluster_freq = 20;
  double min_weight = 0.02;
  double damping = 0.85;
  int walk_length = 4;
};

std::string basename(const std::string& path) { return fs::path(path).filename().string(); }

std::string fileFingerprint(const std::string& path) {
  return basename(path) + "@" + io::fnv1a64Hex(io::readFile(path));
}

class Context {
 public:
  Context(std::string command, const Settings& s, std::ostream& out)
      : command_(std::move(command)), settings_(s), out_(out) {}

  const Settings& settings() const { return settings_; }
  std::ostream& out() { return out_; }

  /// Adds one configuration item to the hashed canonical configuration.
  void config(const std::string& key, const std::string& value) { config_[key] = value; }
  void provenance(const std::vector<std::string>& p) { provenance_ = p; }
  void extra(const std::string& key, const std::string& value) { extra_.emplace_back(key, value); }

  io::ArtifactHeader header() const {
    io::ArtifactHeader h;
    h.add("engine", std::string(kEngineName) + " " + std::string(kEngineVersion));
    h.add("command", command_);
    std::string canonical = command_;
    for (const auto& [k, v] : config_) canonical += "\n" + k + "=" + v;
    h.add("config_hash", io::fnv1a64Hex(canonical));
    std::string prov;
    for (const auto& p : provenance_) prov += (prov.empty() ? "" : "; ") + p;
    h.add("provenance", prov.empty() ? "none" : prov);
    for (const auto& [k, v] : extra_) h.add(k, v);
    return h;
  }

  fs::path path(const std::string& name) const { return fs::path(settings_.out_dir) / name; }

  void writeTable(const std::string& name, const Table& t) {
    std::ostringstream ss;
    io::writeTable(ss, t, header());
    io::writeFile(path(name), ss.str());
    out_ << "wrote " << path(name).string() << "\n";
  }

  void writeGraph(const std::string& stem, const mapping::Graph& g, const mapping::Clustering* c) {
    const auto h = header();
    const auto& fmt = settings_.graph_format;
    if (fmt == "both" || fmt == "graphml") {
      io::writeFile(path(stem + ".graphml"), io::writeGraph(g, c, io::GraphFlavor::GraphML, h));
      out_ << "wrote " << path(stem + ".graphml").string() << "\n";
    }
    if (fmt == "both" || fmt == "dot") {
      io::writeFile(path(stem + ".dot"), io::writeGraph(g, c, io::GraphFlavor::Dot, h));
      out_ << "wrote " << path(stem + ".dot").string() << "\n";
    }
  }

 private:
  std::string command_;
  const Settings& settings_;
  std::ostream& out_;
  std::map<std::string, std::string> config_;
  std::vector<std::string> provenance_;
  std::vector<std::pair<std::string, std::string>> extra_;
};

std::string num(double v) { return text::shortest(v); }
template <typename T>
std::string num(T v) requires std::is_integral_v<T> { return std::to_string(v); }

ingest::Corpus loadCorpus(Context& ctx) {
  const auto& path = ctx.settings().corpus;
  if (path.empty()) throw UsageError("a corpus file is required");
  auto corpus = io::loadCorpus(io::readFile(path), path);
  ctx.config("corpus", fileFingerprint(path));
  ctx.provenance(corpus.provenance());
  return corpus;
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& piece : text::split(s, ','))
    if (!text::trim(piece).empty()) out.emplace_back(text::trim(piece));
  return out;
}

metrics::Entity parseEntity(const std::string& s) {
  const auto e = metrics::entityFromString(s);
  if (!e) throw UsageError("unknown entity '" + s + "' (author, source, country, affiliation)");
  return *e;
}

metrics::TermField parseField(const std::string& s) {
  const auto f = metrics::termFieldFromString(s);
  if (!f) throw UsageError("unknown term field '" + s + "' (DE, ID, title, abstract)");
  return *f;
}

// ---------------------------------------------------------------- ingest

int cmdIngest(Context& ctx) {
  const auto& s = ctx.settings();
  if (s.inputs.empty()) throw UsageError("ingest needs at least one export file");
  const int parseYear = s.reference_year.value_or(9999);
  std::vector<ingest::Document> docs;
  std::vector<std::string> provenance;
  ingest::BibtexOptions bib;
  bib.reference_separator = s.cr_separator == "\\n" ? "\n" : s.cr_separator;
  for (const auto& path : s.inputs) {
    const std::string bytes = io::readFile(path);
    std::string format = s.format;
    if (format == "auto") {
      const auto first = bytes.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
      format = first != std::string::npos && bytes[first] == '@' ? "bibtex" : "plaintext";
    }
    std::vector<ingest::RawRecord> records;
    if (format == "plaintext") {
      records = ingest::parsePlaintextExport(bytes, basename(path));
    } else if (format == "bibtex") {
      records = ingest::parseBibtexExport(bytes, basename(path), bib);
    } else {
      throw UsageError("unknown format '" + format + "' (plaintext, bibtex, auto)");
    }
    if (records.empty()) throw Error(path + ": no " + format + " records found");
    for (const auto& r : records) docs.push_back(ingest::toDocument(r, parseYear));
    provenance.push_back(fileFingerprint(path) + " " + format + " records=" + std::to_string(records.size()));
    ctx.config("input:" + basename(path), io::fnv1a64Hex(bytes) + ":" + format);
  }
  std::set<std::string> retracted;
  if (!s.retracted.empty()) {
    for (const auto& line : text::split(io::readFile(s.retracted), '\n')) {
      const auto t = text::trim(line);
      if (t.empty() || t.front() == '#') continue;
      retracted.emplace(t);
      if (const auto doi = ingest::normalizeDoi(t)) retracted.insert(*doi);
    }
    ctx.config("retracted", fileFingerprint(s.retracted));
  }
  ingest::ScreenOptions opts;
  opts.reference_year = s.reference_year;
  opts.provenance = provenance;
  const auto corpus = ingest::dedupeAndScreen(std::move(docs), retracted, opts);
  ctx.provenance(provenance);
  ctx.config("reference_year", s.reference_year ? std::to_string(*s.reference_year) : "auto");

  const fs::path corpusPath = s.output.empty() ? ctx.path("corpus.jsonl") : fs::path(s.output);
  io::writeFile(corpusPath, io::saveCorpus(corpus, parseYear));
  ctx.out() << "wrote " << corpusPath.string() << "\n";
  fs::path ledger = corpusPath;
  ledger.replace_filename(corpusPath.stem().string() + ".screening.csv");
  std::ostringstream ss;
  io::writeTable(ss, io::screeningTable(corpus), ctx.header());
  io::writeFile(ledger, ss.str());
  ctx.out() << "wrote " << ledger.string() << "\n";
  ctx.out() << corpus.size() << " documents kept, " << corpus.screening().size() << " removed\n";
  return kExitOk;
}

// ---------------------------------------------------------------- descriptive

int cmdCoverage(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto report = ingest::coverageReport(corpus);
  Table t;
  t.columns = {"tag", "description", "missing", "missing_pct", "label"};
  for (const auto& r : report.rows)
    t.addRow({r.tag, r.description, num(r.missing_count), text::fixed(r.missing_pct, 2),
              std::string(ingest::toString(r.label))});
  ctx.writeTable("coverage.csv", t);
  return kExitOk;
}

int cmdStats(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto& s = ctx.settings();
  ctx.config("exclude_last_year", s.exclude_last_year ? "1" : "0");
  metrics::SummaryOptions opts;
  opts.growth_excludes_last_year = s.exclude_last_year;
  const auto sum = metrics::descriptiveSummary(corpus, opts);

  Table t;
  t.columns = {"metric", "value"};
  t.addRow({"timespan", std::to_string(sum.first_year) + ":" + std::to_string(sum.last_year)});
  t.addRow({"sources", num(sum.sources)});
  t.addRow({"documents", num(sum.documents)});
  t.addRow({"undated_documents", num(sum.undated_documents)});
  t.addRow({"annual_growth_pct", text::fixed(sum.annual_growth_pct, 2)});
  t.addRow({"growth_span", std::to_string(sum.growth_first_year) + ":" + std::to_string(sum.growth_last_year)});
  t.addRow({"document_average_age", text::fixed(sum.document_average_age, 2)});
  t.addRow({"average_citations_per_doc", text::fixed(sum.average_citations_per_doc, 2)});
  t.addRow({"reference_mentions", num(sum.reference_mentions)});
  t.addRow({"distinct_references", num(sum.distinct_references)});
  t.addRow({"keywords_plus", num(sum.keywords_plus)});
  t.addRow({"author_keywords", num(sum.author_keywords)});
  t.addRow({"authors", num(sum.authors)});
  t.addRow({"single_document_authors", num(sum.single_document_authors)});
  t.addRow({"single_authored_documents", num(sum.single_authored_documents)});
  t.addRow({"coauthors_per_doc", text::fixed(sum.coauthors_per_doc, 2)});
  t.addRow({"international_coauthorship_pct", text::fixed(sum.international_coauthorship_pct, 2)});
  ctx.writeTable("summary.csv", t);

  const auto prod = metrics::annualProduction(corpus);
  Table p;
  p.columns = {"year", "documents"};
  for (const auto& [y, v] : prod.series.points) p.addRow({std::to_string(y), num(v)});
  ctx.writeTable("annual_production.csv", p);

  Table c;
  c.columns = {"year", "documents", "total_citations", "citable_years", "mean_per_year", "fraction"};
  for (const auto& r : metrics::meanCitationPerElapsedYearsRows(corpus))
    c.addRow({std::to_string(r.year), num(r.documents), num(r.total_citations), num(r.citable_years),
              text::fixed(r.value, 2), std::to_string(r.numerator) + "/" + std::to_string(r.denominator)});
  ctx.writeTable("citations_per_year.csv", c);

  const auto collab = metrics::collaborationIndices(corpus, metrics::correspondingCountry());
  Table k;
  k.columns = {"country", "articles", "scp", "mcp", "mcp_ratio_pct"};
  for (const auto& r : collab.countries)
    k.addRow({r.country, num(r.scp + r.mcp), num(r.scp), num(r.mcp), text::fixed(r.mcp_ratio, 1)});
  ctx.writeTable("country_collaboration.csv", k);
  return kExitOk;
}

int cmdBradford(Context& ctx) {
  const auto& s = ctx.settings();
  std::vector<metrics::SourceCount> counts;
  if (!s.table.empty()) {
    const auto t = io::readTable(io::readFile(s.table), s.table);
    if (t.columns.size() < 2) throw UsageError("source table needs columns source,articles");
    for (const auto& row : t.rows) {
      long long n = 0;
      if (!text::parseNonNegative(row[1], n)) throw Error(s.table + ": bad article count '" + row[1] + "'");
      counts.emplace_back(row[0], static_cast<std::size_t>(n));
    }
    ctx.config("table", fileFingerprint(s.table));
  } else {
    counts = metrics::sourceCounts(loadCorpus(ctx));
  }
  const auto zones = metrics::bradfordZones(counts);
  std::size_t total = 0;
  for (const auto& c : counts) total += c.second;
  Table t;
  t.columns = {"zone", "rank", "source", "articles", "cumulative", "cumulative_pct"};
  std::size_t rank = 0;
  for (const auto& z : zones)
    for (std::size_t i = 0; i < z.sources.size(); ++i)
      t.addRow({num(z.zone_index), num(++rank), z.sources[i].first, num(z.sources[i].second),
                num(z.cumulative[i]),
                text::fixed(100.0 * static_cast<double>(z.cumulative[i]) / static_cast<double>(total), 2)});
  ctx.writeTable("bradford.csv", t);
  Table zt;
  zt.columns = {"zone", "sources", "articles", "source_pct", "article_pct"};
  for (const auto& z : zones)
    zt.addRow({num(z.zone_index), num(z.sources.size()), num(z.articles), text::fixed(z.source_share_pct, 2),
               text::fixed(z.article_share_pct, 2)});
  ctx.writeTable("bradford_zones.csv", zt);
  return kExitOk;
}

int cmdLotka(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto fit = metrics::lotkaFit(metrics::authorDocCounts(corpus));
  Table t;
  t.columns = {"documents", "observed_authors", "predicted_authors"};
  for (const auto& [n, obs] : fit.observed) t.addRow({num(n), num(obs), text::fixed(fit.predicted.at(n), 2)});
  ctx.writeTable("lotka.csv", t);
  return kExitOk;
}

int cmdHindex(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto entity = parseEntity(ctx.settings().entity);
  ctx.config("entity", std::string(metrics::toString(entity)));
  const auto local = mapping::matchLocalCitations(corpus);
  auto impact = metrics::entityImpact(corpus, entity, &local.per_document);
  if (ctx.settings().top_n && impact.size() > *ctx.settings().top_n) impact.resize(*ctx.settings().top_n);
  Table t;
  t.columns = {"entity", "documents", "total_citations", "local_citations", "h_index", "first_year",
               "average_citations"};
  for (const auto& r : impact)
    t.addRow({r.entity, num(r.documents), num(r.total_citations), num(r.local_citations), num(r.h_index),
              r.first_year ? std::to_string(*r.first_year) : "", text::fixed(r.average_citations, 2)});
  ctx.writeTable("hindex.csv", t);

  Table p;
  p.columns = {"entity", "year", "documents", "cumulative"};
  auto prod = metrics::entityProductionOverTime(corpus, entity);
  if (ctx.settings().top_n && prod.size() > *ctx.settings().top_n) prod.resize(*ctx.settings().top_n);
  for (const auto& e : prod)
    for (std::size_t i = 0; i < e.yearly.points.size(); ++i)
      p.addRow({e.entity, std::to_string(e.yearly.points[i].first), num(e.yearly.points[i].second),
                num(e.cumulative.points[i].second)});
  ctx.writeTable("production_over_time.csv", p);
  return kExitOk;
}

int cmdAmortize(Context& ctx) {
  const auto& s = ctx.settings();
  if (!s.table.empty()) {
    const auto t = io::readTable(io::readFile(s.table), s.table);
    std::size_t yc = 0;
    std::size_t mc = 1;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const auto c = text::toLower(t.columns[i]);
      if (c == "year") yc = i;
      if (c == "h" || c == "metric" || c == "h_index") mc = i;
    }
    if (t.columns.size() < 2) throw UsageError("amortize table needs year and metric columns");
    metrics::AnnualSeries series;
    for (const auto& row : t.rows) {
      long long y = 0;
      if (!text::parseNonNegative(row[yc], y)) throw Error(s.table + ": bad year '" + row[yc] + "'");
      double v = 0.0;
      try {
        v = std::stod(row[mc]);
      } catch (const std::exception&) {
        throw Error(s.table + ": bad metric '" + row[mc] + "'");
      }
      series.points.emplace_back(static_cast<int>(y), v);
    }
    if (series.points.empty()) throw Error(s.table + ": no rows");
    // Without an explicit reference year the youngest row anchors the table.
    int ref = series.points.front().first;
    for (const auto& p : series.points) ref = std::max(ref, p.first);
    ref = s.reference_year.value_or(ref);
    std::sort(series.points.begin(), series.points.end());
    for (std::size_t i = 1; i < series.points.size(); ++i)
      if (series.points[i].first == series.points[i - 1].first)
        throw Error(s.table + ": year " + std::to_string(series.points[i].first) + " appears twice");
    ctx.config("table", fileFingerprint(s.table));
    ctx.config("reference_year", std::to_string(ref));
    ctx.extra("reference_year", std::to_string(ref));
    Table out;
    out.columns = {"year", "metric", "citable_years", "pondering_scalar", "normalized_ps", "amortized"};
    for (const auto& r : metrics::amortize(series, ref))
      out.addRow({std::to_string(r.year), num(r.metric), num(r.citable_years), text::fixed(r.pondering_scalar, 4),
                  text::fixed(r.normalized_ps, 4), text::fixed(r.amortized, 4)});
    ctx.writeTable("amortize.csv", out);
    return kExitOk;
  }

  const auto corpus = loadCorpus(ctx);
  const auto entity = parseEntity(s.entity);
  const int ref = s.reference_year.value_or(corpus.referenceYear());
  ctx.config("entity", std::string(metrics::toString(entity)));
  ctx.config("reference_year", std::to_string(ref));
  std::vector<metrics::HIndexItem> items;
  for (const auto& e : metrics::entityImpact(corpus, entity))
    if (e.first_year) items.push_back({e.entity, e.h_index, *e.first_year});
  const auto resolved = metrics::resolveAmortizedTies(metrics::amortizedHIndex(items, ref));
  Table out;
  out.columns = {"rank", "entity", "h_index", "first_year", "citable_years", "amortized", "effective_h",
                 "tie_flagged"};
  std::size_t rank = 0;
  for (const auto& r : resolved.ranked) {
    if (s.top_n && rank >= *s.top_n) break;
    out.addRow({num(++rank), r.id, num(r.h), num(r.first_year), num(r.citable_years), text::fixed(r.amortized, 4),
                num(r.effective_h), r.tie_flagged ? "1" : "0"});
  }
  ctx.writeTable("amortized_hindex.csv", out);
  Table ledger;
  ledger.columns = {"entity", "decrements"};
  for (const auto& d : resolved.ledger) ledger.addRow({d.id, num(d.decrements)});
  ctx.writeTable("amortized_ties.csv", ledger);
  return kExitOk;
}

// ---------------------------------------------------------------- terms

int cmdTerms(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto field = parseField(ctx.settings().field);
  const std::size_t top = ctx.settings().top_n.value_or(20);
  ctx.config("field", std::string(metrics::toString(field)));
  ctx.config("top_n", num(top));
  ctx.extra("stopwords", std::string(metrics::stopwordsVersion()));
  Table t;
  t.columns = {"term", "documents"};
  for (const auto& r : metrics::termFrequencies(corpus, field, top)) t.addRow({r.term, num(r.frequency)});
  ctx.writeTable("terms.csv", t);
  Table d;
  d.columns = {"term", "year", "cumulative"};
  for (const auto& td : metrics::termDynamics(corpus, field, std::min<std::size_t>(top, 10)))
    for (const auto& [y, v] : td.cumulative.points) d.addRow({td.term, std::to_string(y), num(v)});
  ctx.writeTable("term_dynamics.csv", d);
  return kExitOk;
}

int cmdTrending(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  metrics::TrendingOptions o;
  o.field = parseField(ctx.settings().field);
  o.min_freq = ctx.settings().min_freq;
  o.max_per_year = ctx.settings().per_year;
  ctx.config("field", std::string(metrics::toString(o.field)));
  ctx.config("min_freq", num(o.min_freq));
  ctx.config("per_year", num(o.max_per_year));
  Table t;
  t.columns = {"term", "frequency", "q1_year", "median_year", "q3_year"};
  for (const auto& r : metrics::trendingTerms(corpus, o))
    t.addRow({r.term, num(r.frequency), num(*r.q1_year), num(*r.median_year), num(*r.q3_year)});
  ctx.writeTable("trending.csv", t);
  return kExitOk;
}

std::vector<std::pair<std::string, std::vector<std::string>>> lexiconSection(const nlohmann::json& j,
                                                                             const char* key) {
  metrics::Lexicon out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key))
    out.emplace_back(item.at("label").get<std::string>(), item.at("synonyms").get<std::vector<std::string>>());
  return out;
}

int cmdMethods(Context& ctx) {
  const auto& s = ctx.settings();
  if (s.lexicon.empty()) throw UsageError("methods needs --lexicon FILE");
  metrics::Lexicon methods;
  metrics::Lexicon niches;
  try {
    const auto j = nlohmann::json::parse(io::readFile(s.lexicon));
    methods = lexiconSection(j, "methods");
    niches = lexiconSection(j, "niches");
  } catch (const nlohmann::json::exception& e) {
    throw Error(s.lexicon + ": " + e.what());
  }
  const auto corpus = loadCorpus(ctx);
  const std::size_t minOcc = s.min_occurrence.value_or(3);
  ctx.config("lexicon", fileFingerprint(s.lexicon));
  ctx.config("min_occurrence", num(minOcc));
  const auto m = metrics::methodOccurrence(corpus, metrics::nichesFromLexicon(niches), methods, minOcc);
  Table t;
  t.columns = {"niche"};
  for (const auto& meth : m.methods) t.columns.push_back(meth);
  t.columns.push_back("total");
  for (std::size_t i = 0; i < m.niches.size(); ++i) {
    std::vector<std::string> row{m.niches[i]};
    for (auto c : m.counts[i]) row.push_back(num(c));
    row.push_back(num(m.niche_totals[i]));
    t.addRow(std::move(row));
  }
  std::vector<std::string> totals{"total"};
  for (auto c : m.method_totals) totals.push_back(num(c));
  totals.push_back(num(m.grand_total));
  t.addRow(std::move(totals));
  ctx.writeTable("methods.csv", t);
  return kExitOk;
}

// ---------------------------------------------------------------- networks

mapping::Graph buildNetwork(Context& ctx, const ingest::Corpus& corpus, const std::string& fallback) {
  const auto& s = ctx.settings();
  const std::string kind = s.network.empty() ? fallback : s.network;
  ctx.config("network", kind);
  if (kind == "cooccur") {
    const auto field = parseField(s.field);
    const std::size_t min = s.min_occurrence.value_or(5);
    ctx.config("field", std::string(metrics::toString(field)));
    ctx.config("min_occurrence", num(min));
    return mapping::cooccurrenceGraph(corpus, field, min);
  }
  if (kind == "cocite") {
    const std::size_t min = s.min_citations.value_or(20);
    ctx.config("min_citations", num(min));
    return mapping::cocitationGraph(corpus, min);
  }
  if (kind == "collab") {
    const auto level = mapping::collaborationLevelFromString(s.level);
    if (!level) throw UsageError("unknown collaboration level '" + s.level + "'");
    ctx.config("level", std::string(mapping::toString(*level)));
    if (s.top_n) ctx.config("top_n", num(*s.top_n));
    return mapping::collaborationGraph(corpus, *level, s.top_n);
  }
  throw UsageError("unknown network '" + kind + "' (cooccur, cocite, collab)");
}

mapping::Graph graphInput(Context& ctx, const std::string& fallback) {
  const auto& s = ctx.settings();
  if (!s.graph.empty()) {
    const std::string text = io::readFile(s.graph);
    ctx.config("graph", fileFingerprint(s.graph));
    const bool dot = text::endsWith(text::toLower(s.graph), ".dot") || text::endsWith(text::toLower(s.graph), ".gv");
    return dot ? io::readDot(text, s.graph).graph : io::readGraphml(text, s.graph).graph;
  }
  const auto corpus = loadCorpus(ctx);
  return buildNetwork(ctx, corpus, fallback);
}

Table nodeTable(const mapping::Graph& g, const mapping::Clustering& c) {
  Table t;
  t.columns = {"id", "label", "weight", "cluster", "strength"};
  const auto strength = g.strength();
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    t.addRow({g.nodes[i].id, g.nodes[i].label, num(g.nodes[i].weight), num(c.membership[i]), num(strength[i])});
  return t;
}

int networkCommand(Context& ctx, const std::string& kind, const std::string& stem) {
  const auto corpus = loadCorpus(ctx);
  const auto g = buildNetwork(ctx, corpus, kind);
  const auto c = mapping::walktrap(g, ctx.settings().walk_length);
  ctx.extra("nodes", num(g.nodes.size()));
  ctx.extra("links", num(g.edges.size()));
  ctx.extra("total_link_strength", num(g.totalLinkStrength()));
  ctx.extra("clusters", num(c.cluster_count));
  ctx.extra("modularity", num(c.modularity));
  ctx.writeGraph(stem, g, &c);
  ctx.writeTable(stem + "_nodes.csv", nodeTable(g, c));
  ctx.out() << g.nodes.size() << " nodes, " << g.edges.size() << " links, total strength "
            << num(g.totalLinkStrength()) << "\n";
  return kExitOk;
}

int cmdPagerank(Context& ctx) {
  const auto g = graphInput(ctx, "collab");
  mapping::PageRankOptions o;
  o.damping = ctx.settings().damping;
  ctx.config("damping", num(o.damping));
  const auto scores = mapping::pagerank(g, o);
  std::vector<std::size_t> order(g.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  Table t;
  t.columns = {"rank", "id", "label", "pagerank"};
  std::size_t rank = 0;
  for (auto i : order) t.addRow({num(++rank), g.nodes[i].id, g.nodes[i].label, text::fixed(scores[i], 10)});
  ctx.extra("tolerance", num(o.tolerance));
  ctx.writeTable("pagerank.csv", t);
  return kExitOk;
}

int cmdBetweenness(Context& ctx) {
  const auto g = graphInput(ctx, "collab");
  const auto scores = mapping::betweenness(g);
  std::vector<std::size_t> order(g.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  Table t;
  t.columns = {"rank", "id", "label", "betweenness"};
  std::size_t rank = 0;
  for (auto i : order) t.addRow({num(++rank), g.nodes[i].id, g.nodes[i].label, num(scores[i])});
  ctx.extra("path_length", "hop count; edge weights ignored");
  ctx.writeTable("betweenness.csv", t);
  return kExitOk;
}

int cmdWalktrap(Context& ctx) {
  const auto g = graphInput(ctx, "cooccur");
  ctx.config("walk_length", num(ctx.settings().walk_length));
  const auto c = mapping::walktrap(g, ctx.settings().walk_length);
  ctx.extra("clusters", num(c.cluster_count));
  ctx.extra("modularity", num(c.modularity));
  ctx.writeTable("walktrap.csv", nodeTable(g, c));
  ctx.writeGraph("walktrap", g, &c);
  ctx.out() << c.cluster_count << " clusters, modularity " << text::fixed(c.modularity, 4) << "\n";
  return kExitOk;
}

int cmdHistoriograph(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const std::size_t n = ctx.settings().top_n.value_or(30);
  ctx.config("top_n", num(n));
  const auto g = mapping::historiograph(corpus, n);
  const auto order = mapping::topologicalOrder(g);
  if (!order) throw Error("historiograph is not acyclic");
  std::vector<std::size_t> pos(g.nodes.size());
  for (std::size_t i = 0; i < order->size(); ++i) pos[(*order)[i]] = i + 1;
  Table t;
  t.columns = {"id", "label", "year", "local_citations", "topological_rank"};
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto* d = corpus.findById(g.nodes[i].id);
    t.addRow({g.nodes[i].id, g.nodes[i].label, d && d->pub_year ? std::to_string(*d->pub_year) : "",
              num(g.nodes[i].weight), num(pos[i])});
  }
  ctx.writeGraph("historiograph", g, nullptr);
  ctx.writeTable("historiograph.csv", t);
  return kExitOk;
}

int cmdSankey(Context& ctx) {
  const auto& s = ctx.settings();
  const auto names = splitList(s.fields);
  const auto ks = splitList(s.ks);
  if (names.size() != 3) throw UsageError("--fields needs three comma-separated fields");
  std::vector<mapping::FlowField> f;
  for (const auto& name : names) {
    const auto ff = mapping::flowFieldFromString(name);
    if (!ff) throw UsageError("unknown flow field '" + name + "'");
    f.push_back(*ff);
  }
  std::vector<std::size_t> k;
  for (const auto& piece : ks) {
    long long v = 0;
    if (!text::parseNonNegative(piece, v) || v < 1) throw UsageError("bad pillar size '" + piece + "'");
    k.push_back(static_cast<std::size_t>(v));
  }
  if (k.size() == 1) k.assign(3, k[0]);
  if (k.size() != 3) throw UsageError("--k needs one or three sizes");
  const auto corpus = loadCorpus(ctx);
  ctx.config("fields", s.fields);
  ctx.config("k", s.ks);
  const auto flow = mapping::threeFieldFlow(corpus, f[0], f[1], f[2], k[0], k[1], k[2]);
  Table items;
  items.columns = {"pillar", "field", "item", "documents"};
  const std::pair<const char*, const mapping::FlowPillar*> pillars[] = {
      {"left", &flow.left}, {"middle", &flow.middle}, {"right", &flow.right}};
  for (const auto& [name, p] : pillars)
    for (const auto& [item, n] : p->items) items.addRow({name, std::string(mapping::toString(p->field)), item, num(n)});
  ctx.writeTable("sankey_items.csv", items);
  Table t;
  t.columns = {"side", "from", "to", "weight"};
  for (const auto& fl : flow.left_middle) t.addRow({"left-middle", fl.from, fl.to, num(fl.weight)});
  for (const auto& fl : flow.middle_right) t.addRow({"middle-right", fl.from, fl.to, num(fl.weight)});
  ctx.writeTable("sankey_flows.csv", t);
  return kExitOk;
}

std::vector<std::pair<int, int>> parseSlices(const std::string& slices) {
  std::vector<std::pair<int, int>> out;
  for (const auto& piece : splitList(slices)) {
    const auto dash = piece.find('-');
    long long a = 0;
    long long b = 0;
    const bool ok = dash != std::string::npos && text::parseNonNegative(piece.substr(0, dash), a) &&
                    text::parseNonNegative(piece.substr(dash + 1), b);
    if (!ok) throw UsageError("bad slice '" + piece + "' (expected START-END)");
    out.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  if (out.empty()) throw UsageError("themes needs --slices START-END[,START-END...]");
  return out;
}

int cmdThemes(Context& ctx) {
  const auto& s = ctx.settings();
  const auto slices = parseSlices(s.slices);
  const auto corpus = loadCorpus(ctx);
  mapping::ThematicOptions o;
  o.n_terms = s.top_n.value_or(1000);
  o.min_cluster_freq = s.min_cluster_freq;
  o.min_weight_index = s.min_weight;
  ctx.config("slices", s.slices);
  ctx.config("n_terms", num(o.n_terms));
  ctx.config("min_cluster_freq", num(o.min_cluster_freq));
  ctx.config("min_weight_index", num(o.min_weight_index));
  ctx.extra("stopwords", std::string(metrics::stopwordsVersion()));
  std::vector<mapping::ThematicSlice> result;
  try {
    result = mapping::thematicEvolution(corpus, slices, o);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  Table c;
  c.columns = {"slice", "start_year", "end_year", "cluster", "label", "frequency", "terms", "flags"};
  Table l;
  l.columns = {"from_slice", "from_label", "to_slice", "to_label", "inclusion_index"};
  for (std::size_t i = 0; i < result.size(); ++i) {
    const auto& sl = result[i];
    std::string flags;
    for (const auto& f : sl.flags) flags += (flags.empty() ? "" : ";") + f;
    if (sl.clusters.empty())
      c.addRow({num(i + 1), num(sl.start_year), num(sl.end_year), "", "", "0", "", flags});
    for (std::size_t k = 0; k < sl.clusters.size(); ++k) {
      std::string terms;
      for (const auto& t : sl.clusters[k].terms) terms += (terms.empty() ? "" : ";") + t;
      c.addRow({num(i + 1), num(sl.start_year), num(sl.end_year), num(k + 1), sl.clusters[k].label,
                num(sl.clusters[k].frequency), terms, flags});
    }
    for (const auto& link : sl.links_to_next)
      l.addRow({num(i + 1), sl.clusters[link.from].label, num(i + 2), result[i + 1].clusters[link.to].label,
                text::fixed(link.weight, 4)});
  }
  ctx.writeTable("themes_clusters.csv", c);
  ctx.writeTable("themes_links.csv", l);
  return kExitOk;
}

int cmdRpys(Context& ctx) {
  const auto corpus = loadCorpus(ctx);
  const auto r = mapping::rpys(corpus);
  ctx.extra("undated_mentions", num(r.undated_mentions));
  ctx.extra("undated_references", num(r.undated_references));
  Table t;
  t.columns = {"year", "n_references", "citations"};
  for (const auto& row : r.rows) t.addRow({num(row.year), num(row.n_references), num(row.citations)});
  ctx.writeTable("rpys.csv", t);
  return kExitOk;
}

// ---------------------------------------------------------------- mfas

std::uint64_t seedFor(Context& ctx) {
  std::uint64_t seed;
  if (ctx.settings().seed) {
    seed = *ctx.settings().seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    ctx.out() << "seed not given; using " << seed << "\n";
  }
  ctx.config("seed", std::to_string(seed));
  ctx.extra("seed", std::to_string(seed));
  ctx.extra("rng", std::string(mfas::kRngAlgorithm));
  return seed;
}

mfas::Multigraph multigraphInput(Context& ctx) {
  const auto& s = ctx.settings();
  if (s.graph.empty()) throw UsageError("--graph FILE is required (lines 'u v multiplicity')");
  ctx.config("graph", fileFingerprint(s.graph));
  ctx.provenance({fileFingerprint(s.graph)});
  return io::readMultigraph(io::readFile(s.graph), s.graph);
}

int cmdMfas(Context& ctx) {
  const auto mg = multigraphInput(ctx);
  const int t = ctx.settings().runs.value_or(20);
  if (t < 1) throw UsageError("--runs must be at least 1");
  ctx.config("runs", num(t));
  const auto seed = seedFor(ctx);
  const auto result = mfas::solve(mg, t, seed);

  std::optional<mfas::BruteForceResult> oracle;
  if (mg.arcCount() <= mfas::kBruteForceCap) oracle = mfas::bruteForceOptimum(mg);

  Table sol;
  sol.columns = {"source", "target", "multiplicity", "removed"};
  for (const auto& b : mg.bundles()) {
    const auto it = result.best.removed.find({b.u, b.v});
    sol.addRow({mg.nodes()[b.u], mg.nodes()[b.v], num(b.multiplicity),
                num(it == result.best.removed.end() ? std::size_t{0} : it->second)});
  }
  ctx.writeTable("mfas_solution.csv", sol);

  Table rep;
  rep.columns = {"key", "value"};
  rep.addRow({"runs", num(t)});
  rep.addRow({"best_size", num(result.report.best_size)});
  rep.addRow({"reference_bound", mfas::successLowerBoundDecimal(t)});
  std::string order;
  for (auto v : result.best.witness_order) order += (order.empty() ? "" : " ") + mg.nodes()[v];
  rep.addRow({"witness_order", order});
  if (oracle) {
    std::size_t hits = 0;
    for (auto sz : result.report.run_sizes) hits += sz == oracle->optimum;
    rep.addRow({"oracle_optimum", num(oracle->optimum)});
    rep.addRow({"empirical_success_rate", num(static_cast<double>(hits) / static_cast<double>(t))});
  }
  std::string sizes;
  for (auto sz : result.report.run_sizes) sizes += (sizes.empty() ? "" : " ") + num(sz);
  rep.addRow({"run_sizes", sizes});
  ctx.writeTable("mfas_report.csv", rep);
  ctx.out() << "best size " << result.report.best_size << " after " << t << " runs; reference bound "
            << mfas::successLowerBoundDecimal(t) << "\n";
  return kExitOk;
}

int cmdMfasCalibrate(Context& ctx) {
  const auto mg = multigraphInput(ctx);
  const int t = ctx.settings().runs.value_or(10);
  const std::size_t trials = ctx.settings().trials.value_or(1000);
  if (t < 1) throw UsageError("--runs must be at least 1");
  ctx.config("runs", num(t));
  ctx.config("trials", num(trials));
  const auto seed = seedFor(ctx);
  const auto rep = mfas::calibrationHarness(mg, t, trials, seed);

  Table tr;
  tr.columns = {"trial", "seed", "best_size", "first_optimal_run", "run_optimal"};
  for (const auto& r : rep.records) {
    std::string bits;
    for (bool b : r.run_optimal) bits.push_back(b ? '1' : '0');
    tr.addRow({num(r.trial), std::to_string(r.seed), num(r.best_size),
               r.first_optimal_run ? num(*r.first_optimal_run) : "", bits});
  }
  ctx.writeTable("calibration_trials.csv", tr);

  Table curve;
  curve.columns = {"t", "empirical", "reference_bound", "wilson_lower_model"};
  for (int r = 1; r <= t; ++r) {
    const double model = 1.0 - std::pow(1.0 - rep.per_run_interval.lower, r);
    curve.addRow({num(r), text::fixed(rep.empirical_curve[static_cast<std::size_t>(r - 1)], 6),
                  mfas::successLowerBoundDecimal(r), text::fixed(model, 6)});
  }
  ctx.writeTable("calibration_curve.csv", curve);

  Table sum;
  sum.columns = {"key", "value"};
  sum.addRow({"optimum", num(rep.optimum)});
  sum.addRow({"runs_per_trial", num(t)});
  sum.addRow({"trials", num(trials)});
  sum.addRow({"optimal_runs", num(rep.optimal_runs)});
  sum.addRow({"total_runs", num(rep.total_runs)});
  sum.addRow({"per_run_rate", text::fixed(rep.per_run_rate, 6)});
  sum.addRow({"wilson99_lower", text::fixed(rep.per_run_interval.lower, 6)});
  sum.addRow({"wilson99_upper", text::fixed(rep.per_run_interval.upper, 6)});
  ctx.writeTable("calibration_summary.csv", sum);
  ctx.out() << "per-run success " << text::fixed(rep.per_run_rate, 4) << " (99% Wilson "
            << text::fixed(rep.per_run_interval.lower, 4) << ".." << text::fixed(rep.per_run_interval.upper, 4)
            << ")\n";
  return kExitOk;
}

const char* kFooter = R"(Configuration precedence: command-line flags, then the --config file, then
SCIMAP_OUT (output directory only), then built-in defaults.  The config file
is TOML/INI: top-level keys use the long flag names (e.g. min-occurrence = 3,
out = "results"); subcommand options go in a [subcommand] section.

Exit status: 0 success, 1 data error, 2 usage error.)";

}  // namespace

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"scimap: bibliometric analysis and science mapping", "scimap"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read option defaults from a TOML/INI file");
  app.set_version_flag("--version", std::string(kEngineVersion));

  app.add_option("--out", s.out_dir, "Output directory")->envname("SCIMAP_OUT")->capture_default_str();
  app.add_option("--format", s.format, "Export format: plaintext, bibtex or auto")->capture_default_str();
  app.add_option("--reference-year", s.reference_year, "Reference (current) year");
  app.add_option("--min-occurrence", s.min_occurrence, "Minimum term occurrence");
  app.add_option("--min-citations", s.min_citations, "Minimum citations for co-citation nodes");
  app.add_option("--top-n", s.top_n, "Keep the N highest-ranked items");
  app.add_option("--slices", s.slices, "Year slices START-END[,START-END...]");
  app.add_option("--seed", s.seed, "Random seed (echoed in outputs)");
  app.add_option("-t,--runs", s.runs, "Monte Carlo runs per solve");
  app.add_option("--trials", s.trials, "Calibration trials");
  app.add_option("--graph-format", s.graph_format, "graphml, dot or both")
      ->check(CLI::IsMember({"graphml", "dot", "both"}))
      ->capture_default_str();

  std::map<std::string, std::function<int(Context&)>> handlers;
  const auto corpusCmd = [&](const std::string& name, const std::string& help, std::function<int(Context&)> fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("corpus", s.corpus, "Corpus file written by 'scimap ingest'");
    handlers[name] = std::move(fn);
    return sub;
  };

  auto* ingest = app.add_subcommand("ingest", "Parse exports, deduplicate and screen into a corpus file");
  ingest->add_option("inputs", s.inputs, "Export files")->required();
  ingest->add_option("-o,--output", s.output, "Corpus file (default: <out>/corpus.jsonl)");
  ingest->add_option("--retracted", s.retracted, "File listing retracted ids or DOIs, one per line");
  ingest->add_option("--cr-separator", s.cr_separator, "BibTeX cited-reference separator")->capture_default_str();
  handlers["ingest"] = cmdIngest;

  corpusCmd("coverage", "Missing-field coverage table", cmdCoverage);
  corpusCmd("stats", "Descriptive summary, annual production, citations per year, SCP/MCP", cmdStats)
      ->add_flag("--exclude-last-year", s.exclude_last_year, "Leave the last year out of the growth rate");
  corpusCmd("bradford", "Bradford zones of sources", cmdBradford)
      ->add_option("--table", s.table, "CSV of source,articles instead of a corpus");
  corpusCmd("lotka", "Lotka inverse-square fit", cmdLotka);
  corpusCmd("hindex", "Entity production and impact", cmdHindex)
      ->add_option("--entity", s.entity, "author, source, country or affiliation")
      ->capture_default_str();
  auto* am = corpusCmd("amortize", "Amortized h-index (table or corpus mode)", cmdAmortize);
  am->add_option("--table", s.table, "CSV with year,h columns");
  am->add_option("--entity", s.entity, "Entity for corpus mode")->capture_default_str();
  corpusCmd("terms", "Most frequent terms and their cumulative dynamics", cmdTerms)
      ->add_option("--field", s.field, "DE, ID, title or abstract")
      ->capture_default_str();
  auto* tr = corpusCmd("trending", "Trending topics by median year", cmdTrending);
  tr->add_option("--field", s.field, "DE, ID, title or abstract")->capture_default_str();
  tr->add_option("--min-freq", s.min_freq, "Minimum term frequency")->capture_default_str();
  tr->add_option("--per-year", s.per_year, "Terms kept per median year")->capture_default_str();

  const auto networkOptions = [&](CLI::App* sub) {
    sub->add_option("--field", s.field, "Term field for co-occurrence")->capture_default_str();
    sub->add_option("--level", s.level, "author, institution or country")->capture_default_str();
    sub->add_option("--walk-length", s.walk_length, "Walktrap walk length")->capture_default_str();
  };
  networkOptions(corpusCmd("cooccur", "Keyword co-occurrence network", [](Context& c) {
    return networkCommand(c, "cooccur", "cooccurrence");
  }));
  networkOptions(corpusCmd("cocite", "Co-citation network", [](Context& c) {
    return networkCommand(c, "cocite", "cocitation");
  }));
  networkOptions(corpusCmd("collab", "Collaboration network", [](Context& c) {
    return networkCommand(c, "collab", "collaboration");
  }));
  for (const auto& [name, fn, help] :
       {std::tuple<const char*, std::function<int(Context&)>, const char*>{"pagerank", cmdPagerank, "PageRank"},
        {"betweenness", cmdBetweenness, "Betweenness centrality"},
        {"walktrap", cmdWalktrap, "Walktrap communities"}}) {
    auto* sub = corpusCmd(name, help, fn);
    networkOptions(sub);
    sub->add_option("--graph", s.graph, "GraphML or DOT file instead of a corpus");
    sub->add_option("--network", s.network, "cooccur, cocite or collab");
    if (std::string(name) == "pagerank")
      sub->add_option("--damping", s.damping, "Damping factor")->capture_default_str();
  }
  corpusCmd("historiograph", "Direct-citation network of the most locally cited documents", cmdHistoriograph);
  auto* sk = corpusCmd("sankey", "Three-field flow", cmdSankey);
  sk->add_option("--fields", s.fields, "left,middle,right fields")->capture_default_str();
  sk->add_option("--k", s.ks, "Items per pillar (one or three sizes)")->capture_default_str();
  auto* th = corpusCmd("themes", "Thematic evolution over year slices", cmdThemes);
  th->add_option("--min-cluster-freq", s.min_cluster_freq, "Minimum cluster frequency")->capture_default_str();
  th->add_option("--min-weight", s.min_weight, "Minimum inclusion index for links")->capture_default_str();
  corpusCmd("rpys", "Reference publication year spectroscopy", cmdRpys);
  corpusCmd("methods", "Method occurrence per niche", cmdMethods)
      ->add_option("--lexicon", s.lexicon, "JSON lexicon with 'methods' and 'niches'");

  auto* mf = app.add_subcommand("mfas", "Monte Carlo minimum feedback arc set");
  mf->add_option("--graph", s.graph, "Multigraph file, one 'u v multiplicity' per line");
  handlers["mfas"] = cmdMfas;
  auto* mc = app.add_subcommand("mfas-calibrate", "Calibrate the Monte Carlo solver against the exact optimum");
  mc->add_option("--graph", s.graph, "Multigraph file, one 'u v multiplicity' per line");
  handlers["mfas-calibrate"] = cmdMfasCalibrate;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  Context ctx(name, s, out);
  try {
    return handlers.at(name)(ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << chosen->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace scimap::cli
