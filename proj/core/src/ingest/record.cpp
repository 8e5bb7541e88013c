#include "scimap/ingest/record.hpp"

#include <algorithm>
#include <map>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::ingest {

bool RawRecord::has(std::string_view tag) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const auto& e) { return e.first == tag; });
}

std::vector<std::string> RawRecord::values(std::string_view tag) const {
  std::vector<std::string> out;
  for (const auto& [t, vals] : entries)
    if (t == tag) out.insert(out.end(), vals.begin(), vals.end());
  return out;
}

std::string RawRecord::joined(std::string_view tag) const {
  std::string out;
  for (const auto& v : values(tag)) {
    if (!out.empty()) out.push_back(' ');
    out += v;
  }
  return out;
}

bool isFieldTag(std::string_view tag) {
  if (tag.size() != 2) return false;
  const auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  return upper(tag[0]) && (upper(tag[1]) || digit(tag[1]));
}

namespace {

std::string_view stripBom(std::string_view bytes) {
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF)
    bytes.remove_prefix(3);
  return bytes;
}

std::vector<std::string_view> lines(std::string_view bytes) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= bytes.size(); ++i) {
    if (i == bytes.size() || bytes[i] == '\n') {
      std::string_view line = bytes.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (i < bytes.size() || !line.empty()) out.push_back(line);
      start = i + 1;
    }
  }
  return out;
}

bool isTagLine(std::string_view line) {
  if (line.size() < 2 || !isFieldTag(line.substr(0, 2))) return false;
  return line.size() == 2 || line[2] == ' ';
}

}  // namespace

std::vector<RawRecord> parsePlaintextExport(std::string_view bytes,
                                            const std::string& source_file) {
  std::vector<RawRecord> records;
  std::optional<RawRecord> open;
  std::size_t ordinal = 0;

  for (std::string_view line : lines(stripBom(bytes))) {
    if (text::trim(line).empty()) continue;

    if (!open) {
      if (!isTagLine(line)) continue;
      const std::string_view tag = line.substr(0, 2);
      if (tag == "FN" || tag == "VR" || tag == "EF" || tag == "ER") continue;
      open.emplace();
      open->source_file = source_file;
      open->record_index = ordinal++;
    }

    if (isTagLine(line)) {
      const std::string tag(line.substr(0, 2));
      if (tag == "ER") {
        records.push_back(std::move(*open));
        open.reset();
        continue;
      }
      if (tag == "EF") break;
      const std::string_view value = line.size() > 3 ? line.substr(3) : std::string_view{};
      open->entries.emplace_back(tag, std::vector<std::string>{std::string(text::trim(value))});
    } else if (!open->entries.empty()) {
      // Continuation line (normally a three-space indent); anything else that
      // is not a tag is kept as a continuation too, but flagged.
      if (!text::startsWith(line, "   ")) open->flags.push_back("stray-line");
      open->entries.back().second.emplace_back(text::trim(line));
    } else {
      open->flags.push_back("stray-line");
    }
  }

  if (open)
    throw ParseError(source_file, open->record_index, std::nullopt,
                     "record not terminated by ER");
  return records;
}

namespace {

const std::map<std::string, std::string>& bibtexTagMap() {
  static const std::map<std::string, std::string> kMap = {
      {"author", "AU"},
      {"title", "TI"},
      {"journal", "SO"},
      {"booktitle", "SO"},
      {"year", "PY"},
      {"times-cited", "TC"},
      {"cited-references", "CR"},
      {"number-of-cited-references", "NR"},
      {"keywords", "DE"},
      {"keywords-plus", "ID"},
      {"abstract", "AB"},
      {"affiliation", "C1"},
      {"affiliations", "C1"},
      {"doi", "DI"},
      {"type", "DT"},
      {"language", "LA"},
      {"web-of-science-categories", "WC"},
      {"research-areas", "SC"},
      {"unique-id", "UT"},
      {"volume", "VL"},
      {"number", "IS"},
      {"pages", "PG"},
      {"journal-iso", "JI"},
      {"publisher", "PU"},
      {"issn", "SN"},
      {"eissn", "EI"},
      {"month", "PD"},
      {"orcid-numbers", "OI"},
      {"researcherid-numbers", "RI"},
      {"author-email", "EM"},
      {"funding-acknowledgement", "FU"},
      {"usage-count-last-180-days", "U1"},
      {"usage-count-since-2013", "U2"},
  };
  return kMap;
}

class BibtexScanner {
 public:
  BibtexScanner(std::string_view bytes, const std::string& file, std::size_t base)
      : s_(bytes), file_(file), base_(base) {}

  bool atEnd() const { return pos_ >= s_.size(); }
  std::size_t pos() const { return pos_; }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw ParseError(file_, std::nullopt, base_ + at, what);
  }

  void skipSpace() {
    while (!atEnd() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r'))
      ++pos_;
  }

  bool seekEntry() {
    while (!atEnd() && peek() != '@') ++pos_;
    return !atEnd();
  }

  std::string identifier() {
    std::string out;
    while (!atEnd()) {
      const char c = peek();
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == ':' || c == '.' || c == '+' || c == '/';
      if (!ok) break;
      out.push_back(c);
      ++pos_;
    }
    return out;
  }

  void expect(char c) {
    skipSpace();
    if (atEnd() || peek() != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  // Body of a brace group; `pos_` sits just past the opening brace.
  std::string braced() {
    const std::size_t open = pos_ - 1;
    int depth = 1;
    std::string out;
    while (!atEnd()) {
      const char c = s_[pos_++];
      if (c == '\\' && !atEnd()) {
        out.push_back(c);
        out.push_back(s_[pos_++]);
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) return out;
      out.push_back(c);
    }
    fail(open, "unbalanced braces");
  }

  std::string quoted() {
    const std::size_t open = pos_ - 1;
    int depth = 0;
    std::string out;
    while (!atEnd()) {
      const char c = s_[pos_++];
      if (c == '\\' && !atEnd()) {
        out.push_back(c);
        out.push_back(s_[pos_++]);
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') {
        if (depth == 0) fail(pos_ - 1, "unbalanced braces");
        --depth;
      }
      if (c == '"' && depth == 0) return out;
      out.push_back(c);
    }
    fail(open, "unterminated quoted value");
  }

  std::string value() {
    std::string out;
    for (;;) {
      skipSpace();
      if (atEnd()) fail(pos_, "missing field value");
      const char c = peek();
      if (c == '{') {
        ++pos_;
        out += braced();
      } else if (c == '"') {
        ++pos_;
        out += quoted();
      } else {
        const std::string token = identifier();
        if (token.empty()) fail(pos_, "malformed field value");
        out += token;
      }
      skipSpace();
      if (!atEnd() && peek() == '#') {
        ++pos_;
        continue;
      }
      return out;
    }
  }

  void skipGroup() {
    skipSpace();
    if (atEnd()) return;
    const char open = peek();
    if (open != '{' && open != '(') return;
    const char close = open == '{' ? '}' : ')';
    const std::size_t start = pos_;
    int depth = 0;
    while (!atEnd()) {
      const char c = s_[pos_++];
      if (c == open) ++depth;
      if (c == close && --depth == 0) return;
    }
    fail(start, "unbalanced braces");
  }

 private:
  std::string_view s_;
  const std::string& file_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

// Drops grouping braces and the common LaTeX escapes the export emits.
std::string cleanBibtexValue(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const char c = v[i];
    if (c == '{' || c == '}') continue;
    if (c == '\\' && i + 1 < v.size()) {
      const char n = v[i + 1];
      if (n == '&' || n == '%' || n == '_' || n == '$' || n == '#' || n == '{' || n == '}') {
        out.push_back(n);
        ++i;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> splitOn(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  if (sep.empty()) {
    out.emplace_back(s);
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const auto at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + sep.size();
  }
  return out;
}

std::vector<std::string> nonEmptyTrimmed(const std::vector<std::string>& parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) {
    const auto t = text::trim(p);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

void addBibtexField(RawRecord& rec, const std::string& name, const std::string& rawValue,
                    const BibtexOptions& options) {
  const std::string value = cleanBibtexValue(rawValue);
  const auto& map = bibtexTagMap();
  const auto it = map.find(name);
  if (it == map.end()) {
    rec.unmapped.emplace_back(name, value);
    return;
  }
  const std::string& tag = it->second;
  std::vector<std::string> vals;
  if (tag == "AU") {
    vals = nonEmptyTrimmed(splitOn(text::collapseSpaces(value), " and "));
  } else if (tag == "CR") {
    vals = nonEmptyTrimmed(splitOn(value, options.reference_separator));
  } else if (tag == "C1") {
    // The corresponding-author line is folded into the affiliation field.
    for (const auto& line : nonEmptyTrimmed(text::split(value, '\n'))) {
      const std::string lower = text::toLower(line);
      if (lower.find("(corresponding author)") != std::string::npos)
        rec.entries.emplace_back("RP", std::vector<std::string>{line});
      else
        vals.push_back(line);
    }
    if (vals.empty()) return;
  } else {
    vals.push_back(text::collapseSpaces(value));
  }
  rec.entries.emplace_back(tag, std::move(vals));
}

}  // namespace

std::vector<RawRecord> parseBibtexExport(std::string_view bytes, const std::string& source_file,
                                         const BibtexOptions& options) {
  const std::string_view body = stripBom(bytes);
  const std::size_t base = bytes.size() - body.size();
  BibtexScanner sc(body, source_file, base);
  std::vector<RawRecord> records;

  while (sc.seekEntry()) {
    const std::size_t entryStart = sc.pos();
    sc.expect('@');
    const std::string type = text::toLower(sc.identifier());
    if (type.empty()) sc.fail(entryStart, "missing entry type");
    if (type == "comment" || type == "preamble" || type == "string") {
      sc.skipGroup();
      continue;
    }
    sc.skipSpace();
    if (sc.atEnd() || (sc.peek() != '{' && sc.peek() != '(')) sc.fail(sc.pos(), "expected '{'");
    const char close = sc.peek() == '{' ? '}' : ')';
    sc.expect(sc.peek());

    RawRecord rec;
    rec.source_file = source_file;
    rec.record_index = records.size();
    sc.skipSpace();
    const std::string key = sc.identifier();
    if (!key.empty()) rec.unmapped.emplace_back("key", key);
    rec.unmapped.emplace_back("entry-type", type);

    std::map<std::string, std::size_t> seen;
    std::vector<std::pair<std::string, std::string>> fields;
    for (;;) {
      sc.skipSpace();
      if (sc.atEnd()) sc.fail(entryStart, "unbalanced braces");
      if (sc.peek() == ',') {
        sc.expect(',');
        continue;
      }
      if (sc.peek() == close) {
        sc.expect(close);
        break;
      }
      const std::size_t fieldStart = sc.pos();
      const std::string name = text::toLower(sc.identifier());
      if (name.empty()) sc.fail(fieldStart, "malformed field name");
      sc.expect('=');
      std::string value = sc.value();
      if (auto it = seen.find(name); it != seen.end()) {
        fields[it->second].second = std::move(value);
        rec.flags.push_back("duplicate-field:" + name);
      } else {
        seen.emplace(name, fields.size());
        fields.emplace_back(name, std::move(value));
      }
    }
    for (const auto& [name, value] : fields) addBibtexField(rec, name, value, options);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace scimap::ingest
