#include "scimap/ingest/document.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::ingest {

namespace {

bool isLetter(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

bool isVowel(char c) {
  switch (c) {
    case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
      return true;
    default:
      return false;
  }
}

template <typename T>
void pushUnique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

// Keeps only letters; splits on anything else.
std::vector<std::string> letterRuns(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (isLetter(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// A given-name token counts as a run of initials when it is at most two
// letters, or three letters without a vowel ("KS", "JRR").  Case plays no
// role so that the normalization is case-insensitive.
bool looksLikeInitials(std::string_view upperToken) {
  if (upperToken.size() <= 2) return true;
  if (upperToken.size() == 3)
    return std::none_of(upperToken.begin(), upperToken.end(), isVowel);
  return false;
}

std::string initialsOf(std::string_view given) {
  std::string out;
  for (const auto& tok : letterRuns(text::toUpper(given))) {
    if (looksLikeInitials(tok))
      out += tok;
    else
      out.push_back(tok.front());
  }
  return out;
}

std::string cleanSurname(std::string_view s) {
  std::string out = text::collapseSpaces(text::toUpper(s));
  while (!out.empty() && (out.back() == '.' || out.back() == ',')) out.pop_back();
  return text::collapseSpaces(out);
}

std::vector<std::string> splitTerms(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  for (const auto& line : lines) {
    for (const auto& part : text::split(line, ';')) {
      std::string term = text::toLower(text::collapseSpaces(part));
      if (!term.empty()) out.push_back(std::move(term));
    }
  }
  return out;
}

std::optional<int> parseYear(std::string_view s) {
  long long v = 0;
  if (s.size() != 4 || !text::parseNonNegative(s, v)) return std::nullopt;
  return static_cast<int>(v);
}

void flag(Document& d, std::string f) { pushUnique(d.flags, f); }

}  // namespace

std::string_view toString(DocType type) {
  switch (type) {
    case DocType::Article:
      return "article";
    case DocType::Review:
      return "review";
    case DocType::EarlyAccess:
      return "early-access";
    case DocType::Other:
      return "other";
  }
  return "other";
}

DocType docTypeFromString(std::string_view s) {
  const std::string lower = text::toLower(s);
  if (lower == "early-access" || lower.find("early access") != std::string::npos)
    return DocType::EarlyAccess;
  if (lower.find("retract") != std::string::npos) return DocType::Other;
  if (lower.find("review") != std::string::npos) return DocType::Review;
  if (lower.find("article") != std::string::npos) return DocType::Article;
  return DocType::Other;
}

bool Document::hasFlag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

const std::vector<std::string>& coverageTags() {
  static const std::vector<std::string> kTags = {"AU", "CR", "DT", "SO", "LA", "NR",
                                                 "TI", "TC", "AB", "C1", "RP", "DI",
                                                 "PY", "DE", "ID", "WC"};
  return kTags;
}

std::string normalizeAuthorName(std::string_view raw) {
  std::string folded = text::collapseSpaces(text::foldToAscii(raw));
  if (folded.empty()) throw Error("author name is blank");
  // A comma with nothing usable after it ("SHIN KS,") carries no split.
  if (const auto comma = folded.find(','); comma != std::string::npos) {
    const std::string_view rest = std::string_view(folded).substr(comma + 1);
    if (std::none_of(rest.begin(), rest.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }))
      folded = text::collapseSpaces(folded.substr(0, comma));
    if (folded.empty()) throw Error("author name is blank");
  }

  std::string surname;
  std::string given;
  if (const auto comma = folded.find(','); comma != std::string::npos) {
    surname = folded.substr(0, comma);
    given = folded.substr(comma + 1);
  } else {
    const auto parts = text::split(folded, ' ');
    if (parts.size() == 1) {
      surname = parts[0];
    } else {
      const std::string last = text::toUpper(parts.back());
      const auto lastRuns = letterRuns(last);
      const bool trailingInitials =
          !lastRuns.empty() && std::all_of(lastRuns.begin(), lastRuns.end(),
                                           [](const std::string& r) { return looksLikeInitials(r); });
      if (trailingInitials) {
        // "SHIN KS" / "Beaver W. H." style: surname first, initials after.
        std::size_t firstInitial = parts.size() - 1;
        while (firstInitial > 1) {
          const auto runs = letterRuns(text::toUpper(parts[firstInitial - 1]));
          const bool dotted = parts[firstInitial - 1].find('.') != std::string::npos;
          if (runs.size() == 1 && runs[0].size() == 1 && dotted)
            --firstInitial;
          else
            break;
        }
        for (std::size_t i = 0; i < firstInitial; ++i) surname += (i ? " " : "") + parts[i];
        for (std::size_t i = firstInitial; i < parts.size(); ++i) given += " " + parts[i];
      } else {
        // "Chih-Fong Tsai": given names first.
        surname = parts.back();
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) given += " " + parts[i];
      }
    }
  }

  surname = cleanSurname(surname);
  if (surname.empty()) throw Error("author name has no surname: " + std::string(raw));
  std::string initials = initialsOf(given);
  // Keep the output a fixed point: initials that would re-parse as a given
  // name are shortened to two letters.
  if (!looksLikeInitials(initials)) initials.resize(2);
  return initials.empty() ? surname : surname + ", " + initials;
}

std::optional<std::string> normalizeDoi(std::string_view raw) {
  std::string s = text::toLower(text::trim(raw));
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi.org/", "doi:", "doi "}) {
    if (text::startsWith(s, prefix)) {
      s = std::string(text::trim(std::string_view(s).substr(prefix.size())));
      break;
    }
  }
  while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';')) s.pop_back();
  if (!text::startsWith(s, "10.")) return std::nullopt;
  const auto slash = s.find('/');
  if (slash == std::string::npos || slash <= 3 || slash + 1 >= s.size()) return std::nullopt;
  for (std::size_t i = 3; i < slash; ++i) {
    const char c = s[i];
    if (!((c >= '0' && c <= '9') || c == '.')) return std::nullopt;
  }
  if (s.find_first_of(" \t\r\n") != std::string::npos) return std::nullopt;
  return s;
}

CitedReference parseCitedReference(std::string_view raw, int max_year) {
  CitedReference ref;
  ref.raw = std::string(raw);
  std::string_view body = text::trim(raw);
  if (!body.empty() && body.back() == '.') body.remove_suffix(1);
  if (body.empty()) return ref;

  // A bracketed DOI list "DOI [10.1/a, 10.2/b]" contains commas; pull it out
  // before splitting on commas.
  std::string work(body);
  const auto doiPos = text::toUpper(work).find("DOI ");
  if (doiPos != std::string::npos) {
    std::string tail = std::string(text::trim(std::string_view(work).substr(doiPos + 4)));
    if (!tail.empty() && tail.front() == '[') {
      const auto end = tail.find(']');
      tail = tail.substr(1, end == std::string::npos ? std::string::npos : end - 1);
      tail = text::split(tail, ',').front();
    }
    ref.doi = normalizeDoi(tail);
    work = work.substr(0, doiPos);
  }

  std::vector<std::string> segs;
  for (const auto& s : text::split(work, ',')) segs.emplace_back(text::trim(s));
  while (!segs.empty() && segs.back().empty()) segs.pop_back();

  std::size_t i = 0;
  const auto isYearSeg = [&](const std::string& s) { return parseYear(s).has_value(); };
  const auto isVolume = [](const std::string& s) {
    return s.size() >= 2 && s[0] == 'V' && s.find(' ') == std::string::npos &&
           !isLetter(s[1]);
  };
  const auto isPage = [](const std::string& s) {
    return s.size() >= 2 && s[0] == 'P' && s.find(' ') == std::string::npos &&
           !isLetter(s[1]);
  };

  // Leading author unless the first segment is already a year.
  if (i < segs.size() && !segs[i].empty() && !isYearSeg(segs[i])) {
    try {
      ref.first_author = normalizeAuthorName(segs[i]);
    } catch (const Error&) {
    }
    ++i;
  }
  if (i < segs.size()) {
    if (const auto y = parseYear(segs[i])) {
      if (*y >= kEarliestYear && *y <= max_year) ref.year = y;
      ++i;
    } else if (!segs[i].empty() && std::all_of(segs[i].begin(), segs[i].end(), [](char c) {
                 return (c >= '0' && c <= '9') || c == 'X' || c == 'x' || c == '?';
               }) && segs[i].size() == 4) {
      ++i;  // malformed year placeholder such as "20XX"
    }
  }
  for (; i < segs.size(); ++i) {
    const std::string& s = segs[i];
    if (s.empty()) continue;
    if (isVolume(s) && !ref.volume) {
      ref.volume = s;
    } else if (isPage(s) && !ref.page) {
      ref.page = s;
    } else if (!ref.source && !ref.volume && !ref.page) {
      ref.source = text::collapseSpaces(text::toUpper(text::foldToAscii(s)));
    }
  }
  return ref;
}

std::string normalizeCountry(std::string_view raw) {
  std::string s = text::collapseSpaces(text::toUpper(text::foldToAscii(raw)));
  while (!s.empty() && (s.back() == '.' || s.back() == ';')) s.pop_back();
  s = text::collapseSpaces(s);
  if (text::endsWith(s, " USA") || s == "USA" || s == "UNITED STATES") return "USA";
  if (s == "PEOPLES R CHINA" || s == "CHINA" || s == "PR CHINA" || s == "P R CHINA") return "CHINA";
  if (s == "ENGLAND" || s == "SCOTLAND" || s == "WALES" || s == "NORTH IRELAND" ||
      s == "NORTHERN IRELAND" || s == "UNITED KINGDOM" || s == "U ARAB EMIRATES UK")
    return "UK";
  if (s == "U ARAB EMIRATES") return "UNITED ARAB EMIRATES";
  if (s == "SOUTH KOREA" || s == "REPUBLIC OF KOREA") return "KOREA";
  return s;
}

std::string normalizeInstitution(std::string_view raw) {
  std::string s = text::collapseSpaces(text::toUpper(text::foldToAscii(raw)));
  while (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Address parseAddress(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (!s.empty() && s.front() == '[') {
    const auto close = s.find(']');
    s = close == std::string_view::npos ? std::string_view{} : text::trim(s.substr(close + 1));
  }
  Address a;
  const auto parts = text::split(s, ',');
  std::vector<std::string> segs;
  for (const auto& p : parts) {
    const auto t = text::trim(p);
    if (!t.empty()) segs.emplace_back(t);
  }
  if (segs.empty()) return a;
  a.institution = normalizeInstitution(segs.front());
  if (segs.size() >= 2) a.country = normalizeCountry(segs.back());
  return a;
}

namespace {

std::optional<Corresponding> parseCorresponding(const std::string& line) {
  const std::string lower = text::toLower(line);
  const std::string marker = "(corresponding author)";
  const auto at = lower.find(marker);
  if (at == std::string::npos) return std::nullopt;
  Corresponding c;
  try {
    c.name = normalizeAuthorName(std::string_view(line).substr(0, at));
  } catch (const Error&) {
    return std::nullopt;
  }
  std::string_view rest = std::string_view(line).substr(at + marker.size());
  // Several corresponding authors are separated by ';'; keep the first.
  if (const auto semi = rest.find(';'); semi != std::string_view::npos) rest = rest.substr(0, semi);
  rest = text::trim(rest);
  if (!rest.empty() && rest.front() == ',') rest.remove_prefix(1);
  const Address a = parseAddress(rest);
  c.institution = a.institution;
  c.country = a.country;
  return c;
}

}  // namespace

Document toDocument(const RawRecord& rec, int reference_year) {
  Document d;
  d.source_file = rec.source_file;
  d.record_index = rec.record_index;
  d.flags = rec.flags;

  const std::string ut = text::collapseSpaces(rec.joined("UT"));
  d.id = !ut.empty() ? ut : rec.source_file + "#" + std::to_string(rec.record_index);

  for (const auto& line : rec.values("AU")) {
    for (const auto& name : text::split(line, ';')) {
      if (text::trim(name).empty()) continue;
      try {
        pushUnique(d.authors, normalizeAuthorName(name));
      } catch (const Error&) {
        flag(d, "unparseable-AU");
      }
    }
  }

  d.title = text::collapseSpaces(rec.joined("TI"));
  d.source = text::collapseSpaces(text::toUpper(rec.joined("SO")));
  d.source_abbrev = text::collapseSpaces(text::toUpper(rec.has("J9") ? rec.joined("J9") : rec.joined("JI")));

  if (rec.has("PY")) {
    const std::string py(text::trim(rec.joined("PY")));
    if (const auto y = parseYear(py)) {
      if (*y >= kEarliestYear && *y <= reference_year)
        d.pub_year = *y;
      else
        flag(d, "PY-out-of-range");
    } else {
      flag(d, "unparseable-PY");
    }
  }

  if (rec.has("TC")) {
    const std::string tc(text::trim(rec.joined("TC")));
    long long v = 0;
    if (!text::parseNonNegative(tc, v))
      throw Error(rec.source_file + ": record " + std::to_string(rec.record_index) +
                  ": TC is not a non-negative integer: '" + tc + "'");
    d.total_citations = v;
  }

  for (const auto& line : rec.values("CR")) {
    if (text::trim(line).empty()) continue;
    d.cited_refs.push_back(parseCitedReference(line, reference_year));
  }
  if (rec.has("NR")) {
    long long v = 0;
    if (text::parseNonNegative(text::trim(rec.joined("NR")), v))
      d.ref_count = v;
    else
      flag(d, "unparseable-NR");
  }
  if (d.ref_count && rec.has("CR") &&
      static_cast<long long>(d.cited_refs.size()) != *d.ref_count)
    flag(d, "NR-CR-mismatch");

  d.author_keywords = splitTerms(rec.values("DE"));
  d.keywords_plus = splitTerms(rec.values("ID"));

  if (const std::string ab = text::collapseSpaces(rec.joined("AB")); !ab.empty()) d.abstract = ab;

  for (const auto& line : rec.values("C1")) {
    const Address a = parseAddress(line);
    if (!a.institution.empty()) pushUnique(d.affiliations, a.institution);
    if (!a.country.empty()) pushUnique(d.countries, a.country);
  }
  for (const auto& line : rec.values("RP")) {
    if (auto c = parseCorresponding(line)) {
      d.corresponding = std::move(c);
      break;
    }
  }
  if (!d.corresponding && rec.has("RP")) flag(d, "unparseable-RP");

  if (rec.has("DI")) {
    d.doi = normalizeDoi(rec.joined("DI"));
    if (!d.doi) flag(d, "invalid-DOI");
  }

  const std::string dt = rec.joined("DT");
  d.doc_type = docTypeFromString(dt);
  if (text::toLower(dt).find("retract") != std::string::npos) flag(d, "retraction-notice");
  if (text::startsWith(text::toUpper(d.title), "RETRACTED")) flag(d, "retraction-notice");

  d.language = text::collapseSpaces(rec.joined("LA"));
  d.categories = [&] {
    std::vector<std::string> out;
    for (const auto& line : rec.values("WC"))
      for (const auto& part : text::split(line, ';'))
        if (auto t = text::collapseSpaces(part); !t.empty()) pushUnique(out, t);
    return out;
  }();

  static const std::set<std::string> kKnown = {"PT", "AU", "AF", "TI", "SO", "J9", "JI", "PY",
                                               "TC", "CR", "NR", "DE", "ID", "AB", "C1", "RP",
                                               "DI", "DT", "LA", "WC", "UT"};
  for (const auto& [tag, vals] : rec.entries)
    if (!kKnown.count(tag)) {
      auto& slot = d.extra[tag];
      slot.insert(slot.end(), vals.begin(), vals.end());
    }
  for (const auto& [name, value] : rec.unmapped) d.extra["bibtex:" + name].push_back(value);

  // Coverage bookkeeping: a field is missing when nothing usable came out of it.
  const auto miss = [&](const char* tag, bool isMissing) {
    if (isMissing) d.missing.emplace_back(tag);
  };
  miss("AU", d.authors.empty());
  miss("CR", d.cited_refs.empty());
  miss("DT", text::trim(dt).empty());
  miss("SO", d.source.empty());
  miss("LA", d.language.empty());
  miss("NR", !d.ref_count.has_value());
  miss("TI", d.title.empty());
  miss("TC", !rec.has("TC"));
  miss("AB", !d.abstract.has_value());
  miss("C1", d.affiliations.empty());
  miss("RP", !d.corresponding.has_value());
  miss("DI", !d.doi.has_value());
  miss("PY", !d.pub_year.has_value());
  miss("DE", d.author_keywords.empty());
  miss("ID", d.keywords_plus.empty());
  miss("WC", d.categories.empty());
  return d;
}

}  // namespace scimap::ingest
