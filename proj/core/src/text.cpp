#include "scimap/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace scimap::text {

namespace {

bool isSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Decodes one code point; returns false on malformed input and advances by one.
bool nextCodePoint(std::string_view s, std::size_t& i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return false;
  }
  if (i + len > s.size()) {
    ++i;
    return false;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return false;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return true;
}

using namespace std::string_view_literals;

// U+00C0..U+00FF folded to ASCII; '\0' marks a code point with no base letter.
constexpr std::string_view kLatin1Fold =
    "AAAAAAACEEEEIIIIDNOOOOO\0OUUUUYTs"
    "aaaaaaaceeeeiiiidnooooo\0ouuuuyty"sv;
// U+0100..U+017F, sixteen code points per line.
constexpr std::string_view kExtendedAFold =
    "AaAaAaCcCcCcCcDd"
    "DdEeEeEeEeEeGgGg"
    "GgGgHhHhIiIiIiIi"
    "IiIiJjKkkLlLlLlL"
    "lLlNnNnNnnNnOoOo"
    "OoOoRrRrRrSsSsSs"
    "SsTtTtTtUuUuUuUu"
    "UuUuWwYyYZzZzZzs"sv;
static_assert(kLatin1Fold.size() == 64);
static_assert(kExtendedAFold.size() == 128);

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && isSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && isSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string toLower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string toUpper(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string foldToAscii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = 0;
    if (!nextCodePoint(s, i, cp)) continue;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp == 0xDF) {
      out += "ss";
    } else if (cp == 0xC6) {
      out += "AE";
    } else if (cp == 0xE6) {
      out += "ae";
    } else if (cp == 0x152) {
      out += "OE";
    } else if (cp == 0x153) {
      out += "oe";
    } else if (cp >= 0xC0 && cp <= 0xFF) {
      const char c = kLatin1Fold[cp - 0xC0];
      if (c != '\0') out.push_back(c);
    } else if (cp >= 0x100 && cp <= 0x17F) {
      const std::size_t k = cp - 0x100;
      if (k < kExtendedAFold.size()) out.push_back(kExtendedAFold[k]);
    } else if (cp == 0x2010 || cp == 0x2011 || cp == 0x2013 || cp == 0x2014) {
      out.push_back('-');
    } else if (cp == 0x2018 || cp == 0x2019) {
      out.push_back('\'');
    } else if (cp == 0xA0) {
      out.push_back(' ');
    }
  }
  return out;
}

std::string collapseSpaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : trim(s)) {
    if (isSpace(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string matchKey(std::string_view s) {
  const std::string folded = toLower(foldToAscii(s));
  std::string out;
  bool gap = false;
  for (char c : folded) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (!alnum) {
      gap = true;
      continue;
    }
    if (gap && !out.empty()) out.push_back(' ');
    gap = false;
    out.push_back(c);
  }
  return out;
}

bool startsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool endsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool isAllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

bool parseNonNegative(std::string_view s, long long& out) {
  if (!isAllDigits(s)) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string fixed(double value, int decimals) {
  if (!std::isfinite(value)) throw std::invalid_argument("fixed: non-finite value");
  // Render with guard digits first so that decimal ties survive binary
  // representation error (2.675 prints as 2.68).
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(value),
                                 std::chars_format::fixed, decimals + 9);
  std::string digits(buf, res.ptr);
  const auto dot = digits.find('.');
  std::string intPart = digits.substr(0, dot);
  std::string frac = digits.substr(dot + 1);
  const bool roundUp = frac[static_cast<std::size_t>(decimals)] >= '5';
  std::string kept = intPart + frac.substr(0, static_cast<std::size_t>(decimals));
  if (roundUp) {
    int i = static_cast<int>(kept.size()) - 1;
    while (i >= 0) {
      if (kept[static_cast<std::size_t>(i)] == '9') {
        kept[static_cast<std::size_t>(i)] = '0';
        --i;
      } else {
        ++kept[static_cast<std::size_t>(i)];
        break;
      }
    }
    if (i < 0) kept.insert(kept.begin(), '1');
  }
  const std::size_t intLen = kept.size() - static_cast<std::size_t>(decimals);
  std::string out = kept.substr(0, intLen);
  if (decimals > 0) out += "." + kept.substr(intLen);
  bool allZero = true;
  for (char c : out)
    if (c != '0' && c != '.') allZero = false;
  if (value < 0 && !allZero) out.insert(out.begin(), '-');
  return out;
}

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace scimap::text
