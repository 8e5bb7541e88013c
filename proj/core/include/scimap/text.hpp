#pragma once

// Small string helpers shared by the parsers and term statistics.  All of
// them operate on UTF-8 and are locale independent.

#include <string>
#include <string_view>
#include <vector>

namespace scimap::text {

std::string_view trim(std::string_view s);
std::string toLower(std::string_view s);
std::string toUpper(std::string_view s);

/// Splits on `sep` without trimming; an empty input yields one empty piece.
std::vector<std::string> split(std::string_view s, char sep);

/// Replaces Latin-1 and Latin Extended-A letters by their ASCII base letter
/// ("Müller" -> "Muller", "ß" -> "ss").  Other non-ASCII code points are
/// dropped.  Invalid UTF-8 bytes are dropped as well.
std::string foldToAscii(std::string_view s);

/// Collapses runs of whitespace to single spaces and trims.
std::string collapseSpaces(std::string_view s);

/// Lowercase ASCII fold with every non-alphanumeric run replaced by a single
/// space.  Used as a matching key for titles.
std::string matchKey(std::string_view s);

bool startsWith(std::string_view s, std::string_view prefix);
bool endsWith(std::string_view s, std::string_view suffix);
bool isAllDigits(std::string_view s);

/// Strict non-negative integer parse; rejects signs, blanks and overflow.
bool parseNonNegative(std::string_view s, long long& out);

/// Round-half-up to `decimals` places, rendered without exponent.
std::string fixed(double value, int decimals);

/// Shortest round-trip representation of a double.
std::string shortest(double value);

}  // namespace scimap::text
