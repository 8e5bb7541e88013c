#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scimap::io {

/// Comment block written ahead of every artifact ("# key: value" lines in
/// delimited text, XML/DOT comments in graph files).
struct ArtifactHeader {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
};

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a64Hex(std::string_view data);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void addRow(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csvField(std::string_view value);

/// Throws DomainError when a row does not match the column count.
void writeTable(std::ostream& out, const Table& table, const ArtifactHeader& header = {});

/// Reads delimited text written by writeTable.  Leading "#" lines are
/// returned through `header` when given.  Throws ParseError on unbalanced
/// quotes or ragged rows.
Table readTable(std::string_view text, const std::string& file = "<table>",
                ArtifactHeader* header = nullptr);

/// Writes `content` to `path`, creating parent directories.  Throws Error when
/// the file cannot be written.
void writeFile(const std::filesystem::path& path, std::string_view content);
std::string readFile(const std::filesystem::path& path);

}  // namespace scimap::io
