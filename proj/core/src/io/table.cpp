#include "scimap/io/table.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::io {

std::string fnv1a64Hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csvField(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

void writeRow(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << csvField(row[i]);
  }
  out << "\r\n";
}

}  // namespace

void writeTable(std::ostream& out, const Table& table, const ArtifactHeader& header) {
  for (const auto& [k, v] : header.entries) {
    // Newlines would end the comment early.
    std::string flat = v;
    for (auto& c : flat)
      if (c == '\n' || c == '\r') c = ' ';
    out << "# " << k << ": " << flat << "\r\n";
  }
  writeRow(out, table.columns);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.columns.size())
      throw DomainError("row " + std::to_string(r + 1) + " has " + std::to_string(table.rows[r].size()) +
                        " fields, schema has " + std::to_string(table.columns.size()));
    writeRow(out, table.rows[r]);
  }
}

Table readTable(std::string_view text, const std::string& file, ArtifactHeader* header) {
  std::size_t pos = 0;
  // Header comments.
  while (pos < text.size() && text[pos] == '#') {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      line.remove_prefix(1);
      line = text::trim(line);
      const auto colon = line.find(": ");
      if (colon == std::string_view::npos) {
        header->add(std::string(line), "");
      } else {
        header->add(std::string(line.substr(0, colon)), std::string(line.substr(colon + 2)));
      }
    }
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
  }

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool fieldStarted = false;
  const auto endField = [&] {
    row.push_back(std::move(field));
    field.clear();
    fieldStarted = false;
  };
  const auto endRow = [&] {
    endField();
    records.push_back(std::move(row));
    row.clear();
  };
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !fieldStarted) {
      quoted = true;
      fieldStarted = true;
    } else if (c == ',') {
      endField();
    } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
      // CRLF handled at the LF.
    } else if (c == '\n') {
      endRow();
    } else {
      field.push_back(c);
      fieldStarted = true;
    }
  }
  if (quoted) throw ParseError(file, records.size(), std::nullopt, "unterminated quoted field");
  if (fieldStarted || !row.empty()) endRow();

  Table t;
  if (records.empty()) return t;
  t.columns = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.columns.size())
      throw ParseError(file, i, std::nullopt,
                       "expected " + std::to_string(t.columns.size()) + " fields, found " +
                           std::to_string(records[i].size()));
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

void writeFile(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("cannot write " + path.string());
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace scimap::io
