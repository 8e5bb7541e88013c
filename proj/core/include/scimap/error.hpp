#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace scimap {

/// Base class for every recoverable failure raised by the engine.  The CLI
/// maps it to exit status 1 (data error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input with a position.  Plaintext exports report the record
/// ordinal, BibTeX exports report a byte offset.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::optional<std::size_t> record_index,
             std::optional<std::size_t> byte_offset, const std::string& what);

  const std::string& file() const { return file_; }
  std::optional<std::size_t> recordIndex() const { return record_index_; }
  std::optional<std::size_t> byteOffset() const { return byte_offset_; }

 private:
  std::string file_;
  std::optional<std::size_t> record_index_;
  std::optional<std::size_t> byte_offset_;
};

/// Violated precondition of an analysis (empty corpus, too few sources, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace scimap
