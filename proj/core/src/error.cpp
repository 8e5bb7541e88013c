#include "scimap/error.hpp"

namespace scimap {

namespace {

std::string describe(const std::string& file, std::optional<std::size_t> record_index,
                     std::optional<std::size_t> byte_offset, const std::string& what) {
  std::string msg = file.empty() ? std::string("<input>") : file;
  if (record_index) msg += ": record " + std::to_string(*record_index);
  if (byte_offset) msg += ": byte " + std::to_string(*byte_offset);
  return msg + ": " + what;
}

}  // namespace

ParseError::ParseError(std::string file, std::optional<std::size_t> record_index,
                       std::optional<std::size_t> byte_offset, const std::string& what)
    : Error(describe(file, record_index, byte_offset, what)),
      file_(std::move(file)),
      record_index_(record_index),
      byte_offset_(byte_offset) {}

}  // namespace scimap
