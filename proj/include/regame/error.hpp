#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regame {

/// Malformed expression text, word list or position description.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit parse_error(const std::string& what) : std::runtime_error(what), offset_(0) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A symbol or word that does not belong to the declared alphabet.
class alphabet_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A position or configuration that violates its invariants.
class invalid_position : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured search limit was hit. This is never a game result.
class resource_limit_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regame
