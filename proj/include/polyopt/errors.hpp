#pragma once

#include <stdexcept>
#include <string>

#include "polyopt/variable.hpp"

namespace polyopt {

/// Parse failure with the byte offset of the offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t offset)
      : std::runtime_error(std::move(msg) + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class MissingAssignmentError : public std::runtime_error {
 public:
  explicit MissingAssignmentError(VarId id)
      : std::runtime_error("no value assigned to variable id " + std::to_string(id)), id_(id) {}
  VarId id() const { return id_; }

 private:
  VarId id_;
};

/// A configurable work cap was exceeded (e.g. term growth during
/// determinant expansion).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polyopt
