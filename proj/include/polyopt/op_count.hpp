#pragma once

#include <cstdint>

namespace polyopt {

/// Additions and multiplications of an evaluation scheme. Both operations
/// are weighted equally; the total is the optimization objective.
struct OpCount {
  std::int64_t adds = 0;
  std::int64_t muls = 0;

  std::int64_t total() const { return adds + muls; }

  friend bool operator==(const OpCount& a, const OpCount& b) {
    return a.adds == b.adds && a.muls == b.muls;
  }
  friend bool operator!=(const OpCount& a, const OpCount& b) { return !(a == b); }

  OpCount& operator+=(const OpCount& o) {
    adds += o.adds;
    muls += o.muls;
    return *this;
  }
};

}  // namespace polyopt
