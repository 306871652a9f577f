#pragma once

#include <span>
#include <vector>

#include "arith.hpp"

namespace kloostlab {

// q = q_0 q_1 ... q_l with squarefree product (so the parts are pairwise
// coprime). Construction throws NotCoprime or NotSquarefree.
class ModulusSplit {
 public:
  explicit ModulusSplit(std::vector<u64> parts);

  std::span<const u64> parts() const { return parts_; }
  u64 part(std::size_t i) const { return parts_.at(i); }
  std::size_t l() const { return parts_.size() - 1; }
  u64 modulus() const { return modulus_; }

  friend bool operator==(const ModulusSplit&, const ModulusSplit&) = default;

 private:
  std::vector<u64> parts_;
  u64 modulus_ = 1;
};

// Non-leading shifts h_1..h_l attached to the parts q_1..q_l of a split.
struct ShiftVector {
  std::vector<i64> h;
};

}  // namespace kloostlab
