#include "modulus_split.hpp"

#include "error.hpp"

namespace kloostlab {

ModulusSplit::ModulusSplit(std::vector<u64> parts) : parts_(std::move(parts)) {
  require(!parts_.empty(), ErrorCode::kDomain, "a split needs at least the leading part");
  u128 product = 1;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    require(parts_[i] >= 1, ErrorCode::kDomain, "split parts must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (gcd(parts_[i], parts_[j]) != 1) fail(ErrorCode::kNotCoprime, "split parts are not coprime");
    }
    product *= parts_[i];
    require(product <= kMaxFactorable, ErrorCode::kDomain, "split modulus exceeds 2^62");
  }
  modulus_ = static_cast<u64>(product);
  for (u64 part : parts_) {
    if (part > 1 && !factorize(part).squarefree()) {
      fail(ErrorCode::kNotSquarefree, "split modulus is not squarefree");
    }
  }
}

}  // namespace kloostlab
