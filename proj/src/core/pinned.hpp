#pragma once

// Regression constants measured on the first run of each grid and pinned,
// rounded up in the fourth significant digit. A measured value above its pin
// is a regression.

#include <array>

namespace kloostlab::pinned {

// max |sum| / p^{(j+1)/2} in the generic case, j = 0..3. The j = 0 sum
// vanishes identically, so its pin is a rounding allowance.
inline constexpr std::array<double, 4> kCompleteExpSmall = {1e-12, 1.001, 2.799, 3.961};
inline constexpr std::array<double, 4> kCompleteExpFull = {1e-12, 1.001, 2.799, 3.961};

// max |T|^2 / (q1^{j+1} (K q0^j + sum_h |inner|)).
inline constexpr double kOneDiffSmall = 1.745;
inline constexpr double kOneDiffFull = 1.745;

}  // namespace kloostlab::pinned
