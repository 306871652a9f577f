#pragma once

// Bound expressions for short Kloosterman sums and for E(x, q, a), the
// admissibility region, target sizes of a four-part factorization, and the
// search that places a smooth modulus's primes into size windows.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "modulus_split.hpp"
#include "rational.hpp"

namespace kloostlab {

struct BoundTerm {
  std::string name;
  double raw;     // the term at eps = 0 without its common prefactor
  double weight;  // prefactor, including the eps-dependent power
  double value;   // raw * weight
};

struct BoundParameters {
  u64 x = 0;  // 0 when not applicable
  u64 n = 0;  // interval length for the Kloosterman bound
  u64 q = 0;
  std::vector<u64> split;
  double delta = 0;
  double eps = 0;
};

struct BoundReport {
  double computed = 0;
  std::vector<BoundTerm> terms;
  double bound_total = 0;       // sum of term values at the requested eps
  double bound_total_eps0 = 0;  // same expression at eps = 0
  double ratio = 0;             // computed / bound_total
  double ratio_eps0 = 0;
  BoundParameters params;
};

// Bound for the incomplete Kloosterman sum over an interval of length N with
// q = q_0 q_1 ... q_l, l >= 1.
BoundReport shortkloost_rhs(u64 n, const ModulusSplit& split, double eps, double computed = 0);

// Bound for E(x, q, a) with q = q_0 q_1 q_2 q_3, delta in (0, 1/12).
BoundReport divisorthm_rhs(u64 x, const ModulusSplit& split, double delta, double eps,
                           double computed = 0);

struct TargetSizes {
  std::array<double, 4> q;
  double product() const { return q[0] * q[1] * q[2] * q[3]; }
};
TargetSizes target_sizes(u64 x, u64 q);

// 246 varpi + 18 eta < 1.
bool admissible(double varpi, double eta);
bool admissible(const Rational& varpi, const Rational& eta);

struct Window {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct WindowSpec {
  std::array<Window, 4> parts;
};
// Validates 0 < lo <= hi for every part.
WindowSpec make_window_spec(std::array<Window, 4> parts);

// Windows around the target sizes for an x^eta-smooth modulus.
WindowSpec target_windows(u64 x, u64 q, double eta);

bool windows_contain(const WindowSpec& windows, std::span<const u64> parts);

// Sum over parts of |log q_j - log sqrt(lo_j hi_j)|.
double window_objective(std::span<const u64> parts, const WindowSpec& windows);

// Objective values within this distance count as tied.
inline constexpr double kObjectiveTieTolerance = 1e-9;

enum class SearchStrategy {
  kAuto,            // exhaustive up to 12 primes, branch and bound beyond
  kExhaustive,
  kBranchAndBound,
};

// The assignment of q's primes to (q_0, q_1, q_2, q_3) inside the windows
// with minimal objective, ties going to the lexicographically smallest
// tuple; nullopt when no assignment fits. Throws NotSquarefree.
std::optional<ModulusSplit> factorize_to_windows(const FactoredInteger& q,
                                                 const WindowSpec& windows,
                                                 SearchStrategy strategy = SearchStrategy::kAuto);

struct ExponentFit {
  double slope;
  double intercept;
  double residual;  // RMS of log residuals
};
// Least squares fit of log(value) = slope log(scale) + intercept.
ExponentFit exponent_fit(std::span<const std::pair<double, double>> points);

}  // namespace kloostlab
