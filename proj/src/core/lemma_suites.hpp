#pragma once

// Exhaustive and seeded grids over the identities and lemmas of the
// Kloosterman machinery, and the suite runner that compares them against
// pinned regression constants.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arith.hpp"

namespace kloostlab {

// Seed of every deterministic grid sample.
inline constexpr u64 kGridSeed = 20240611;

struct WeilStats {
  u64 primes = 0;
  u64 sums = 0;
  double max_ratio = 0;       // max |S| / (2 sqrt p)
  double max_excess = -1e300; // max |S| - 2 sqrt p - err, <= 0 required
  double max_imag_excess = -1e300;  // max |im S| - err, <= 0 required
};
// Every S(a, b; p) with p <= max_p, p not dividing ab, summed term by term.
WeilStats weil_grid(u64 max_p, unsigned jobs = 1);

struct CrtStats {
  u64 moduli = 0;
  u64 comparisons = 0;
  double max_deviation = 0;
  double max_excess = -1e300;  // max deviation - combined err
};
// Every squarefree q <= max_q, every two-part split, `samples` seeded (a, b).
CrtStats twisted_grid(u64 max_q, unsigned samples = 10, unsigned jobs = 1);

struct CompletionStats {
  u64 checks = 0;
  double max_deviation = 0;
  double max_excess = -1e300;  // deviation - combined err
  double max_parseval_rel = 0; // |sum_k |f(k)|^2 - qN| / max(1, qN)
};
// Every q <= max_q, every a coprime to q, `intervals` seeded intervals per q.
CompletionStats completion_grid(u64 max_q, unsigned intervals = 20, unsigned jobs = 1);

struct VanishingCell {
  u64 p;
  unsigned l;
  u64 vectors;
  u64 counterexamples;
};
std::vector<VanishingCell> vanishing_grid(std::span<const u64> primes, unsigned max_l);

struct OrthogonalityStats {
  u64 cells = 0;
  double max_first_rel = 0;   // |sum_k S(a,k;p)| / p
  double max_second_rel = 0;  // |sum_k S(a,k;p)^2 - (p^2 - p)| / (p^2 - p)
};
OrthogonalityStats orthogonality_grid(u64 max_p, unsigned jobs = 1);

inline constexpr unsigned kMaxShiftCount = 3;

struct CompleteExpStats {
  u64 cells = 0;
  // Indexed by the number of shifts j = 0..3.
  std::array<double, kMaxShiftCount + 1> generic_max{};  // |sum| / p^{(j+1)/2}
  std::array<double, kMaxShiftCount + 1> even_max{};     // |sum| / p^{(j+2)/2}
  std::array<u64, kMaxShiftCount + 1> generic_cells{};
  std::array<u64, kMaxShiftCount + 1> even_cells{};
  double max_cap_excess = -1e300;  // even case: |sum| - 2^j p^{(j+2)/2} - err
};
// Primes p <= max_p, j <= 3 shifts, a deterministic sample of (a, shifts, b).
CompleteExpStats completeexp_grid(u64 max_p, unsigned jobs = 1);

struct SquarefreeProductStats {
  u64 cells = 0;
  double max_deviation = 0;
  double max_excess = -1e300;
};
// CRT product against direct summation, squarefree q <= max_q, j <= 2.
SquarefreeProductStats squarefree_product_grid(u64 max_q, unsigned jobs = 1);

struct OneDiffStats {
  u64 cells = 0;
  double max_ratio = 0;
  double max_consistency = 0;  // |t_eval - onediff_inner| - err, l = 1
};
OneDiffStats onediff_grid(u64 max_product, u64 max_k, unsigned jobs = 1);

enum class SuiteSize { kSmall, kFull };

struct SuiteLine {
  std::string name;
  double value;
  double limit;
  bool ok;
};

struct LemmaReport {
  std::string suite;
  SuiteSize size = SuiteSize::kSmall;
  bool passed = true;
  std::vector<SuiteLine> lines;
  std::vector<std::string> notes;
};

inline constexpr std::array<std::string_view, 5> kSuiteNames = {
    "weil", "completion", "vanishing", "product-sums", "onediff"};

// Throws DomainError for an unknown suite name.
LemmaReport run_lemma_suite(std::string_view suite, SuiteSize size, unsigned jobs = 1);

std::string render_lemma_report(const LemmaReport& report);

}  // namespace kloostlab
