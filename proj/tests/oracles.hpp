#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library: no CRT, no tables, no hyperbola counting.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using cld = std::complex<long double>;

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u64 mod(i64 a, u64 q) {
  const i64 r = a % static_cast<i64>(q);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

// Inverse by exhaustive search.
inline std::optional<u64> inverse(u64 a, u64 q) {
  for (u64 b = 1; b < q; ++b) {
    if ((a % q) * b % q == 1) return b;
  }
  if (q == 1) return 0;
  return std::nullopt;
}

inline cld e(long double num, u64 q) {
  const long double t = 2 * std::numbers::pi_v<long double> * num / static_cast<long double>(q);
  return {std::cos(t), std::sin(t)};
}

// S(a, b; q) straight from the definition.
inline cld kloosterman(i64 a, i64 b, u64 q) {
  if (q == 1) return 1;
  std::vector<u64> inv(q, 0);
  for (u64 n = 1; n < q; ++n) {
    if (gcd(n, q) != 1) continue;
    for (u64 m = 1; m < q; ++m) {
      if (n * m % q == 1) {
        inv[n] = m;
        break;
      }
    }
  }
  cld s = 0;
  const u64 ar = mod(a, q), br = mod(b, q);
  for (u64 n = 1; n < q; ++n) {
    if (gcd(n, q) != 1) continue;
    s += e(static_cast<long double>((ar * inv[n] + br * n) % q), q);
  }
  return s;
}

inline cld incomplete_kloosterman(i64 a, u64 q, i64 offset, u64 length) {
  cld s = 0;
  for (i64 n = offset; n < offset + static_cast<i64>(length); ++n) {
    const u64 nr = mod(n, q);
    if (gcd(nr, q) != 1) continue;
    const u64 inv = *inverse(nr, q);
    s += e(static_cast<long double>(mod(a, q) * inv % q), q);
  }
  return s;
}

inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline u64 phi(u64 n) {
  u64 c = 0;
  for (u64 k = 1; k <= n; ++k) c += gcd(k, n) == 1;
  return c;
}

inline u64 tau(u64 n) {
  u64 c = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  }
  return c;
}

// Ordered l-tuples with product n.
inline u64 tau_l(u64 n, unsigned l) {
  if (l == 1) return 1;
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d) {
    if (n % d == 0) c += tau_l(n / d, l - 1);
  }
  return c;
}

inline bool squarefree(u64 n) {
  for (auto [p, e] : factor(n)) {
    if (e > 1) return false;
  }
  return true;
}

inline u64 divisor_sum_ap(u64 x, u64 q, i64 a) {
  u64 s = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (n % q == mod(a, q)) s += tau(n);
  }
  return s;
}

// (numerator, phi(q)) of D(x, q).
inline std::pair<u64, u64> divisor_main_term(u64 x, u64 q) {
  u64 s = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (gcd(n, q) == 1) s += tau(n);
  }
  return {s, phi(q)};
}

inline cld interval_fourier(i64 offset, u64 length, u64 q, i64 k) {
  cld s = 0;
  for (i64 n = offset; n < offset + static_cast<i64>(length); ++n) {
    s += e(-static_cast<long double>(mod(n * k, q)), q);
  }
  return s;
}

// sum_{k mod q} e_q(-kb) prod_i S(a, k + s_i; q).
inline cld shifted_product_sum(i64 a, const std::vector<i64>& shifts, i64 b, u64 q) {
  std::vector<cld> row(q);
  for (u64 m = 0; m < q; ++m) row[m] = kloosterman(a, static_cast<i64>(m), q);
  cld s = 0;
  for (u64 k = 0; k < q; ++k) {
    cld prod = 1;
    for (i64 sh : shifts) prod *= row[mod(static_cast<i64>(k) + sh, q)];
    s += e(-static_cast<long double>(mod(static_cast<i64>(k) * b, q)), q) * prod;
  }
  return s;
}

struct Window {
  double lo, hi;
};

inline double window_objective(const std::array<u64, 4>& parts, const std::array<Window, 4>& w) {
  double total = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    const double centre = 0.5 * (std::log(w[j].lo) + std::log(w[j].hi));
    total += std::abs(std::log(static_cast<double>(parts[j])) - centre);
  }
  return total;
}

// Every assignment of q's primes to four parts; the minimal objective, ties
// (within 1e-9) to the lexicographically smallest tuple.
inline std::optional<std::array<u64, 4>> window_factorization(u64 q, const std::array<Window, 4>& w) {
  std::vector<u64> primes;
  for (auto [p, e] : factor(q)) primes.push_back(p);
  const std::size_t k = primes.size();
  std::vector<std::pair<double, std::array<u64, 4>>> feasible;
  u64 total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 4;
  for (u64 code = 0; code < total; ++code) {
    std::array<u64, 4> parts{1, 1, 1, 1};
    u64 c = code;
    for (std::size_t i = 0; i < k; ++i) {
      parts[c % 4] *= primes[i];
      c /= 4;
    }
    bool inside = true;
    for (std::size_t j = 0; j < 4; ++j) {
      const double v = static_cast<double>(parts[j]);
      inside = inside && v >= w[j].lo && v <= w[j].hi;
    }
    if (inside) feasible.push_back({window_objective(parts, w), parts});
  }
  if (feasible.empty()) return std::nullopt;
  double best = feasible.front().first;
  for (const auto& f : feasible) best = std::min(best, f.first);
  std::optional<std::array<u64, 4>> chosen;
  for (const auto& f : feasible) {
    if (f.first <= best + 1e-9 && (!chosen || f.second < *chosen)) chosen = f.second;
  }
  return chosen;
}

// Size windows from their closed-form exponents.
inline std::array<Window, 4> closed_form_windows(double x, double q, double eta) {
  const double q0 = std::pow(q, -2.0 / 15) * std::pow(x, 1.0 / 3);
  const double q1 = std::pow(q, -1.0 / 15) * std::pow(x, 1.0 / 6);
  const double q2 = std::pow(q, 7.0 / 15) * std::pow(x, -1.0 / 6);
  const double q3 = std::pow(q, 11.0 / 15) * std::pow(x, -1.0 / 3);
  auto w = [&](double t, double down, double up) {
    return Window{t * std::pow(x, -down * eta), t * std::pow(x, up * eta)};
  };
  return {w(q0, 1.4, 1.6), w(q1, 0.2, 0.8), w(q2, 0.6, 0.4), w(q3, 0.8, 0.2)};
}

}  // namespace oracle
