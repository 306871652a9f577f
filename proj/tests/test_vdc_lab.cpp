#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>

#include "arith.hpp"
#include "oracles.hpp"
#include "pinned.hpp"
#include "test_support.hpp"
#include "vdc_lab.hpp"

using namespace kloostlab;
using testing::code_of;
using testing::within;

namespace {

// Kloosterman values S(a, m; q), m in [0, q), from the definition.
std::vector<oracle::cld> oracle_row(i64 a, u64 q) {
  std::vector<oracle::cld> row(q);
  for (u64 m = 0; m < q; ++m) row[m] = oracle::kloosterman(a, static_cast<i64>(m), q);
  return row;
}

oracle::cld oracle_product(const std::vector<oracle::cld>& row, i64 k, const std::vector<i64>& shifts) {
  oracle::cld prod = 1;
  for (i64 s : shifts) prod *= row[oracle::mod(k + s, row.size())];
  return prod;
}

bool oracle_all_even(const std::vector<u64>& h, u64 p) {
  std::map<u64, int> count;
  for (u64 mask = 0; mask < (u64{1} << h.size()); ++mask) {
    u64 s = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (mask >> i & 1) s += h[i];
    }
    ++count[s % p];
  }
  return std::all_of(count.begin(), count.end(), [](auto& kv) { return kv.second % 2 == 0; });
}

}  // namespace

TEST_CASE("interval Fourier coefficients") {
  CHECK(interval_fourier({0, 5}, 7, 0).re == doctest::Approx(5));
  CHECK(interval_fourier({0, 7}, 7, 3).abs() < 1e-12);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const u64 q = 1 + rng() % 200;
    const IntegerInterval iv{static_cast<i64>(rng() % 600) - 300, rng() % (2 * q)};
    const i64 k = static_cast<i64>(rng() % (3 * q)) - static_cast<i64>(q);
    CHECK(within(interval_fourier(iv, q, k), oracle::interval_fourier(iv.offset, iv.length, q, k)));
  }
}

TEST_CASE("completion reproduces incomplete sums") {
  const auto r = completion_check(1, 6, {4, 4});
  CHECK(r.direct.re == doctest::Approx(1));
  CHECK(r.deviation <= r.tolerance);
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const u64 q = 2 + rng() % 150;
    const u64 a = 1 + rng() % q;
    if (gcd(a, q) != 1) continue;
    const IntegerInterval iv{static_cast<i64>(rng() % (3 * q)) - static_cast<i64>(q), rng() % (q + 1)};
    const auto c = completion_check(static_cast<i64>(a), q, iv);
    CHECK(c.deviation <= c.tolerance);
    CHECK(within(c.direct, oracle::incomplete_kloosterman(static_cast<i64>(a), q, iv.offset, iv.length)));
  }
}

TEST_CASE("partial sum maxima against a brute-force scan") {
  CHECK(code_of([] { partial_sum_max(2, 6, 0, 3, 1); }) == ErrorCode::kNotCoprime);
  CHECK(code_of([] { partial_sum_max(1, 6, 0, 0, 1); }) == ErrorCode::kDomain);
  CHECK(code_of([] { partial_sum_max(1, 6, 0, 3, 0); }) == ErrorCode::kDomain);
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const u64 q = 2 + rng() % 60;
    const u64 a = 1 + rng() % q;
    if (gcd(a, q) != 1) continue;
    const auto row = oracle_row(static_cast<i64>(a), q);
    const i64 m = static_cast<i64>(rng() % q);
    const u64 k = 1 + rng() % q, r = 1 + rng() % 4;
    long double best = 0;
    oracle::cld run = 0;
    for (u64 t = (r - 1) * k + 1; t <= (r - 1) * k + k; ++t) {
      run += oracle::e(-static_cast<long double>(oracle::mod(m * static_cast<i64>(t), q)), q) * row[t % q];
      best = std::max(best, std::abs(run));
    }
    CHECK(partial_sum_max(static_cast<i64>(a), q, m, k, r) == doctest::Approx(static_cast<double>(best)).epsilon(1e-9).scale(q));
  }
}

TEST_CASE("shifted product sums") {
  std::mt19937_64 rng(34);
  for (u64 p : {2, 3, 5, 7, 13, 31}) {
    for (int trial = 0; trial < 8; ++trial) {
      const i64 a = 1 + static_cast<i64>(rng() % (p - 1 + (p == 2)));
      if (a % static_cast<i64>(p) == 0) continue;
      std::vector<i64> shifts(1 + rng() % 3);
      for (auto& s : shifts) s = static_cast<i64>(rng() % (2 * p));
      const i64 b = static_cast<i64>(rng() % p);
      const auto want = oracle::shifted_product_sum(a, shifts, b, p);
      CHECK(within(shifted_product_complete_sum(a, shifts, b, p), want, 1e-8));
      CHECK(within(shifted_product_sum_direct(a, shifts, b, p), want, 1e-8));
    }
  }
  CHECK(code_of([] { shifted_product_complete_sum(1, std::vector<i64>{0}, 0, 9); }) == ErrorCode::kDomain);
  CHECK(code_of([] { shifted_product_complete_sum(7, std::vector<i64>{0}, 0, 7); }) == ErrorCode::kDomain);
}

TEST_CASE("squarefree products factor over primes") {
  std::mt19937_64 rng(35);
  for (u64 q : {1, 6, 10, 15, 30, 42, 66, 105}) {
    for (int trial = 0; trial < 6; ++trial) {
      const u64 a = 1 + rng() % q;
      if (gcd(a, q) != 1) continue;
      std::vector<i64> shifts(1 + rng() % 2);
      for (auto& s : shifts) s = static_cast<i64>(rng() % q);
      const i64 b = static_cast<i64>(rng() % q);
      const auto sf = shifted_product_sum_squarefree(static_cast<i64>(a), shifts, b, factorize(q));
      const auto direct = shifted_product_sum_direct(static_cast<i64>(a), shifts, b, q);
      CHECK(deviation(sf, direct).distance <= deviation(sf, direct).tolerance);
      if (q <= 42) CHECK(within(direct, oracle::shifted_product_sum(static_cast<i64>(a), shifts, b, q), 1e-8));
    }
  }
  CHECK(code_of([] { shifted_product_sum_squarefree(1, std::vector<i64>{0}, 0, factorize(12)); }) ==
        ErrorCode::kNotSquarefree);
  CHECK(code_of([] { shifted_product_sum_squarefree(3, std::vector<i64>{0}, 0, factorize(15)); }) ==
        ErrorCode::kNotCoprime);
}

TEST_CASE("orthogonality of a single Kloosterman factor") {
  // sum_k e_p(-kb) S(a, k; p) = p e_p(a b^{-1}) for p not dividing b, else 0
  for (u64 p : {3, 7, 23, 101}) {
    for (u64 a = 1; a < p; a += 1 + p / 5) {
      for (u64 b = 0; b < p; b += 1 + p / 6) {
        const auto s = shifted_product_complete_sum(static_cast<i64>(a), std::vector<i64>{0}, static_cast<i64>(b), p);
        oracle::cld want = 0;
        if (b != 0) want = static_cast<long double>(p) * oracle::e(static_cast<long double>(a * *oracle::inverse(b, p) % p), p);
        CHECK(within(s, want, 1e-8));
      }
      const auto second = shifted_product_complete_sum(static_cast<i64>(a), std::vector<i64>{0, 0}, 0, p);
      CHECK(second.re == doctest::Approx(static_cast<double>(p * (p - 1))).epsilon(1e-12));
    }
  }
}

TEST_CASE("complete exponential sums respect the pinned constants") {
  std::mt19937_64 rng(36);
  for (u64 p : primes_up_to(97)) {
    if (p < 3) continue;
    for (unsigned j = 1; j <= 3; ++j) {
      for (int trial = 0; trial < 4; ++trial) {
        const i64 a = 1 + static_cast<i64>(rng() % (p - 1));
        std::vector<i64> shifts(j);
        for (auto& s : shifts) s = static_cast<i64>(rng() % p);
        const i64 b = 1 + static_cast<i64>(rng() % (p - 1));
        const auto s = shifted_product_complete_sum(a, shifts, b, p);
        const double scale = std::pow(static_cast<double>(p), (j + 1) / 2.0);
        CHECK(s.abs() / scale <= pinned::kCompleteExpSmall[j]);
      }
    }
  }
}

TEST_CASE("subset shift offsets and T") {
  const ModulusSplit split({7, 3, 5});
  const auto offsets = subset_shift_offsets(split, ShiftVector{{2, -1}});
  CHECK(offsets == std::vector<i64>{0, 6, -5, 1});
  CHECK(code_of([&] { subset_shift_offsets(split, ShiftVector{{1}}); }) == ErrorCode::kDomain);
  std::mt19937_64 rng(37);
  for (u64 q0 : {5, 7, 11, 13}) {
    const i64 a = 1 + static_cast<i64>(rng() % (q0 - 1));
    const auto row = oracle_row(a, q0);
    for (int trial = 0; trial < 6; ++trial) {
      const ModulusSplit s({q0, 2, 3});
      const ShiftVector h{{static_cast<i64>(rng() % 9) - 4, static_cast<i64>(rng() % 9) - 4}};
      const IntegerInterval iv{static_cast<i64>(rng() % 40) - 20, rng() % 30};
      const auto offs = subset_shift_offsets(s, h);
      oracle::cld want = 0;
      for (i64 k = iv.begin(); k < iv.end(); ++k) {
        want += oracle_product(row, k, offs);
      }
      CHECK(within(t_eval(a, s, h, iv), want, 1e-8));
    }
  }
  CHECK(code_of([] { t_eval(7, ModulusSplit({7, 2}), ShiftVector{{1}}, {0, 3}); }) == ErrorCode::kNotCoprime);
  CHECK(t_eval(1, ModulusSplit({7, 2}), ShiftVector{{1}}, {0, 0}).abs() == 0);
}

TEST_CASE("vanishing lemma") {
  CHECK(subset_sums_all_even(std::vector<u64>{1, 1}, 2));
  CHECK_FALSE(subset_sums_all_even(std::vector<u64>{1, 2}, 5));
  CHECK(code_of([] { vanishing_lemma_check(2, 2); }) == ErrorCode::kDomain);
  CHECK(code_of([] { vanishing_lemma_check(9, 2); }) == ErrorCode::kDomain);
  CHECK(code_of([] { vanishing_lemma_check(3, 0); }) == ErrorCode::kDomain);
  std::mt19937_64 rng(38);
  for (u64 p : {3, 5, 7}) {
    for (unsigned l = 1; l <= 3; ++l) {
      CHECK(vanishing_lemma_check(p, l).empty());
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<u64> h(l);
        for (auto& v : h) v = rng() % (3 * p);
        CHECK(subset_sums_all_even(h, p) == oracle_all_even(h, p));
      }
    }
  }
}

TEST_CASE("one differencing step") {
  CHECK(onediff_twist(1, 7, 3) == 4);  // 3^{-1} = 5 mod 7, 5^2 = 25 = 4
  const auto w = onediff_window({0, 10}, 3, 2);
  CHECK(w.offset == 0);
  CHECK(w.length == 4);
  CHECK(onediff_window({0, 10}, 3, -2).offset == 6);
  CHECK(onediff_window({0, 5}, 3, 2).empty());
  CHECK(code_of([] { onediff_ratio(1, 7, 5, 0, {0, 4}, std::vector<i64>{0}); }) == ErrorCode::kDomain);
  CHECK(code_of([] { onediff_ratio(7, 7, 5, 0, {0, 10}, std::vector<i64>{0}); }) == ErrorCode::kNotCoprime);
  CHECK(code_of([] { onediff_ratio(1, 7, 5, 0, {0, 10}, std::vector<i64>{}); }) == ErrorCode::kDomain);

  std::mt19937_64 rng(39);
  for (auto [q0, q1] : {std::pair<u64, u64>{7, 3}, {11, 2}, {13, 5}, {5, 6}}) {
    const u64 q = q0 * q1;
    for (int trial = 0; trial < 4; ++trial) {
      const u64 a = 1 + rng() % q;
      if (gcd(a, q) != 1) continue;
      const std::vector<i64> shifts = trial % 2 ? std::vector<i64>{0} : std::vector<i64>{0, static_cast<i64>(rng() % q)};
      const IntegerInterval iv{static_cast<i64>(rng() % q), q1 + rng() % (q - q1 + 1)};
      const i64 m = static_cast<i64>(rng() % q);
      const auto r = onediff_ratio(static_cast<i64>(a), q0, q1, m, iv, shifts);
      const auto row = oracle_row(static_cast<i64>(a), q);
      oracle::cld t = 0;
      for (i64 k = iv.begin(); k < iv.end(); ++k) {
        t += oracle::e(-static_cast<long double>(oracle::mod(m * k, q)), q) * oracle_product(row, k, shifts);
      }
      CHECK(r.lhs == doctest::Approx(static_cast<double>(std::norm(t))).epsilon(1e-9).scale(q));
      CHECK(r.ratio <= pinned::kOneDiffSmall);
      CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs_core));

      const i64 a_prime = static_cast<i64>(onediff_twist(static_cast<i64>(a), q0, q1));
      const auto row0 = oracle_row(a_prime, q0);
      const i64 h = 1;
      const auto window = onediff_window(iv, q1, h);
      std::vector<i64> doubled = shifts;
      for (i64 s : shifts) doubled.push_back(s + static_cast<i64>(q1) * h);
      oracle::cld inner = 0;
      for (i64 k = window.begin(); k < window.end(); ++k) inner += oracle_product(row0, k, doubled);
      CHECK(within(onediff_inner(a_prime, q0, q1, h, iv, shifts), inner, 1e-8));
    }
  }
}
