// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "arith.hpp"
#include "bounds_opt.hpp"
#include "divisor_ap.hpp"
#include "kloosterman.hpp"
#include "lemma_suites.hpp"
#include "oracles.hpp"
#include "pinned.hpp"
#include "rational.hpp"
#include "sweep.hpp"
#include "vdc_lab.hpp"

using namespace kloostlab;

namespace {

unsigned g_jobs = 1;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome weil() {
  const auto s = weil_grid(499, g_jobs);
  const bool ok = s.max_excess <= 0 && s.max_imag_excess <= 0 && s.max_ratio <= 1;
  return {ok, fmt("%" PRIu64 " primes, %" PRIu64 " sums, max |S|/2sqrt(p) = %.6f", s.primes, s.sums,
                  s.max_ratio)};
}

Outcome twisted() {
  const auto s = twisted_grid(1000, 10, g_jobs);
  const bool ok = s.max_excess <= 0 && s.max_deviation <= 1e-8 && s.comparisons > 0;
  return {ok, fmt("%" PRIu64 " moduli, %" PRIu64 " comparisons, max deviation %.3g", s.moduli,
                  s.comparisons, s.max_deviation)};
}

Outcome completion() {
  const auto s = completion_grid(300, 20, g_jobs);
  const bool ok = s.max_deviation <= 1e-8 && s.max_excess <= 0;
  return {ok, fmt("%" PRIu64 " checks, max deviation %.3g", s.checks, s.max_deviation)};
}

Outcome divisor_dual() {
  u64 queries = 0, spot = 0;
  bool ok = true;
  std::string first;
  std::mt19937_64 rng(4);
  for (u64 x : {1000, 10'000, 100'000}) {
    const DivisorTable table(x);
    for (u64 q = 1; q <= 100; ++q) {
      const MainTerm main = divisor_main_term(x, q);
      Rational total;
      for (u64 a = 0; a < q; ++a) {
        const u64 h = divisor_sum_ap({x, q, static_cast<i64>(a)}, DivisorMethod::kHyperbola);
        const u64 s = divisor_sum_ap({x, q, static_cast<i64>(a)}, table);
        ++queries;
        if (h != s && first.empty()) first = fmt("D(%" PRIu64 ",%" PRIu64 ",%" PRIu64 ")", x, q, a);
        ok = ok && h == s;
        if (gcd(a, q) == 1) total = total + error_term(h, main).exact;
        if (x <= 10'000 && rng() % 50 == 0) {
          ++spot;
          ok = ok && h == oracle::divisor_sum_ap(x, q, static_cast<i64>(a));
        }
      }
      if (!(total == Rational(0)) && first.empty()) first = fmt("sum E(%" PRIu64 ",%" PRIu64 ") != 0", x, q);
      ok = ok && total == Rational(0);
    }
  }
  return {ok, fmt("%" PRIu64 " progressions identical, sum of E = 0 for every (x, q), %" PRIu64
                  " oracle spot checks%s%s",
                  queries, spot, first.empty() ? "" : ", first failure ", first.c_str())};
}

Outcome hand_values() {
  bool ok = divisor_sum_ap({10, 3, 1}) == 10;
  ok = ok && divisor_main_term(10, 3).exact == Rational(9);
  ok = ok && error_term({10, 3, 1}).exact == Rational(1);
  const auto s113 = complete_kloosterman(1, 1, 3);
  ok = ok && std::abs(s113.re + 1) <= s113.err + 1e-12 && std::abs(s113.im) <= s113.err + 1e-12;
  u64 moduli = 0;
  for (u64 q = 1; q <= 500; ++q) {
    if (!oracle::squarefree(q)) continue;
    ++moduli;
    const auto s = complete_kloosterman(1, 0, q);
    ok = ok && std::abs(s.re - oracle::mobius(q)) <= s.err + 1e-9 && std::abs(s.im) <= s.err + 1e-9;
  }
  return {ok, fmt("D(10,3,1)=10, D(10,3)=9, E(10,3,1)=1, S(1,1;3)=-1, S(1,0;q)=mu(q) on %" PRIu64
                  " squarefree q",
                  moduli)};
}

// Every h in (F_p^*)^l, checked by counting subset sums in a map.
u64 oracle_vanishing(u64 p, unsigned l) {
  u64 total = 1;
  for (unsigned i = 0; i < l; ++i) total *= p - 1;
  u64 bad = 0;
  for (u64 code = 0; code < total; ++code) {
    std::vector<u64> h;
    u64 c = code;
    for (unsigned i = 0; i < l; ++i, c /= p - 1) h.push_back(1 + c % (p - 1));
    std::map<u64, int> count;
    for (u64 mask = 0; mask < (u64{1} << l); ++mask) {
      u64 s = 0;
      for (unsigned i = 0; i < l; ++i) {
        if (mask >> i & 1) s += h[i];
      }
      ++count[s % p];
    }
    bool even = true;
    for (auto& [v, n] : count) even = even && n % 2 == 0;
    bad += even;
  }
  return bad;
}

Outcome vanishing() {
  const std::vector<u64> primes{3, 5, 7, 11, 13};
  u64 bad = 0, oracle_bad = 0, vectors = 0;
  for (const auto& cell : vanishing_grid(primes, 3)) {
    bad += cell.counterexamples;
    vectors += cell.vectors;
    oracle_bad += oracle_vanishing(cell.p, cell.l);
  }
  return {bad == 0 && oracle_bad == 0,
          fmt("%" PRIu64 " counterexamples (oracle %" PRIu64 ") over %" PRIu64 " vectors, p <= 13, l <= 3",
              bad, oracle_bad, vectors)};
}

Outcome orthogonality() {
  const auto s = orthogonality_grid(199, g_jobs);
  // independent spot check at small primes
  bool spot = true;
  for (u64 p : {3, 5, 7, 11}) {
    for (u64 a = 1; a < p; ++a) {
      oracle::cld first = 0, second = 0;
      for (u64 k = 0; k < p; ++k) {
        const auto v = oracle::kloosterman(static_cast<i64>(a), static_cast<i64>(k), p);
        first += v;
        second += v * v;
      }
      spot = spot && std::abs(first) < 1e-9 &&
             std::abs(second - static_cast<long double>(p * p - p)) < 1e-9;
    }
  }
  const bool ok = spot && s.max_first_rel <= 1e-6 && s.max_second_rel <= 1e-6;
  return {ok, fmt("%" PRIu64 " (a, p) cells, max rel %.3g / %.3g", s.cells, s.max_first_rel, s.max_second_rel)};
}

Outcome completeexp() {
  const auto s = completeexp_grid(199, g_jobs);
  bool ok = s.max_cap_excess <= 0;
  std::string detail = fmt("%" PRIu64 " cells; generic", s.cells);
  for (unsigned j = 0; j <= kMaxShiftCount; ++j) {
    ok = ok && s.generic_max[j] <= pinned::kCompleteExpFull[j];
    detail += fmt(" j=%u %.4f", j, s.generic_max[j]);
  }
  detail += "; even";
  for (unsigned j = 0; j <= kMaxShiftCount; ++j) {
    if (s.even_cells[j] == 0) continue;
    ok = ok && s.even_max[j] <= std::ldexp(1.0, static_cast<int>(j)) + 1e-12;
    detail += fmt(" j=%u %.4f", j, s.even_max[j]);
  }
  return {ok, detail};
}

Outcome factorizer() {
  u64 moduli = 0, specs = 0, feasible = 0, mismatches = 0;
  for (u64 q = 1; q <= 30'000; ++q) {
    if (!oracle::squarefree(q)) continue;
    const auto fq = factorize(q);
    if (fq.omega() > 6) continue;
    ++moduli;
    std::mt19937_64 rng(q * 0x9e3779b97f4a7c15ULL + 9);
    const double logq = std::log(static_cast<double>(q));
    for (int i = 0; i < 50; ++i) {
      std::array<Window, 4> w;
      if (i % 2 == 0) {
        std::uniform_real_distribution<double> u(-0.5, logq + 0.5);
        for (auto& part : w) {
          const double a = u(rng), b = u(rng);
          part = {std::exp(std::min(a, b)), std::exp(std::max(a, b))};
        }
      } else {
        std::array<double, 4> planted{1, 1, 1, 1};
        for (u64 p : fq.primes()) planted[rng() % 4] *= static_cast<double>(p);
        std::uniform_real_distribution<double> u(0.0, 1.2);
        for (std::size_t j = 0; j < 4; ++j) w[j] = {planted[j] * std::exp(-u(rng)), planted[j] * std::exp(u(rng))};
      }
      const auto spec = make_window_spec(w);
      std::array<oracle::Window, 4> ow;
      for (std::size_t j = 0; j < 4; ++j) ow[j] = {w[j].lo, w[j].hi};
      const auto got = factorize_to_windows(fq, spec);
      const auto want = oracle::window_factorization(q, ow);
      ++specs;
      if (got.has_value() != want.has_value()) {
        ++mismatches;
      } else if (got) {
        ++feasible;
        const std::array<u64, 4> parts{got->part(0), got->part(1), got->part(2), got->part(3)};
        mismatches += parts != *want;
      }
    }
  }
  return {mismatches == 0, fmt("%" PRIu64 " moduli x 50 specs = %" PRIu64 " cases, %" PRIu64
                               " feasible, %" PRIu64 " mismatches",
                               moduli, specs, feasible, mismatches)};
}

// 246 varpi + 18 eta < 1 for doubles, decided exactly on their dyadic values.
bool exact_admissible(double varpi, double eta) {
  struct Dyadic {
    i128 m;
    int e;
  };
  auto split = [](double v) {
    int e = 0;
    const double f = std::frexp(v, &e);
    return Dyadic{static_cast<i128>(std::ldexp(f, 53)), e - 53};
  };
  const Dyadic a = split(varpi), b = split(eta);
  const int lo = std::min({a.m ? a.e : 0, b.m ? b.e : 0, 0});
  auto lift = [&](const Dyadic& d) { return d.m == 0 ? i128{0} : d.m << (d.e - lo); };
  return 246 * lift(a) + 18 * lift(b) < (i128{1} << -lo);
}

Outcome targets_and_admissibility() {
  std::mt19937_64 rng(10);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const u64 x = 2 + rng() % 1'000'000'000'000ULL;
    const u64 q = 1 + rng() % x;
    const double rel = std::abs(target_sizes(x, q).product() / static_cast<double>(q) - 1);
    worst = std::max(worst, rel);
  }
  u64 cases = 0, wrong = 0;
  auto check_double = [&](double v, double e) {
    ++cases;
    wrong += admissible(v, e) != exact_admissible(v, e);
  };
  check_double(0, 0);
  check_double(0.003, 0.01);
  check_double(1.0 / 246, 0);
  check_double(0, 1.0 / 18);
  check_double(1.0 / 512, 0.25 * (1 - 246.0 / 512) / 4.5);
  std::uniform_real_distribution<double> u(0, 1.0 / 246);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng);
    const double e = (1 - 246 * v) / 18;
    if (e < 1e-20) continue;
    for (double d : {std::nextafter(e, 0.0), e, std::nextafter(e, 1.0)}) check_double(v, d);
  }
  // exact rationals with an independent cross-multiplied comparison
  auto check_rational = [&](i128 vn, i128 vd, i128 en, i128 ed) {
    ++cases;
    const bool want = 246 * vn * ed + 18 * en * vd < vd * ed;
    wrong += admissible(Rational(vn, vd), Rational(en, ed)) != want;
  };
  check_rational(1, 246, 0, 1);
  check_rational(1, 492, 1, 36);
  check_rational(1, 493, 1, 36);
  check_rational(0, 1, 1, 18);
  check_rational(1, 300, 1, 100);
  for (i128 d = 247; d < 2000; d += 37) {
    // 246/d + 18 eta = 1 exactly at eta = (d - 246) / (18 d)
    check_rational(1, d, d - 246, 18 * d);
    check_rational(1, d, d - 247, 18 * d);
    check_rational(1, d, d - 245, 18 * d);
  }
  const bool ok = worst <= 1e-12 && wrong == 0;
  return {ok, fmt("product identity max rel %.3g over 1000 pairs; %" PRIu64 " boundary cases, %" PRIu64 " wrong",
                  worst, cases, wrong)};
}

Outcome sweep_end_to_end() {
  SweepConfig c;
  c.x_values = {100'000, 300'000, 1'000'000};
  c.smooth = SmoothSource{0.60, 0.64};
  c.eta = 0.25;
  c.residue_sample = 20;
  c.seed = 7;
  c.jobs = 4;
  const auto result = run_sweep(c);
  const std::string report = render_report(result);
  const std::string again = render_report(run_sweep(c));
  c.jobs = 1;
  const std::string serial = render_report(run_sweep(c));
  const bool reproducible = report == again && report == serial;

  u64 feasible_rows = 0, outside = 0, not_optimal = 0;
  std::map<std::pair<u64, u64>, bool> checked;
  for (const auto& r : result.rows) {
    if (!r.split) continue;
    ++feasible_rows;
    const auto& s = *r.split;
    const auto w = oracle::closed_form_windows(static_cast<double>(r.x), static_cast<double>(r.q), c.eta);
    bool inside = s[0] * s[1] * s[2] * s[3] == r.q;
    for (std::size_t j = 0; j < 4; ++j) {
      const double v = static_cast<double>(s[j]);
      inside = inside && v >= w[j].lo * (1 - 1e-12) && v <= w[j].hi * (1 + 1e-12);
    }
    outside += !inside;
    if (checked.emplace(std::pair{r.x, r.q}, true).second) {
      const auto spec = target_windows(r.x, r.q, c.eta);
      std::array<oracle::Window, 4> ow;
      for (std::size_t j = 0; j < 4; ++j) ow[j] = {spec.parts[j].lo, spec.parts[j].hi};
      const auto want = oracle::window_factorization(r.q, ow);
      not_optimal += !want || *want != s;
    }
  }
  const auto& sum = result.summary;
  const bool ok = reproducible && outside == 0 && not_optimal == 0 && sum.error_rows == 0 && sum.fit.has_value();
  return {ok, fmt("%" PRIu64 " rows, %" PRIu64 " cells, %" PRIu64 " infeasible, %" PRIu64
                  " feasible rows all inside windows (%" PRIu64 " outside, %" PRIu64
                  " not optimal), reproducible=%s, fitted exponent %.4f, max ratio %.4g",
                  sum.rows, sum.cells, sum.infeasible_cells, feasible_rows, outside, not_optimal,
                  reproducible ? "yes" : "no", sum.fit ? sum.fit->slope : std::nan(""), sum.max_ratio)};
}

}  // namespace

int main() {
  g_jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Weil bound at primes", weil},
      {"twisted multiplicativity", twisted},
      {"completion identity", completion},
      {"divisor sums by two algorithms", divisor_dual},
      {"hand values", hand_values},
      {"vanishing lemma", vanishing},
      {"product-sum orthogonality", orthogonality},
      {"complete exponential sum regression", completeexp},
      {"window factorizer against enumeration", factorizer},
      {"target sizes and admissibility", targets_and_admissibility},
      {"end-to-end sweep", sweep_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s: %s (%s) [%.1f s]\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
