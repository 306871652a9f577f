#include "lemma_suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "error.hpp"
#include "exp_sum.hpp"
#include "kloosterman.hpp"
#include "modulus_split.hpp"
#include "parallel.hpp"
#include "pinned.hpp"
#include "vdc_lab.hpp"

namespace kloostlab {

namespace {

constexpr double kNegInf = -1e300;

std::vector<u64> squarefree_upto(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 q = lo; q <= hi; ++q) {
    if (factorize(q).squarefree()) out.push_back(q);
  }
  return out;
}

u64 uniform(std::mt19937_64& rng, u64 lo, u64 hi) {
  return std::uniform_int_distribution<u64>(lo, hi)(rng);
}

// A seeded residue in [1, q) coprime to q; 1 when q <= 2.
u64 coprime_sample(std::mt19937_64& rng, u64 q) {
  if (q <= 2) return 1;
  while (true) {
    const u64 a = uniform(rng, 1, q - 1);
    if (gcd(a, q) == 1) return a;
  }
}

bool multiplicities_even(std::vector<u64> values) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    if ((j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

}  // namespace

WeilStats weil_grid(u64 max_p, unsigned jobs) {
  struct Cell {
    u64 p;
    u64 a;
  };
  std::vector<Cell> cells;
  const std::vector<u64> primes = primes_up_to(max_p);
  for (u64 p : primes) {
    for (u64 a = 1; a < p; ++a) cells.push_back({p, a});
  }
  std::vector<WeilStats> partial(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const auto [p, a] = cells[i];
    const std::vector<SumValue> row = kloosterman_row(static_cast<i64>(a), p);
    const double cap = 2 * std::sqrt(static_cast<double>(p));
    WeilStats& s = partial[i];
    for (u64 b = 1; b < p; ++b) {
      const SumValue& v = row[b];
      ++s.sums;
      s.max_ratio = std::max(s.max_ratio, v.abs() / cap);
      s.max_excess = std::max(s.max_excess, v.abs() - cap - v.err);
      s.max_imag_excess = std::max(s.max_imag_excess, std::abs(v.im) - v.err);
    }
  });
  WeilStats total;
  total.primes = primes.size();
  for (const auto& s : partial) {
    total.sums += s.sums;
    total.max_ratio = std::max(total.max_ratio, s.max_ratio);
    total.max_excess = std::max(total.max_excess, s.max_excess);
    total.max_imag_excess = std::max(total.max_imag_excess, s.max_imag_excess);
  }
  return total;
}

CrtStats twisted_grid(u64 max_q, unsigned samples, unsigned jobs) {
  const std::vector<u64> moduli = squarefree_upto(2, max_q);
  std::vector<CrtStats> partial(moduli.size());
  parallel_for(moduli.size(), jobs, [&](std::size_t i) {
    const u64 q = moduli[i];
    const std::vector<u64> divs = divisors(factorize(q));
    auto rng = cell_rng(kGridSeed, q);
    CrtStats& s = partial[i];
    for (unsigned t = 0; t < samples; ++t) {
      const i64 a = static_cast<i64>(uniform(rng, 0, q - 1));
      const i64 b = static_cast<i64>(uniform(rng, 0, q - 1));
      const SumValue direct = complete_kloosterman(a, b, q, KloostermanMethod::kDirect);
      for (u64 d : divs) {
        const SumValue crt = kloosterman_crt(a, b, ModulusSplit({d, q / d}));
        const Deviation dev = deviation(direct, crt);
        ++s.comparisons;
        s.max_deviation = std::max(s.max_deviation, dev.distance);
        s.max_excess = std::max(s.max_excess, dev.distance - dev.tolerance);
      }
    }
  });
  CrtStats total;
  total.moduli = moduli.size();
  for (const auto& s : partial) {
    total.comparisons += s.comparisons;
    total.max_deviation = std::max(total.max_deviation, s.max_deviation);
    total.max_excess = std::max(total.max_excess, s.max_excess);
  }
  return total;
}

CompletionStats completion_grid(u64 max_q, unsigned intervals, unsigned jobs) {
  std::vector<CompletionStats> partial(max_q + 1);
  parallel_for(max_q, jobs, [&](std::size_t i) {
    const u64 q = i + 1;
    auto rng = cell_rng(kGridSeed, q);
    CompletionStats& s = partial[q];
    std::vector<IntegerInterval> spans;
    std::vector<std::vector<SumValue>> transforms;
    for (unsigned t = 0; t < intervals; ++t) {
      const u64 n = uniform(rng, 0, q);
      const i64 m = static_cast<i64>(uniform(rng, 0, 3 * q)) - static_cast<i64>(q);
      spans.push_back({m, n});
      std::vector<SumValue> f(q);
      double energy = 0;
      for (u64 k = 0; k < q; ++k) {
        f[k] = interval_fourier(spans.back(), q, static_cast<i64>(k));
        energy += f[k].abs() * f[k].abs();
      }
      const double expected = static_cast<double>(q * n);
      s.max_parseval_rel =
          std::max(s.max_parseval_rel, std::abs(energy - expected) / std::max(1.0, expected));
      transforms.push_back(std::move(f));
    }
    for (u64 a = 0; a < q; ++a) {
      if (gcd(a, q) != 1) continue;
      const std::vector<SumValue> table = kloosterman_table(static_cast<i64>(a), q);
      for (std::size_t t = 0; t < spans.size(); ++t) {
        const SumValue direct = incomplete_kloosterman(static_cast<i64>(a), q, spans[t]);
        SumAccumulator acc;
        for (u64 k = 0; k < q; ++k) acc.add(transforms[t][k] * table[k]);
        const SumValue completed = scale(acc.result(), 1.0 / static_cast<double>(q));
        const Deviation dev = deviation(direct, completed);
        ++s.checks;
        s.max_deviation = std::max(s.max_deviation, dev.distance);
        s.max_excess = std::max(s.max_excess, dev.distance - dev.tolerance);
      }
    }
  });
  CompletionStats total;
  for (const auto& s : partial) {
    total.checks += s.checks;
    total.max_deviation = std::max(total.max_deviation, s.max_deviation);
    total.max_excess = std::max(total.max_excess, s.max_excess);
    total.max_parseval_rel = std::max(total.max_parseval_rel, s.max_parseval_rel);
  }
  return total;
}

std::vector<VanishingCell> vanishing_grid(std::span<const u64> primes, unsigned max_l) {
  std::vector<VanishingCell> cells;
  for (u64 p : primes) {
    for (unsigned l = 1; l <= max_l; ++l) {
      u64 vectors = 1;
      for (unsigned i = 0; i < l; ++i) vectors *= p - 1;
      cells.push_back({p, l, vectors, vanishing_lemma_check(p, l).size()});
    }
  }
  return cells;
}

OrthogonalityStats orthogonality_grid(u64 max_p, unsigned jobs) {
  const std::vector<u64> primes = primes_up_to(max_p);
  std::vector<OrthogonalityStats> partial(primes.size());
  parallel_for(primes.size(), jobs, [&](std::size_t i) {
    const u64 p = primes[i];
    const double pd = static_cast<double>(p);
    const std::array<i64, 1> one{0};
    const std::array<i64, 2> two{0, 0};
    OrthogonalityStats& s = partial[i];
    for (u64 a = 1; a < p; ++a) {
      const SumValue first = shifted_product_complete_sum(static_cast<i64>(a), one, 0, p);
      const SumValue second = shifted_product_complete_sum(static_cast<i64>(a), two, 0, p);
      ++s.cells;
      s.max_first_rel = std::max(s.max_first_rel, first.abs() / pd);
      const double expected = pd * pd - pd;
      const double miss = std::hypot(second.re - expected, second.im);
      s.max_second_rel = std::max(s.max_second_rel, miss / expected);
    }
  });
  OrthogonalityStats total;
  for (const auto& s : partial) {
    total.cells += s.cells;
    total.max_first_rel = std::max(total.max_first_rel, s.max_first_rel);
    total.max_second_rel = std::max(total.max_second_rel, s.max_second_rel);
  }
  return total;
}

CompleteExpStats completeexp_grid(u64 max_p, unsigned jobs) {
  const std::vector<u64> primes = primes_up_to(max_p);
  std::vector<CompleteExpStats> partial(primes.size());
  for (auto& s : partial) s.max_cap_excess = kNegInf;
  parallel_for(primes.size(), jobs, [&](std::size_t i) {
    const u64 p = primes[i];
    const double pd = static_cast<double>(p);
    auto rng = cell_rng(kGridSeed, p);
    CompleteExpStats& s = partial[i];
    std::vector<u64> a_values{1};
    if (p > 2) a_values.push_back(uniform(rng, 2, p - 1));
    for (unsigned j = 0; j <= kMaxShiftCount; ++j) {
      std::vector<std::vector<i64>> tuples;
      tuples.emplace_back(j, 0);
      if (j == 2) {
        tuples.push_back({0, 1});
        tuples.push_back({1, 1});
      }
      if (j == 3) {
        tuples.push_back({0, 0, 1});
        tuples.push_back({0, 1, 2});
      }
      for (int t = 0; t < (j == 0 ? 0 : 4); ++t) {
        std::vector<i64> tuple(j);
        for (auto& v : tuple) v = static_cast<i64>(uniform(rng, 0, p - 1));
        tuples.push_back(std::move(tuple));
      }
      const std::array<u64, 3> b_values{0, 1, uniform(rng, 0, p - 1)};
      for (u64 a : a_values) {
        for (const auto& tuple : tuples) {
          std::vector<u64> reduced;
          for (i64 v : tuple) reduced.push_back(reduce_mod(v, p));
          const bool all_even = multiplicities_even(reduced);
          for (u64 b : b_values) {
            const SumValue v = shifted_product_complete_sum(static_cast<i64>(a), tuple,
                                                            static_cast<i64>(b), p);
            ++s.cells;
            if (b % p == 0 && all_even) {
              const double scale_even = std::pow(pd, (j + 2) / 2.0);
              ++s.even_cells[j];
              s.even_max[j] = std::max(s.even_max[j], v.abs() / scale_even);
              const double cap = std::ldexp(1.0, static_cast<int>(j)) * scale_even;
              s.max_cap_excess = std::max(s.max_cap_excess, v.abs() - cap - v.err);
            } else {
              ++s.generic_cells[j];
              s.generic_max[j] = std::max(s.generic_max[j], v.abs() / std::pow(pd, (j + 1) / 2.0));
            }
          }
        }
      }
    }
  });
  CompleteExpStats total;
  total.max_cap_excess = kNegInf;
  for (const auto& s : partial) {
    total.cells += s.cells;
    for (unsigned j = 0; j <= kMaxShiftCount; ++j) {
      total.generic_max[j] = std::max(total.generic_max[j], s.generic_max[j]);
      total.even_max[j] = std::max(total.even_max[j], s.even_max[j]);
      total.generic_cells[j] += s.generic_cells[j];
      total.even_cells[j] += s.even_cells[j];
    }
    total.max_cap_excess = std::max(total.max_cap_excess, s.max_cap_excess);
  }
  return total;
}

SquarefreeProductStats squarefree_product_grid(u64 max_q, unsigned jobs) {
  const std::vector<u64> moduli = squarefree_upto(1, max_q);
  std::vector<SquarefreeProductStats> partial(moduli.size());
  parallel_for(moduli.size(), jobs, [&](std::size_t i) {
    const u64 q = moduli[i];
    const FactoredInteger fq = factorize(q);
    auto rng = cell_rng(kGridSeed, q);
    std::vector<i64> points{0, 1};
    for (int t = 0; t < 3; ++t) points.push_back(static_cast<i64>(uniform(rng, 0, q - 1)));
    std::vector<std::vector<i64>> tuples{{}};
    for (i64 s1 : points) tuples.push_back({s1});
    for (i64 s1 : points) {
      for (i64 s2 : points) tuples.push_back({s1, s2});
    }
    std::vector<u64> a_values{1};
    if (q > 2) a_values.push_back(coprime_sample(rng, q));
    SquarefreeProductStats& s = partial[i];
    s.max_excess = kNegInf;
    for (u64 a : a_values) {
      const std::vector<SumValue> row = kloosterman_row(static_cast<i64>(a), q);
      for (const auto& tuple : tuples) {
        for (i64 b : {0, 1}) {
          const SumValue crt = shifted_product_sum_squarefree(static_cast<i64>(a), tuple, b, fq);
          const SumValue direct = shifted_product_sum_row(row, tuple, b);
          const Deviation dev = deviation(crt, direct);
          ++s.cells;
          s.max_deviation = std::max(s.max_deviation, dev.distance);
          s.max_excess = std::max(s.max_excess, dev.distance - dev.tolerance);
        }
      }
    }
  });
  SquarefreeProductStats total;
  for (const auto& s : partial) {
    total.cells += s.cells;
    total.max_deviation = std::max(total.max_deviation, s.max_deviation);
    total.max_excess = std::max(total.max_excess, s.max_excess);
  }
  return total;
}

OneDiffStats onediff_grid(u64 max_product, u64 max_k, unsigned jobs) {
  struct Pair {
    u64 q0;
    u64 q1;
  };
  std::vector<Pair> pairs;
  for (u64 q : squarefree_upto(4, max_product)) {
    for (u64 d : divisors(factorize(q))) {
      if (d >= 2 && q / d >= 2) pairs.push_back({d, q / d});
    }
  }
  std::vector<OneDiffStats> partial(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto [q0, q1] = pairs[i];
    const u64 q = q0 * q1;
    auto rng = cell_rng(kGridSeed, q0 * 1'000'003 + q1);
    OneDiffStats& s = partial[i];
    std::vector<u64> k_values;
    for (u64 k : {q1, max_k / 3, 2 * max_k / 3, max_k}) {
      if (k >= q1 && k <= q) k_values.push_back(k);
    }
    std::sort(k_values.begin(), k_values.end());
    k_values.erase(std::unique(k_values.begin(), k_values.end()), k_values.end());
    const std::array<i64, 2> offsets{0, static_cast<i64>(uniform(rng, 0, q - 1))};
    const std::array<u64, 2> a_values{1, coprime_sample(rng, q)};
    const std::array<i64, 2> m_values{0, static_cast<i64>(uniform(rng, 0, q - 1))};
    const std::vector<std::vector<i64>> shift_sets{{0}, {0, static_cast<i64>(uniform(rng, 1, q0 - 1))}};
    for (u64 k : k_values) {
      for (i64 offset : offsets) {
        const IntegerInterval interval{offset, k};
        for (u64 a : a_values) {
          for (i64 m : m_values) {
            for (const auto& shifts : shift_sets) {
              const OneDiffRatio r = onediff_ratio(static_cast<i64>(a), q0, q1, m, interval, shifts);
              ++s.cells;
              s.max_ratio = std::max(s.max_ratio, r.ratio);
            }
          }
          // T(h) with l = 1 against the differenced inner sum.
          const i64 a_prime = static_cast<i64>(onediff_twist(static_cast<i64>(a), q0, q1));
          const ModulusSplit split({q0, q1});
          const std::array<i64, 1> zero{0};
          for (i64 h = 1; h <= static_cast<i64>(k / q1); ++h) {
            const SumValue t = t_eval(a_prime, split, ShiftVector{{h}},
                                      onediff_window(interval, q1, h));
            const SumValue inner = onediff_inner(a_prime, q0, q1, h, interval, zero);
            const Deviation dev = deviation(t, inner);
            s.max_consistency = std::max(s.max_consistency, dev.distance - dev.tolerance);
          }
        }
      }
    }
  });
  OneDiffStats total;
  total.max_consistency = kNegInf;
  for (const auto& s : partial) {
    total.cells += s.cells;
    total.max_ratio = std::max(total.max_ratio, s.max_ratio);
    total.max_consistency = std::max(total.max_consistency, s.max_consistency);
  }
  return total;
}

namespace {

void check(LemmaReport& report, std::string name, double value, double limit) {
  const bool ok = value <= limit;
  report.passed = report.passed && ok;
  report.lines.push_back({std::move(name), value, limit, ok});
}

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void run_weil(LemmaReport& r, bool full, unsigned jobs) {
  const u64 max_p = full ? 997 : 499;
  const WeilStats w = weil_grid(max_p, jobs);
  r.notes.push_back(format("%llu sums over %llu primes p <= %llu", (unsigned long long)w.sums,
                           (unsigned long long)w.primes, (unsigned long long)max_p));
  check(r, "max |S|/(2 sqrt p)", w.max_ratio, 1.0);
  check(r, "max |S| - 2 sqrt p - err", w.max_excess, 0.0);
  check(r, "max |im S| - err", w.max_imag_excess, 0.0);
  const u64 max_q = full ? 2000 : 1000;
  const CrtStats c = twisted_grid(max_q, 10, jobs);
  r.notes.push_back(format("%llu split comparisons over %llu squarefree q <= %llu",
                           (unsigned long long)c.comparisons, (unsigned long long)c.moduli,
                           (unsigned long long)max_q));
  check(r, "max |crt - direct|", c.max_deviation, 1e-8);
  check(r, "max |crt - direct| - err", c.max_excess, 0.0);
}

void run_completion(LemmaReport& r, bool full, unsigned jobs) {
  const u64 max_q = full ? 500 : 300;
  const CompletionStats c = completion_grid(max_q, 20, jobs);
  r.notes.push_back(format("%llu (a, q, I) checks, q <= %llu, 20 intervals per q",
                           (unsigned long long)c.checks, (unsigned long long)max_q));
  check(r, "max completion deviation", c.max_deviation, 1e-8);
  check(r, "max deviation - err", c.max_excess, 0.0);
  check(r, "max Parseval relative error", c.max_parseval_rel, 1e-9);
}

void run_vanishing(LemmaReport& r, bool full) {
  const std::vector<u64> primes =
      full ? std::vector<u64>{3, 5, 7, 11, 13, 17, 19, 23} : std::vector<u64>{3, 5, 7, 11, 13};
  const unsigned max_l = full ? 4 : 3;
  u64 bad = 0, vectors = 0;
  for (const auto& cell : vanishing_grid(primes, max_l)) {
    bad += cell.counterexamples;
    vectors += cell.vectors;
  }
  std::string plist;
  for (u64 p : primes) plist += (plist.empty() ? "" : ",") + std::to_string(p);
  r.notes.push_back(format("%llu counterexamples, p in {%s}, l <= %u (%llu vectors)",
                           (unsigned long long)bad, plist.c_str(), max_l,
                           (unsigned long long)vectors));
  check(r, "counterexamples", static_cast<double>(bad), 0.0);
}

void run_product_sums(LemmaReport& r, bool full, unsigned jobs) {
  const u64 max_p = full ? 401 : 199;
  const OrthogonalityStats o = orthogonality_grid(max_p, jobs);
  r.notes.push_back(format("orthogonality: %llu (a, p) cells, p <= %llu",
                           (unsigned long long)o.cells, (unsigned long long)max_p));
  check(r, "max |sum_k S(a,k;p)| / p", o.max_first_rel, 1e-6);
  check(r, "max rel error of sum_k S(a,k;p)^2 vs p^2 - p", o.max_second_rel, 1e-6);

  const CompleteExpStats c = completeexp_grid(max_p, jobs);
  const auto& pins = full ? pinned::kCompleteExpFull : pinned::kCompleteExpSmall;
  r.notes.push_back(format("complete sums: %llu cells, p <= %llu, j <= 3",
                           (unsigned long long)c.cells, (unsigned long long)max_p));
  for (unsigned j = 0; j <= kMaxShiftCount; ++j) {
    check(r, format("generic j=%u max |sum|/p^((j+1)/2)", j), c.generic_max[j], pins[j]);
    if (c.even_cells[j] > 0) {
      check(r, format("even j=%u max |sum|/p^((j+2)/2)", j), c.even_max[j],
            std::ldexp(1.0, static_cast<int>(j)) + 1e-12);
    }
  }
  check(r, "even case |sum| - 2^j p^((j+2)/2) - err", c.max_cap_excess, 0.0);

  const u64 max_q = full ? 330 : 210;
  const SquarefreeProductStats s = squarefree_product_grid(max_q, jobs);
  r.notes.push_back(format("squarefree CRT route: %llu cells, q <= %llu",
                           (unsigned long long)s.cells, (unsigned long long)max_q));
  check(r, "max |crt - direct| - err", s.max_excess, 0.0);
}

void run_onediff(LemmaReport& r, bool full, unsigned jobs) {
  const u64 max_product = full ? 420 : 210;
  const u64 max_k = full ? 60 : 30;
  const OneDiffStats o = onediff_grid(max_product, max_k, jobs);
  r.notes.push_back(format("%llu cells, q0 q1 <= %llu, K <= %llu", (unsigned long long)o.cells,
                           (unsigned long long)max_product, (unsigned long long)max_k));
  check(r, "max |T|^2 / rhs", o.max_ratio, full ? pinned::kOneDiffFull : pinned::kOneDiffSmall);
  check(r, "max |T(h) - inner(h)| - err", o.max_consistency, 0.0);
}

}  // namespace

LemmaReport run_lemma_suite(std::string_view suite, SuiteSize size, unsigned jobs) {
  LemmaReport report;
  report.suite = std::string(suite);
  report.size = size;
  const bool full = size == SuiteSize::kFull;
  if (suite == "weil") {
    run_weil(report, full, jobs);
  } else if (suite == "completion") {
    run_completion(report, full, jobs);
  } else if (suite == "vanishing") {
    run_vanishing(report, full);
  } else if (suite == "product-sums") {
    run_product_sums(report, full, jobs);
  } else if (suite == "onediff") {
    run_onediff(report, full, jobs);
  } else {
    fail(ErrorCode::kDomain, "unknown lemma suite '" + std::string(suite) + "'");
  }
  return report;
}

std::string render_lemma_report(const LemmaReport& report) {
  std::string out;
  for (const auto& note : report.notes) out += note + "\n";
  for (const auto& line : report.lines) {
    out += format("%-48s %.6g (limit %.6g) %s\n", line.name.c_str(), line.value, line.limit,
                  line.ok ? "ok" : "FAIL");
  }
  out += format("suite %s %s: %s\n", report.suite.c_str(),
                report.size == SuiteSize::kFull ? "full" : "small",
                report.passed ? "PASS" : "FAIL");
  return out;
}

}  // namespace kloostlab
