#include "bounds_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace kloostlab {

namespace {

double dpow(double base, double exponent) { return std::pow(base, exponent); }

void finish_report(BoundReport& report, double eps0_total) {
  report.bound_total = 0;
  for (const auto& t : report.terms) report.bound_total += t.value;
  report.bound_total_eps0 = eps0_total;
  report.ratio = report.bound_total > 0 ? report.computed / report.bound_total : 0;
  report.ratio_eps0 = eps0_total > 0 ? report.computed / eps0_total : 0;
}

std::vector<u64> parts_vector(const ModulusSplit& split) {
  return {split.parts().begin(), split.parts().end()};
}

struct Candidate {
  std::array<u64, 4> parts;
  double objective;
};

class WindowSearch {
 public:
  WindowSearch(std::vector<u64> primes, const WindowSpec& windows, u64 q)
      : primes_(std::move(primes)), windows_(windows) {
    for (std::size_t j = 0; j < 4; ++j) {
      centre_[j] = 0.5 * (std::log(windows.parts[j].lo) + std::log(windows.parts[j].hi));
    }
    log_q_ = std::log(static_cast<double>(q));
    // Whatever the assignment, sum_j (log q_j - c_j) is fixed.
    global_lb_ = std::abs(log_q_ - std::accumulate(centre_.begin(), centre_.end(), 0.0));
  }

  void exhaustive() {
    const std::size_t k = primes_.size();
    const u64 total = u64{1} << (2 * k);
    for (u64 code = 0; code < total; ++code) {
      std::array<u64, 4> parts{1, 1, 1, 1};
      u64 c = code;
      for (std::size_t i = 0; i < k; ++i, c >>= 2) parts[c & 3] *= primes_[i];
      consider(parts);
    }
  }

  void branch_and_bound() {
    std::sort(primes_.begin(), primes_.end(), std::greater<>());
    suffix_log_.assign(primes_.size() + 1, 0.0);
    suffix_product_.assign(primes_.size() + 1, 1);
    for (std::size_t i = primes_.size(); i-- > 0;) {
      suffix_log_[i] = suffix_log_[i + 1] + std::log(static_cast<double>(primes_[i]));
      suffix_product_[i] = suffix_product_[i + 1] * primes_[i];
    }
    std::array<u64, 4> parts{1, 1, 1, 1};
    descend(0, parts);
  }

  std::optional<std::array<u64, 4>> best() const {
    if (candidates_.empty()) return std::nullopt;
    double minimum = candidates_.front().objective;
    for (const auto& c : candidates_) minimum = std::min(minimum, c.objective);
    std::optional<std::array<u64, 4>> chosen;
    for (const auto& c : candidates_) {
      if (c.objective > minimum + kObjectiveTieTolerance) continue;
      if (!chosen || c.parts < *chosen) chosen = c.parts;
    }
    return chosen;
  }

 private:
  void consider(const std::array<u64, 4>& parts) {
    if (!windows_contain(windows_, parts)) return;
    const double objective = window_objective(parts, windows_);
    if (objective > best_objective_ + kObjectiveTieTolerance) return;
    best_objective_ = std::min(best_objective_, objective);
    candidates_.push_back({parts, objective});
  }

  void descend(std::size_t index, std::array<u64, 4>& parts) {
    if (index == primes_.size()) {
      consider(parts);
      return;
    }
    const u64 remaining = suffix_product_[index];
    double deficit = 0, excess = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double part = static_cast<double>(parts[j]);
      if (part > windows_.parts[j].hi) return;
      if (static_cast<double>(static_cast<u128>(parts[j]) * remaining) < windows_.parts[j].lo) return;
      const double log_part = std::log(part);
      deficit += std::max(0.0, std::log(windows_.parts[j].lo) - log_part);
      excess += std::max(0.0, log_part - centre_[j]);
    }
    // Deficits must be filled by disjoint sets of the remaining primes.
    if (deficit > suffix_log_[index] + 1e-9) return;
    const double lower_bound = std::max(global_lb_, excess);
    if (lower_bound > best_objective_ + kObjectiveTieTolerance + 1e-9) return;
    for (std::size_t j = 0; j < 4; ++j) {
      parts[j] *= primes_[index];
      descend(index + 1, parts);
      parts[j] /= primes_[index];
    }
  }

  std::vector<u64> primes_;
  WindowSpec windows_;
  std::array<double, 4> centre_{};
  double log_q_ = 0;
  double global_lb_ = 0;
  std::vector<double> suffix_log_;
  std::vector<u64> suffix_product_;
  double best_objective_ = HUGE_VAL;
  std::vector<Candidate> candidates_;
};

}  // namespace

BoundReport shortkloost_rhs(u64 n, const ModulusSplit& split, double eps, double computed) {
  const std::size_t l = split.l();
  require(l >= 1, ErrorCode::kDomain, "the Kloosterman bound needs l >= 1");
  const u64 q = split.modulus();
  require(n >= 1, ErrorCode::kDomain, "interval length must be positive");
  require(n <= q, ErrorCode::kDomain, "interval length exceeds the modulus");
  require(eps >= 0, ErrorCode::kDomain, "eps must be non-negative");

  BoundReport report;
  report.computed = computed;
  report.params = {0, n, q, parts_vector(split), 0, eps};
  const double nd = static_cast<double>(n), qd = static_cast<double>(q);
  const double q0 = static_cast<double>(split.part(0));
  const double weight = dpow(qd, eps);
  double eps0 = 0;
  auto add = [&](std::string name, double raw) {
    eps0 += raw;
    report.terms.push_back({std::move(name), raw, weight, raw * weight});
  };
  for (std::size_t j = 1; j <= l; ++j) {
    const double w = std::ldexp(1.0, -static_cast<int>(j));
    const double qj = static_cast<double>(split.part(l - j + 1));
    add("sum_j" + std::to_string(j), dpow(nd, w) * dpow(qd, 0.5 - w) * dpow(qj, w));
  }
  const double wl = std::ldexp(1.0, -static_cast<int>(l));
  add("q0_mid", dpow(nd, wl) * dpow(qd, 0.5 - wl) * dpow(q0, wl / 2));
  add("q0_tail", dpow(qd, 0.5) * dpow(q0, -wl / 2));
  finish_report(report, eps0);
  return report;
}

BoundReport divisorthm_rhs(u64 x, const ModulusSplit& split, double delta, double eps,
                           double computed) {
  require(split.parts().size() == 4, ErrorCode::kDomain, "expected the split q0 q1 q2 q3");
  require(delta > 0 && delta < 1.0 / 12, ErrorCode::kDomain, "delta must lie in (0, 1/12)");
  require(eps >= 0, ErrorCode::kDomain, "eps must be non-negative");
  const u64 q = split.modulus();
  require(x >= q, ErrorCode::kDomain, "the bound needs x >= q");

  BoundReport report;
  report.computed = computed;
  report.params = {x, 0, q, parts_vector(split), delta, eps};
  const double xd = static_cast<double>(x), qd = static_cast<double>(q);
  const double q0 = static_cast<double>(split.part(0));

  const double lead_raw = dpow(xd, 1 - delta) / qd;
  report.terms.push_back({"lead", lead_raw, dpow(xd, eps), lead_raw * dpow(xd, eps)});
  const double bracket_weight = dpow(xd, 2 * delta + eps);
  double bracket_eps0 = 0;
  auto add = [&](std::string name, double raw) {
    bracket_eps0 += raw;
    report.terms.push_back({std::move(name), raw, bracket_weight, raw * bracket_weight});
  };
  for (int j = 1; j <= 3; ++j) {
    const double w = std::ldexp(1.0, -j);
    const double qj = static_cast<double>(split.part(static_cast<std::size_t>(4 - j)));
    add("sum_j" + std::to_string(j), dpow(xd, w / 2) * dpow(qd, 0.5 - w) * dpow(qj, w));
  }
  add("q0_mid", dpow(xd, 1.0 / 16) * dpow(qd, 3.0 / 8) * dpow(q0, 1.0 / 16));
  add("q0_tail", dpow(qd, 0.5) * dpow(q0, -1.0 / 16));
  finish_report(report, lead_raw + dpow(xd, 2 * delta) * bracket_eps0);
  return report;
}

TargetSizes target_sizes(u64 x, u64 q) {
  require(x >= 1 && q >= 1, ErrorCode::kDomain, "x and q must be positive");
  const double lx = std::log(static_cast<double>(x)), lq = std::log(static_cast<double>(q));
  return {{std::exp(-2.0 / 15 * lq + lx / 3), std::exp(-1.0 / 15 * lq + lx / 6),
           std::exp(7.0 / 15 * lq - lx / 6), std::exp(11.0 / 15 * lq - lx / 3)}};
}

bool admissible(double varpi, double eta) {
  require(varpi >= 0 && eta >= 0, ErrorCode::kDomain, "varpi and eta must be non-negative");
  // Both products are exact in the 64-bit long double mantissa; TwoSum
  // recovers the rounding of their sum, so the comparison is exact.
  static_assert(std::numeric_limits<long double>::digits >= 64);
  const long double a = 246.0L * varpi, b = 18.0L * eta;
  const long double s = a + b;
  const long double bb = s - a;
  const long double err = (a - (s - bb)) + (b - bb);
  return s < 1 || (s == 1 && err < 0);
}

bool admissible(const Rational& varpi, const Rational& eta) {
  require(!(varpi < Rational(0)) && !(eta < Rational(0)), ErrorCode::kDomain,
          "varpi and eta must be non-negative");
  const Rational lhs = Rational(varpi.num() * 246, varpi.den()) + Rational(eta.num() * 18, eta.den());
  return lhs < Rational(1);
}

WindowSpec make_window_spec(std::array<Window, 4> parts) {
  for (const auto& w : parts) {
    require(w.lo > 0 && w.lo <= w.hi, ErrorCode::kDomain, "windows need 0 < lo <= hi");
  }
  return WindowSpec{parts};
}

WindowSpec target_windows(u64 x, u64 q, double eta) {
  require(eta > 0, ErrorCode::kDomain, "eta must be positive");
  const TargetSizes t = target_sizes(x, q);
  const double xd = static_cast<double>(x);
  auto window = [&](double target, double down, double up) {
    return Window{target * dpow(xd, -down * eta), target * dpow(xd, up * eta)};
  };
  return make_window_spec({window(t.q[0], 7.0 / 5, 8.0 / 5), window(t.q[1], 1.0 / 5, 4.0 / 5),
                           window(t.q[2], 3.0 / 5, 2.0 / 5), window(t.q[3], 4.0 / 5, 1.0 / 5)});
}

bool windows_contain(const WindowSpec& windows, std::span<const u64> parts) {
  if (parts.size() != 4) return false;
  for (std::size_t j = 0; j < 4; ++j) {
    if (!windows.parts[j].contains(static_cast<double>(parts[j]))) return false;
  }
  return true;
}

double window_objective(std::span<const u64> parts, const WindowSpec& windows) {
  double total = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    const double centre = 0.5 * (std::log(windows.parts[j].lo) + std::log(windows.parts[j].hi));
    total += std::abs(std::log(static_cast<double>(parts[j])) - centre);
  }
  return total;
}

std::optional<ModulusSplit> factorize_to_windows(const FactoredInteger& q,
                                                 const WindowSpec& windows,
                                                 SearchStrategy strategy) {
  if (!q.squarefree()) fail(ErrorCode::kNotSquarefree, "window factorization needs squarefree q");
  WindowSearch search(q.primes(), windows, q.value());
  const bool exhaustive = strategy == SearchStrategy::kExhaustive ||
                          (strategy == SearchStrategy::kAuto && q.omega() <= 12);
  if (exhaustive) {
    require(q.omega() <= 16, ErrorCode::kDomain, "too many primes for exhaustive search");
    search.exhaustive();
  } else {
    search.branch_and_bound();
  }
  const auto parts = search.best();
  if (!parts) return std::nullopt;
  return ModulusSplit({(*parts)[0], (*parts)[1], (*parts)[2], (*parts)[3]});
}

ExponentFit exponent_fit(std::span<const std::pair<double, double>> points) {
  require(points.size() >= 2, ErrorCode::kDomain, "need at least two points");
  double sx = 0, sy = 0;
  for (const auto& [scale, value] : points) {
    require(scale > 0 && value > 0, ErrorCode::kDomain, "scales and values must be positive");
    sx += std::log(scale);
    sy += std::log(value);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [scale, value] : points) {
    const double dx = std::log(scale) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(value) - my);
  }
  require(sxx > 0, ErrorCode::kDomain, "scales must be distinct");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (const auto& [scale, value] : points) {
    const double r = std::log(value) - (slope * std::log(scale) + intercept);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace kloostlab
