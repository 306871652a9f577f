// Command-line front end over the kloostlab C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kloostlab/kloostlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

void check(kl_status status) {
  if (status != KL_OK) throw Failure{kExitUsage, kl_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  kl_free_string(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "IoError: cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kExitUsage, "IoError: cannot write " + path};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_prime_modulus(uint64_t q) {
  kl_factored* f = nullptr;
  check(kl_factorize(q, &f));
  uint64_t p = 0;
  unsigned e = 0;
  const bool prime = kl_factored_count(f) == 1 && kl_factored_get(f, 0, &p, &e) == KL_OK && e == 1;
  kl_factored_free(f);
  return prime;
}

void print_sum(const char* label, const kl_sum& s) {
  std::printf("%s = %.12f\nim = %.3g\nerr = %.3g\n", label, s.re, s.im + 0.0, s.err);
}

// --- subcommand bodies ---

struct KloostermanArgs {
  int64_t a = 0, b = 0;
  uint64_t q = 0;
  std::vector<int64_t> interval;
  bool direct = false;
};

int run_kloosterman(const KloostermanArgs& args) {
  if (!args.interval.empty()) {
    if (args.b != 0) throw Failure{kExitUsage, "DomainError: an incomplete sum takes b = 0"};
    if (args.interval[1] < 0) throw Failure{kExitUsage, "DomainError: interval length must be >= 0"};
    kl_sum s;
    const kl_interval iv{args.interval[0], static_cast<uint64_t>(args.interval[1])};
    check(kl_incomplete_kloosterman(args.a, args.q, iv, &s));
    char label[128];
    std::snprintf(label, sizeof label, "S_I(%lld;%llu) over [%lld,%lld)", (long long)args.a,
                  (unsigned long long)args.q, (long long)iv.offset,
                  (long long)(iv.offset + (int64_t)iv.length));
    print_sum(label, s);
    return kExitOk;
  }
  kl_sum s;
  check(kl_complete_kloosterman(args.a, args.b, args.q, args.direct ? 1 : 0, &s));
  char label[96];
  std::snprintf(label, sizeof label, "S(%lld,%lld;%llu)", (long long)args.a, (long long)args.b,
                (unsigned long long)args.q);
  print_sum(label, s);
  if (args.q >= 2 && is_prime_modulus(args.q)) {
    const double p = static_cast<double>(args.q);
    std::printf("weil_ratio = %.6f\n", std::hypot(s.re, s.im) / (2 * std::sqrt(p)));
  }
  return kExitOk;
}

struct QueryArgs {
  uint64_t x = 0, q = 0;
  int64_t a = 0;
  std::string method = "hyperbola";
};

int method_code(const std::string& m) { return m == "sieve" ? 1 : 0; }

int run_divisor(const QueryArgs& args) {
  std::vector<std::string> methods;
  if (args.method == "both") {
    methods = {"hyperbola", "sieve"};
  } else {
    methods = {args.method};
  }
  std::optional<uint64_t> first;
  for (const auto& m : methods) {
    uint64_t d = 0;
    check(kl_divisor_sum_ap(args.x, args.q, args.a, method_code(m), &d));
    std::printf("D(%llu,%llu,%lld) = %llu [%s]\n", (unsigned long long)args.x,
                (unsigned long long)args.q, (long long)args.a, (unsigned long long)d, m.c_str());
    if (first && *first != d) {
      std::printf("methods disagree\n");
      return kExitAssertion;
    }
    first = d;
  }
  char* exact = nullptr;
  double value = 0;
  check(kl_divisor_main_term(args.x, args.q, &exact, &value));
  std::printf("D(%llu,%llu) = %s (%s)\n", (unsigned long long)args.x, (unsigned long long)args.q,
              take(exact).c_str(), num(value).c_str());
  return kExitOk;
}

int run_error_term(const QueryArgs& args) {
  char* exact = nullptr;
  double value = 0;
  check(kl_error_term(args.x, args.q, args.a, method_code(args.method), &exact, &value));
  std::printf("E(%llu,%llu,%lld) = %s (%s)\n", (unsigned long long)args.x,
              (unsigned long long)args.q, (long long)args.a, take(exact).c_str(), num(value).c_str());
  return kExitOk;
}

struct TargetArgs {
  uint64_t x = 0, q = 0;
  std::optional<double> eta, varpi;
};

void print_windows(uint64_t x, uint64_t q, double eta, double lo[4], double hi[4]) {
  check(kl_target_windows(x, q, eta, lo, hi));
  for (int j = 0; j < 4; ++j) std::printf("window q%d = [%s, %s]\n", j, num(lo[j]).c_str(), num(hi[j]).c_str());
}

int run_targets(const TargetArgs& args) {
  if (args.x > 0 || args.q > 0) {
    if (args.x == 0 || args.q == 0) throw Failure{kExitUsage, "DomainError: targets need both --x and --q"};
    double t[4];
    check(kl_target_sizes(args.x, args.q, t));
    for (int j = 0; j < 4; ++j) std::printf("Q%d = %s\n", j, num(t[j]).c_str());
    std::printf("product = %s\n", num(t[0] * t[1] * t[2] * t[3]).c_str());
    if (args.eta) {
      double lo[4], hi[4];
      print_windows(args.x, args.q, *args.eta, lo, hi);
    }
  }
  if (args.varpi) {
    if (!args.eta) throw Failure{kExitUsage, "DomainError: admissibility needs --eta"};
    int ok = 0;
    check(kl_admissible(*args.varpi, *args.eta, &ok));
    std::printf("admissible(%s, %s) = %s\n", num(*args.varpi).c_str(), num(*args.eta).c_str(),
                ok ? "true" : "false");
  }
  if (args.x == 0 && args.q == 0 && !args.varpi) {
    throw Failure{kExitUsage, "DomainError: give --x and --q, or --varpi and --eta"};
  }
  return kExitOk;
}

struct FactorArgs {
  uint64_t q = 0, x = 0;
  std::optional<double> eta;
  std::vector<double> windows;
};

int run_factorize(const FactorArgs& args) {
  kl_factored* f = nullptr;
  check(kl_factorize(args.q, &f));
  std::string text;
  for (size_t i = 0; i < kl_factored_count(f); ++i) {
    uint64_t p = 0;
    unsigned e = 0;
    kl_factored_get(f, i, &p, &e);
    if (!text.empty()) text += " * ";
    text += std::to_string(p) + (e > 1 ? "^" + std::to_string(e) : "");
  }
  const bool squarefree = kl_factored_squarefree(f) != 0;
  kl_factored_free(f);
  std::printf("%llu = %s\nsquarefree = %s\n", (unsigned long long)args.q,
              text.empty() ? "1" : text.c_str(), squarefree ? "true" : "false");

  double lo[4], hi[4];
  if (!args.windows.empty()) {
    if (args.windows.size() != 8) throw Failure{kExitUsage, "DomainError: --windows takes 8 numbers"};
    for (int j = 0; j < 4; ++j) {
      lo[j] = args.windows[2 * j];
      hi[j] = args.windows[2 * j + 1];
    }
  } else if (args.eta) {
    if (args.x == 0) throw Failure{kExitUsage, "DomainError: window factorization needs --x"};
    print_windows(args.x, args.q, *args.eta, lo, hi);
  } else {
    return kExitOk;
  }
  uint64_t parts[4] = {0, 0, 0, 0};
  int feasible = 0;
  check(kl_factorize_to_windows(args.q, lo, hi, parts, &feasible));
  if (feasible) {
    std::printf("split = %llu %llu %llu %llu\n", (unsigned long long)parts[0],
                (unsigned long long)parts[1], (unsigned long long)parts[2], (unsigned long long)parts[3]);
  } else {
    std::printf("split = Infeasible\n");
  }
  return kExitOk;
}

struct BoundArgs {
  std::string kind;
  uint64_t x = 0, n = 0;
  std::vector<uint64_t> split;
  double delta = 0.05, eps = 0.0;
  std::optional<int64_t> a;
  std::optional<int64_t> m;
};

int run_bound(const BoundArgs& args) {
  kl_bound_report* report = nullptr;
  if (args.split.empty()) throw Failure{kExitUsage, "DomainError: --split is required"};
  uint64_t q = 1;
  for (uint64_t part : args.split) q *= part;
  double computed = 0;
  if (args.kind == "short") {
    if (args.a) {
      kl_sum s;
      check(kl_incomplete_kloosterman(*args.a, q, kl_interval{args.m.value_or(0), args.n}, &s));
      computed = std::hypot(s.re, s.im);
    }
    check(kl_shortkloost_rhs(args.n, args.split.data(), args.split.size(), args.eps, computed, &report));
  } else {
    if (args.split.size() != 4) throw Failure{kExitUsage, "DomainError: the divisor bound needs 4 parts"};
    if (args.a) {
      char* exact = nullptr;
      check(kl_error_term(args.x, q, *args.a, 0, &exact, &computed));
      std::printf("E = %s\n", take(exact).c_str());
      computed = std::abs(computed);
    }
    check(kl_divisorthm_rhs(args.x, args.split.data(), args.delta, args.eps, computed, &report));
  }
  for (size_t i = 0; i < kl_bound_term_count(report); ++i) {
    const char* name = nullptr;
    double raw = 0, weight = 0, value = 0;
    kl_bound_term(report, i, &name, &raw, &weight, &value);
    std::printf("term %-8s raw = %s weight = %s value = %s\n", name, num(raw).c_str(),
                num(weight).c_str(), num(value).c_str());
  }
  std::printf("bound_total = %s\nbound_total_eps0 = %s\n", num(kl_bound_total(report)).c_str(),
              num(kl_bound_total_eps0(report)).c_str());
  if (args.a) {
    std::printf("computed = %s\nratio = %s\nratio_eps0 = %s\n", num(computed).c_str(),
                num(kl_bound_ratio(report)).c_str(), num(kl_bound_ratio_eps0(report)).c_str());
  }
  kl_bound_report_free(report);
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::vector<uint64_t> x, q;
  std::optional<double> delta, eps, eta;
  std::optional<uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> format, out, residues;
  bool timing = false;
};

int run_sweep(const SweepArgs& args) {
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  if (!args.config.empty()) {
    try {
      cfg = nlohmann::ordered_json::parse(read_file(args.config));
    } catch (const nlohmann::json::exception& e) {
      throw Failure{kExitUsage, std::string("ParseError: ") + e.what()};
    }
    if (!cfg.is_object()) throw Failure{kExitUsage, "ParseError: config must be a JSON object"};
  }
  if (!args.x.empty()) cfg["x_values"] = args.x;
  if (!args.q.empty()) {
    cfg["q_values"] = args.q;
    cfg.erase("smooth");
  }
  if (args.delta) cfg["delta"] = *args.delta;
  if (args.eps) cfg["eps"] = *args.eps;
  if (args.eta) cfg["eta"] = *args.eta;
  if (args.seed) cfg["seed"] = *args.seed;
  if (args.jobs) cfg["jobs"] = *args.jobs;
  if (args.format) cfg["format"] = *args.format;
  if (args.out) cfg["out"] = *args.out;
  if (args.timing) cfg["timing"] = true;
  if (args.residues) {
    if (*args.residues == "all") {
      cfg["residues"] = "all";
    } else {
      try {
        cfg["residues"] = {{"sample", std::stoull(*args.residues)}};
      } catch (const std::exception&) {
        throw Failure{kExitUsage, "ParseError: --residues takes 'all' or a count"};
      }
    }
  }
  kl_sweep_config* config = nullptr;
  check(kl_sweep_config_from_json(cfg.dump().c_str(), &config));
  kl_sweep_result* result = nullptr;
  const kl_status status = kl_sweep_run(config, &result);
  kl_sweep_config_free(config);
  check(status);
  char* text = nullptr;
  char* summary = nullptr;
  check(kl_sweep_render(result, &text));
  check(kl_sweep_summary_line(result, &summary));
  kl_sweep_result_free(result);
  const std::string report = take(text), line = take(summary);
  const std::string out = cfg.contains("out") ? cfg["out"].get<std::string>() : "";
  if (out.empty()) {
    std::fwrite(report.data(), 1, report.size(), stdout);
    std::fprintf(stderr, "%s\n", line.c_str());
  } else {
    write_file(out, report);
    std::printf("%s\nwrote %s\n", line.c_str(), out.c_str());
  }
  return kExitOk;
}

int run_lemma_suite(const std::string& suite, const std::string& size, unsigned jobs) {
  kl_lemma_report* report = nullptr;
  check(kl_lemma_suite_run(suite.c_str(), size == "full" ? 1 : 0, jobs, &report));
  char* text = nullptr;
  kl_lemma_report_render(report, &text);
  std::fputs(take(text).c_str(), stdout);
  const bool passed = kl_lemma_report_passed(report) != 0;
  kl_lemma_report_free(report);
  return passed ? kExitOk : kExitAssertion;
}

int run_verify(const std::string& path, uint64_t seed) {
  const std::string text = read_file(path);
  uint64_t rows = 0, checked = 0, mismatches = 0;
  char* first = nullptr;
  check(kl_verify_report(text.c_str(), seed, &rows, &checked, &mismatches, &first));
  const std::string first_text = take(first);
  std::printf("rows=%llu checked=%llu mismatches=%llu\n", (unsigned long long)rows,
              (unsigned long long)checked, (unsigned long long)mismatches);
  if (mismatches > 0) {
    std::printf("first mismatch: %s\n", first_text.c_str());
    return kExitAssertion;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kloostlab: Kloosterman sums and the divisor function in progressions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kl_version()));

  KloostermanArgs kl;
  auto* cmd_kl = app.add_subcommand("kloosterman", "complete or incomplete Kloosterman sum");
  cmd_kl->add_option("a", kl.a, "a")->required();
  cmd_kl->add_option("b", kl.b, "b")->required();
  cmd_kl->add_option("q", kl.q, "modulus")->required();
  cmd_kl->add_option("--interval", kl.interval, "sum over [M, M+N) instead")->expected(2);
  cmd_kl->add_flag("--direct", kl.direct, "sum every unit directly instead of the CRT route");

  QueryArgs div;
  auto* cmd_div = app.add_subcommand("divisor", "D(x,q,a) and D(x,q)");
  cmd_div->add_option("--x", div.x)->required();
  cmd_div->add_option("--q", div.q)->required();
  cmd_div->add_option("--a", div.a)->required();
  cmd_div->add_option("--method", div.method)->check(CLI::IsMember({"hyperbola", "sieve", "both"}));

  QueryArgs err;
  auto* cmd_err = app.add_subcommand("error-term", "E(x,q,a) = D(x,q,a) - D(x,q)");
  cmd_err->add_option("--x", err.x)->required();
  cmd_err->add_option("--q", err.q)->required();
  cmd_err->add_option("--a", err.a)->required();
  cmd_err->add_option("--method", err.method)->check(CLI::IsMember({"hyperbola", "sieve"}));

  TargetArgs tg;
  auto* cmd_tg = app.add_subcommand("targets", "target sizes, windows and admissibility");
  cmd_tg->add_option("--x", tg.x);
  cmd_tg->add_option("--q", tg.q);
  cmd_tg->add_option("--eta", tg.eta);
  cmd_tg->add_option("--varpi", tg.varpi);

  FactorArgs fa;
  auto* cmd_fa = app.add_subcommand("factorize", "prime factorization and window split");
  cmd_fa->add_option("--q", fa.q)->required();
  cmd_fa->add_option("--x", fa.x);
  cmd_fa->add_option("--eta", fa.eta);
  cmd_fa->add_option("--windows", fa.windows, "lo0 hi0 lo1 hi1 lo2 hi2 lo3 hi3")->expected(8);

  BoundArgs bd;
  auto* cmd_bd = app.add_subcommand("bound", "evaluate a bound expression");
  cmd_bd->add_option("kind", bd.kind, "short | divisor")->required()->check(CLI::IsMember({"short", "divisor"}));
  cmd_bd->add_option("--split", bd.split, "q0,q1,...")->delimiter(',')->required();
  cmd_bd->add_option("--n", bd.n, "interval length (short)");
  cmd_bd->add_option("--m", bd.m, "interval offset (short)");
  cmd_bd->add_option("--x", bd.x, "sum limit (divisor)");
  cmd_bd->add_option("--delta", bd.delta);
  cmd_bd->add_option("--eps", bd.eps);
  cmd_bd->add_option("--a", bd.a, "also compute the sum at this residue");

  SweepArgs sw;
  auto* cmd_sw = app.add_subcommand("sweep", "grid sweep of E(x,q,a) against the bound");
  cmd_sw->add_option("--config", sw.config, "JSON config file")->check(CLI::ExistingFile);
  cmd_sw->add_option("--x", sw.x)->delimiter(',');
  cmd_sw->add_option("--q", sw.q)->delimiter(',');
  cmd_sw->add_option("--delta", sw.delta);
  cmd_sw->add_option("--eps", sw.eps);
  cmd_sw->add_option("--eta", sw.eta);
  cmd_sw->add_option("--seed", sw.seed);
  cmd_sw->add_option("--jobs", sw.jobs);
  cmd_sw->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}));
  cmd_sw->add_option("--out", sw.out);
  cmd_sw->add_option("--residues", sw.residues, "all | sample size");
  cmd_sw->add_flag("--timing", sw.timing, "fill runtime_ms (output no longer reproducible)");

  std::string suite, size = "small";
  unsigned suite_jobs = 1;
  auto* cmd_ls = app.add_subcommand("lemma-suite", "run a lemma check grid");
  cmd_ls->add_option("suite", suite)->required()->check(
      CLI::IsMember({"weil", "completion", "vanishing", "product-sums", "onediff"}));
  cmd_ls->add_option("size,--size", size, "small | full")->check(CLI::IsMember({"small", "full"}));
  cmd_ls->add_option("--jobs", suite_jobs)->check(CLI::PositiveNumber);

  std::string report_path;
  uint64_t verify_seed = 1;
  auto* cmd_vr = app.add_subcommand("verify-report", "recompute a seeded 1% of a report's rows");
  cmd_vr->add_option("report", report_path)->required()->check(CLI::ExistingFile);
  cmd_vr->add_option("--seed", verify_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_kl) return run_kloosterman(kl);
    if (*cmd_div) return run_divisor(div);
    if (*cmd_err) return run_error_term(err);
    if (*cmd_tg) return run_targets(tg);
    if (*cmd_fa) return run_factorize(fa);
    if (*cmd_bd) return run_bound(bd);
    if (*cmd_sw) return run_sweep(sw);
    if (*cmd_ls) return run_lemma_suite(suite, size, suite_jobs);
    if (*cmd_vr) return run_verify(report_path, verify_seed);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  }
  return kExitUsage;
}
