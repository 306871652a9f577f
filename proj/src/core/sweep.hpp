#pragma once

// Grid sweeps of E(x, q, a) against the divisor bound, with deterministic
// CSV/JSON reports and a re-verification pass over saved reports.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "bounds_opt.hpp"
#include "rational.hpp"

namespace kloostlab {

inline constexpr int kReportSchema = 1;

enum class ReportFormat { kCsv, kJson };

struct SmoothSource {
  double lo_exp;  // q >= x^lo_exp
  double hi_exp;  // q <= x^hi_exp
};

struct SweepConfig {
  std::vector<u64> x_values;
  std::vector<u64> q_values;          // explicit moduli, used when smooth is empty
  std::optional<SmoothSource> smooth;  // x^eta-smooth squarefree q per x
  std::optional<u64> residue_sample;  // nullopt: every residue coprime to q
  double delta = 0.05;
  double eps = 0.0;
  double eta = 0.25;
  u64 seed = 1;
  ReportFormat format = ReportFormat::kCsv;
  std::string out;
  unsigned jobs = 1;
  bool timing = false;  // fill runtime_ms; breaks byte-reproducibility
};

// Parses the JSON form; unknown keys are rejected. Throws ParseError or
// DomainError.
SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const SweepConfig& config);
void validate(const SweepConfig& config);

struct SweepRow {
  u64 x = 0;
  u64 q = 0;
  u64 a = 0;
  std::optional<Rational> e_exact;
  double abs_e = 0;
  double qe_over_x = 0;
  std::optional<double> bound_total;      // eps = 0
  std::optional<double> bound_total_eps;  // requested eps
  std::optional<double> ratio;
  std::optional<std::array<u64, 4>> split;
  std::array<double, 4> targets{};
  std::optional<double> runtime_ms;
  std::string error;
};

struct SweepSummary {
  u64 rows = 0;
  u64 cells = 0;
  u64 error_rows = 0;
  u64 infeasible_cells = 0;
  double max_ratio = 0;
  std::optional<ExponentFit> fit;  // max_a q|E|/x against x
  std::vector<std::pair<u64, double>> per_x_max;
  std::optional<Rational> sum_e;  // nullopt if the exact sum overflows
  u64 full_residue_cells = 0;
  u64 zero_sum_cells = 0;  // full-residue cells whose E values sum to 0
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

SweepResult run_sweep(const SweepConfig& config);

std::string render_csv(const SweepResult& result);
std::string render_json(const SweepResult& result);
std::string render_report(const SweepResult& result);
std::string render_summary_line(const SweepSummary& summary);

struct VerifyResult {
  u64 rows = 0;
  u64 checked = 0;
  u64 mismatches = 0;
  std::string first_mismatch;
};

// Re-reads a CSV or JSON report and recomputes E for a seeded 1% of its rows
// (at least one) by the hyperbola method.
VerifyResult verify_report(const std::string& text, u64 seed, double fraction = 0.01);

}  // namespace kloostlab
