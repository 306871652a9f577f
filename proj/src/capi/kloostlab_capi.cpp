#include "kloostlab/kloostlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "arith.hpp"
#include "bounds_opt.hpp"
#include "divisor_ap.hpp"
#include "error.hpp"
#include "kloosterman.hpp"
#include "lemma_suites.hpp"
#include "sweep.hpp"
#include "vdc_lab.hpp"

using namespace kloostlab;

struct kl_factored {
  FactoredInteger value;
};
struct kl_bound_report {
  BoundReport value;
};
struct kl_sweep_config {
  SweepConfig value;
};
struct kl_sweep_result {
  SweepResult value;
};
struct kl_lemma_report {
  LemmaReport value;
};

namespace {

thread_local std::string last_error;

struct NullArgument {};

template <class T>
T* need(T* p) {
  if (p == nullptr) throw NullArgument{};
  return p;
}

kl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return KL_ERR_DOMAIN;
    case ErrorCode::kNotInvertible: return KL_ERR_NOT_INVERTIBLE;
    case ErrorCode::kNotCoprime: return KL_ERR_NOT_COPRIME;
    case ErrorCode::kNotSquarefree: return KL_ERR_NOT_SQUAREFREE;
    case ErrorCode::kInfeasible: return KL_ERR_INFEASIBLE;
    case ErrorCode::kParse: return KL_ERR_PARSE;
    case ErrorCode::kIo: return KL_ERR_IO;
  }
  return KL_ERR_INTERNAL;
}

template <class Fn>
kl_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return KL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const NullArgument&) {
    last_error = "NullArgument: a required pointer was null";
    return KL_ERR_NULL_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "InternalError: out of memory";
    return KL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = std::string("InternalError: ") + e.what();
    return KL_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

kl_sum to_c(const SumValue& v) { return {v.re, v.im, v.err}; }

IntegerInterval from_c(kl_interval i) { return {i.offset, i.length}; }

WindowSpec windows_from_c(const double lo[4], const double hi[4]) {
  need(lo);
  need(hi);
  return make_window_spec({Window{lo[0], hi[0]}, Window{lo[1], hi[1]}, Window{lo[2], hi[2]},
                           Window{lo[3], hi[3]}});
}

DivisorMethod method_from_c(int method) {
  require(method == 0 || method == 1, ErrorCode::kDomain, "method must be 0 (hyperbola) or 1 (sieve)");
  return method == 0 ? DivisorMethod::kHyperbola : DivisorMethod::kSieve;
}

}  // namespace

extern "C" {

const char* kl_version(void) { return "1.0.0"; }

const char* kl_status_name(kl_status status) {
  switch (status) {
    case KL_OK: return "OK";
    case KL_ERR_DOMAIN: return "DomainError";
    case KL_ERR_NOT_INVERTIBLE: return "NotInvertible";
    case KL_ERR_NOT_COPRIME: return "NotCoprime";
    case KL_ERR_NOT_SQUAREFREE: return "NotSquarefree";
    case KL_ERR_INFEASIBLE: return "Infeasible";
    case KL_ERR_PARSE: return "ParseError";
    case KL_ERR_IO: return "IoError";
    case KL_ERR_NULL_ARGUMENT: return "NullArgument";
    case KL_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* kl_last_error(void) { return last_error.c_str(); }

void kl_free_string(char* s) { std::free(s); }

void kl_free_u64_array(uint64_t* values) { std::free(values); }

kl_status kl_inv_mod(int64_t a, uint64_t q, uint64_t* out) {
  return guarded([&] { *need(out) = inv_mod(a, q); });
}

kl_status kl_crt_pair(int64_t r1, uint64_t q1, int64_t r2, uint64_t q2, uint64_t* out) {
  return guarded([&] { *need(out) = crt_pair(r1, q1, r2, q2); });
}

kl_status kl_factorize(uint64_t n, kl_factored** out) {
  return guarded([&] {
    need(out);
    *out = new kl_factored{factorize(n)};
  });
}

void kl_factored_free(kl_factored* f) { delete f; }

uint64_t kl_factored_value(const kl_factored* f) { return f ? f->value.value() : 0; }

size_t kl_factored_count(const kl_factored* f) { return f ? f->value.factors().size() : 0; }

kl_status kl_factored_get(const kl_factored* f, size_t i, uint64_t* prime, unsigned* exponent) {
  return guarded([&] {
    need(f);
    require(i < f->value.factors().size(), ErrorCode::kDomain, "factor index out of range");
    *need(prime) = f->value.factors()[i].prime;
    *need(exponent) = f->value.factors()[i].exponent;
  });
}

int kl_factored_squarefree(const kl_factored* f) { return f && f->value.squarefree() ? 1 : 0; }

kl_status kl_multiplicative_profile(uint64_t n, unsigned l, int* mu, uint64_t* phi, uint64_t* tau_l) {
  return guarded([&] {
    const MultiplicativeProfile p = multiplicative_profile(factorize(n), l);
    *need(mu) = p.mu;
    *need(phi) = p.phi;
    *need(tau_l) = p.tau_l;
  });
}

double kl_nearest_int_distance(double x) { return nearest_int_distance(x); }

kl_status kl_smooth_squarefree_moduli(uint64_t lo, uint64_t hi, uint64_t bound, uint64_t** values,
                                      size_t* count) {
  return guarded([&] {
    need(values);
    need(count);
    const auto list = smooth_squarefree_moduli(lo, hi, SmoothnessSpec{bound});
    auto* out = static_cast<uint64_t*>(std::malloc(sizeof(uint64_t) * (list.size() + 1)));
    if (out == nullptr) throw std::bad_alloc();
    for (std::size_t i = 0; i < list.size(); ++i) out[i] = list[i].value();
    *values = out;
    *count = list.size();
  });
}

kl_status kl_complete_kloosterman(int64_t a, int64_t b, uint64_t q, int direct, kl_sum* out) {
  return guarded([&] {
    *need(out) = to_c(complete_kloosterman(
        a, b, q, direct ? KloostermanMethod::kDirect : KloostermanMethod::kCrt));
  });
}

kl_status kl_kloosterman_crt(int64_t a, int64_t b, uint64_t q0, uint64_t q1, kl_sum* out) {
  return guarded([&] { *need(out) = to_c(kloosterman_crt(a, b, ModulusSplit({q0, q1}))); });
}

kl_status kl_incomplete_kloosterman(int64_t a, uint64_t q, kl_interval interval, kl_sum* out) {
  return guarded([&] { *need(out) = to_c(incomplete_kloosterman(a, q, from_c(interval))); });
}

kl_status kl_normalized_kl(int64_t a, uint64_t p, double* out) {
  return guarded([&] { *need(out) = normalized_kl(a, p); });
}

kl_status kl_divisor_sum_ap(uint64_t x, uint64_t q, int64_t a, int method, uint64_t* out) {
  return guarded([&] { *need(out) = divisor_sum_ap(ApQuery{x, q, a}, method_from_c(method)); });
}

kl_status kl_divisor_main_term(uint64_t x, uint64_t q, char** exact, double* value) {
  return guarded([&] {
    need(exact);
    need(value);
    const MainTerm m = divisor_main_term(x, q);
    *value = m.value;
    *exact = dup_string(m.exact.to_string());
  });
}

kl_status kl_error_term(uint64_t x, uint64_t q, int64_t a, int method, char** exact, double* value) {
  return guarded([&] {
    need(exact);
    need(value);
    const ErrorTerm e = error_term(ApQuery{x, q, a}, method_from_c(method));
    *value = e.value;
    *exact = dup_string(e.exact.to_string());
  });
}

kl_status kl_interval_fourier(kl_interval interval, uint64_t q, int64_t k, kl_sum* out) {
  return guarded([&] { *need(out) = to_c(interval_fourier(from_c(interval), q, k)); });
}

kl_status kl_completion_check(int64_t a, uint64_t q, kl_interval interval, kl_sum* direct,
                              kl_sum* completed, double* deviation, double* tolerance) {
  return guarded([&] {
    const CompletionResult r = completion_check(a, q, from_c(interval));
    if (direct) *direct = to_c(r.direct);
    if (completed) *completed = to_c(r.completed);
    *need(deviation) = r.deviation;
    if (tolerance) *tolerance = r.tolerance;
  });
}

kl_status kl_partial_sum_max(int64_t a, uint64_t q, int64_t m, uint64_t k, uint64_t r, double* out) {
  return guarded([&] { *need(out) = partial_sum_max(a, q, m, k, r); });
}

kl_status kl_shifted_product_sum(int64_t a, const int64_t* shifts, size_t count, int64_t b,
                                 uint64_t q, kl_sum* out) {
  return guarded([&] {
    if (count > 0) need(shifts);
    const std::span<const int64_t> s(shifts, count);
    *need(out) = to_c(shifted_product_sum_squarefree(a, s, b, factorize(q)));
  });
}

kl_status kl_t_eval(int64_t a_prime, const uint64_t* parts, size_t part_count, const int64_t* h,
                    kl_interval interval, kl_sum* out) {
  return guarded([&] {
    need(parts);
    require(part_count >= 1, ErrorCode::kDomain, "need at least the part q0");
    if (part_count > 1) need(h);
    const ModulusSplit split(std::vector<u64>(parts, parts + part_count));
    const ShiftVector shifts{std::vector<i64>(h, h + (part_count - 1))};
    *need(out) = to_c(t_eval(a_prime, split, shifts, from_c(interval)));
  });
}

kl_status kl_vanishing_lemma_check(uint64_t p, unsigned l, uint64_t* counterexamples) {
  return guarded([&] { *need(counterexamples) = vanishing_lemma_check(p, l).size(); });
}

kl_status kl_onediff_ratio(int64_t a, uint64_t q0, uint64_t q1, int64_t m, kl_interval interval,
                           const int64_t* shifts, size_t count, double* lhs, double* rhs_core,
                           double* ratio) {
  return guarded([&] {
    if (count > 0) need(shifts);
    const OneDiffRatio r =
        onediff_ratio(a, q0, q1, m, from_c(interval), std::span<const int64_t>(shifts, count));
    if (lhs) *lhs = r.lhs;
    if (rhs_core) *rhs_core = r.rhs_core;
    *need(ratio) = r.ratio;
  });
}

kl_status kl_shortkloost_rhs(uint64_t n, const uint64_t* parts, size_t part_count, double eps,
                             double computed, kl_bound_report** out) {
  return guarded([&] {
    need(parts);
    need(out);
    const ModulusSplit split(std::vector<u64>(parts, parts + part_count));
    *out = new kl_bound_report{shortkloost_rhs(n, split, eps, computed)};
  });
}

kl_status kl_divisorthm_rhs(uint64_t x, const uint64_t parts[4], double delta, double eps,
                            double computed, kl_bound_report** out) {
  return guarded([&] {
    need(parts);
    need(out);
    const ModulusSplit split(std::vector<u64>(parts, parts + 4));
    *out = new kl_bound_report{divisorthm_rhs(x, split, delta, eps, computed)};
  });
}

void kl_bound_report_free(kl_bound_report* r) { delete r; }

size_t kl_bound_term_count(const kl_bound_report* r) { return r ? r->value.terms.size() : 0; }

kl_status kl_bound_term(const kl_bound_report* r, size_t i, const char** name, double* raw,
                        double* weight, double* value) {
  return guarded([&] {
    need(r);
    require(i < r->value.terms.size(), ErrorCode::kDomain, "term index out of range");
    const BoundTerm& t = r->value.terms[i];
    if (name) *name = t.name.c_str();
    if (raw) *raw = t.raw;
    if (weight) *weight = t.weight;
    if (value) *value = t.value;
  });
}

double kl_bound_total(const kl_bound_report* r) { return r ? r->value.bound_total : 0; }
double kl_bound_total_eps0(const kl_bound_report* r) { return r ? r->value.bound_total_eps0 : 0; }
double kl_bound_ratio(const kl_bound_report* r) { return r ? r->value.ratio : 0; }
double kl_bound_ratio_eps0(const kl_bound_report* r) { return r ? r->value.ratio_eps0 : 0; }

kl_status kl_target_sizes(uint64_t x, uint64_t q, double out[4]) {
  return guarded([&] {
    need(out);
    const TargetSizes t = target_sizes(x, q);
    for (int j = 0; j < 4; ++j) out[j] = t.q[j];
  });
}

kl_status kl_admissible(double varpi, double eta, int* out) {
  return guarded([&] { *need(out) = admissible(varpi, eta) ? 1 : 0; });
}

kl_status kl_target_windows(uint64_t x, uint64_t q, double eta, double lo[4], double hi[4]) {
  return guarded([&] {
    need(lo);
    need(hi);
    const WindowSpec w = target_windows(x, q, eta);
    for (int j = 0; j < 4; ++j) {
      lo[j] = w.parts[j].lo;
      hi[j] = w.parts[j].hi;
    }
  });
}

kl_status kl_factorize_to_windows(uint64_t q, const double lo[4], const double hi[4],
                                  uint64_t parts[4], int* feasible) {
  return guarded([&] {
    need(parts);
    need(feasible);
    const auto split = factorize_to_windows(factorize(q), windows_from_c(lo, hi));
    *feasible = split ? 1 : 0;
    if (split) {
      for (int j = 0; j < 4; ++j) parts[j] = split->part(static_cast<std::size_t>(j));
    }
  });
}

kl_status kl_exponent_fit(const double* scales, const double* values, size_t count, double* slope,
                          double* intercept, double* residual) {
  return guarded([&] {
    need(scales);
    need(values);
    std::vector<std::pair<double, double>> points;
    for (size_t i = 0; i < count; ++i) points.push_back({scales[i], values[i]});
    const ExponentFit f = exponent_fit(points);
    *need(slope) = f.slope;
    if (intercept) *intercept = f.intercept;
    if (residual) *residual = f.residual;
  });
}

kl_status kl_sweep_config_from_json(const char* json, kl_sweep_config** out) {
  return guarded([&] {
    need(json);
    need(out);
    *out = new kl_sweep_config{sweep_config_from_json(json)};
  });
}

kl_status kl_sweep_config_to_json(const kl_sweep_config* c, char** out) {
  return guarded([&] { *need(out) = dup_string(sweep_config_to_json(need(c)->value)); });
}

void kl_sweep_config_free(kl_sweep_config* c) { delete c; }

kl_status kl_sweep_run(const kl_sweep_config* c, kl_sweep_result** out) {
  return guarded([&] {
    need(out);
    *out = new kl_sweep_result{run_sweep(need(c)->value)};
  });
}

void kl_sweep_result_free(kl_sweep_result* r) { delete r; }

kl_status kl_sweep_render(const kl_sweep_result* r, char** out) {
  return guarded([&] { *need(out) = dup_string(render_report(need(r)->value)); });
}

kl_status kl_sweep_summary_line(const kl_sweep_result* r, char** out) {
  return guarded([&] { *need(out) = dup_string(render_summary_line(need(r)->value.summary)); });
}

size_t kl_sweep_row_count(const kl_sweep_result* r) { return r ? r->value.rows.size() : 0; }

kl_status kl_sweep_row(const kl_sweep_result* r, size_t i, kl_sweep_row_info* out) {
  return guarded([&] {
    need(r);
    need(out);
    require(i < r->value.rows.size(), ErrorCode::kDomain, "row index out of range");
    const SweepRow& row = r->value.rows[i];
    kl_sweep_row_info info{};
    info.x = row.x;
    info.q = row.q;
    info.a = row.a;
    info.has_e = row.e_exact ? 1 : 0;
    info.abs_e = row.abs_e;
    info.qe_over_x = row.qe_over_x;
    info.has_split = row.split ? 1 : 0;
    if (row.split) {
      for (int j = 0; j < 4; ++j) info.split[j] = (*row.split)[static_cast<std::size_t>(j)];
    }
    info.has_ratio = row.ratio ? 1 : 0;
    info.ratio = row.ratio.value_or(0.0);
    *out = info;
  });
}

kl_status kl_sweep_fit(const kl_sweep_result* r, int* has_fit, double* slope, double* residual) {
  return guarded([&] {
    const auto& fit = need(r)->value.summary.fit;
    *need(has_fit) = fit ? 1 : 0;
    if (slope) *slope = fit ? fit->slope : 0.0;
    if (residual) *residual = fit ? fit->residual : 0.0;
  });
}

kl_status kl_verify_report(const char* text, uint64_t seed, uint64_t* rows, uint64_t* checked,
                           uint64_t* mismatches, char** first_mismatch) {
  return guarded([&] {
    const VerifyResult v = verify_report(need(text), seed);
    if (rows) *rows = v.rows;
    if (checked) *checked = v.checked;
    *need(mismatches) = v.mismatches;
    if (first_mismatch) *first_mismatch = dup_string(v.first_mismatch);
  });
}

kl_status kl_lemma_suite_run(const char* suite, int full, unsigned jobs, kl_lemma_report** out) {
  return guarded([&] {
    need(out);
    *out = new kl_lemma_report{
        run_lemma_suite(need(suite), full ? SuiteSize::kFull : SuiteSize::kSmall, jobs)};
  });
}

void kl_lemma_report_free(kl_lemma_report* r) { delete r; }

int kl_lemma_report_passed(const kl_lemma_report* r) { return r && r->value.passed ? 1 : 0; }

kl_status kl_lemma_report_render(const kl_lemma_report* r, char** out) {
  return guarded([&] { *need(out) = dup_string(render_lemma_report(need(r)->value)); });
}

}  // extern "C"
