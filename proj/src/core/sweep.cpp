#include "sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "divisor_ap.hpp"
#include "error.hpp"
#include "modulus_split.hpp"
#include "parallel.hpp"

namespace kloostlab {

using ordered_json = nlohmann::ordered_json;

namespace {

// Tables beyond this many entries cost more memory than the sweep saves.
constexpr u64 kMaxSweepTable = 20'000'000;

constexpr const char* kCsvHeader =
    "x,q,a,E_exact,abs_E,qE_over_x,bound_total,bound_total_eps,ratio,q0,q1,q2,q3,Q0,Q1,Q2,Q3,"
    "runtime_ms,error";

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string real(const std::optional<double>& v) { return v ? real(*v) : std::string(); }

u64 json_u64(const ordered_json& v, const char* what) {
  if (!v.is_number_unsigned()) {
    fail(ErrorCode::kParse, std::string(what) + " must be a non-negative integer");
  }
  return v.get<u64>();
}

double json_real(const ordered_json& v, const char* what) {
  if (!v.is_number()) fail(ErrorCode::kParse, std::string(what) + " must be a number");
  return v.get<double>();
}

// Residues a in [0, q) coprime to q for one (x, q) cell, ascending.
std::vector<u64> cell_residues(const SweepConfig& config, u64 x, u64 q, u64 phi) {
  if (q == 1) return {0};
  const bool sample = config.residue_sample && *config.residue_sample < phi;
  if (!sample) {
    std::vector<u64> all;
    for (u64 a = 1; a < q; ++a) {
      if (gcd(a, q) == 1) all.push_back(a);
    }
    return all;
  }
  auto rng = cell_rng(config.seed, splitmix64(x) ^ q);
  std::uniform_int_distribution<u64> pick(1, q - 1);
  std::set<u64> chosen;
  while (chosen.size() < *config.residue_sample) {
    const u64 a = pick(rng);
    if (gcd(a, q) == 1) chosen.insert(a);
  }
  return {chosen.begin(), chosen.end()};
}

std::vector<u64> cell_moduli(const SweepConfig& config, u64 x) {
  if (!config.smooth) return config.q_values;
  const double lx = std::log(static_cast<double>(x));
  const u64 lo = static_cast<u64>(std::ceil(std::exp(config.smooth->lo_exp * lx) - 1e-9));
  const u64 hi = static_cast<u64>(std::floor(std::exp(config.smooth->hi_exp * lx) + 1e-9));
  const u64 bound = static_cast<u64>(std::floor(std::exp(config.eta * lx) + 1e-9));
  if (hi < std::max<u64>(lo, 1)) return {};
  std::vector<u64> out;
  for (const auto& f : smooth_squarefree_moduli(std::max<u64>(lo, 1), hi, SmoothnessSpec{bound})) {
    out.push_back(f.value());
  }
  return out;
}

struct Cell {
  u64 x;
  u64 q;
};

struct CellOutcome {
  std::vector<SweepRow> rows;
  bool infeasible = false;
  bool full_residues = false;
};

CellOutcome run_cell(const SweepConfig& config, const Cell& cell, const DivisorTable* table) {
  using clock = std::chrono::steady_clock;
  CellOutcome out;
  const auto [x, q] = cell;
  const TargetSizes targets = target_sizes(x, q);
  const FactoredInteger fq = factorize(q);
  const u64 phi = multiplicative_profile(fq, 2).phi;
  const std::vector<u64> residues = cell_residues(config, x, q, phi);
  out.full_residues = residues.size() == phi;

  std::optional<ModulusSplit> split;
  std::string cell_error;
  try {
    if (fq.squarefree()) split = factorize_to_windows(fq, target_windows(x, q, config.eta));
  } catch (const Error& e) {
    cell_error = e.what();
  }
  out.infeasible = !split;

  std::optional<BoundReport> bound0, bound_eps;
  if (split) {
    try {
      bound0 = divisorthm_rhs(x, *split, config.delta, 0.0);
      bound_eps = divisorthm_rhs(x, *split, config.delta, config.eps);
    } catch (const Error& e) {
      cell_error = e.what();
    }
  }
  const MainTerm main = divisor_main_term(x, fq);

  for (u64 a : residues) {
    const auto start = clock::now();
    SweepRow row;
    row.x = x;
    row.q = q;
    row.a = a;
    row.targets = targets.q;
    row.error = cell_error;
    if (split) row.split = std::array<u64, 4>{split->part(0), split->part(1), split->part(2), split->part(3)};
    try {
      const ApQuery query{x, q, static_cast<i64>(a)};
      const u64 d = table ? divisor_sum_ap(query, *table) : divisor_sum_ap(query);
      const ErrorTerm e = error_term(d, main);
      row.e_exact = e.exact;
      row.abs_e = std::abs(e.value);
      row.qe_over_x = static_cast<double>(q) * row.abs_e / static_cast<double>(x);
      if (bound0) {
        row.bound_total = bound0->bound_total;
        row.bound_total_eps = bound_eps->bound_total;
        if (*row.bound_total > 0) row.ratio = row.abs_e / *row.bound_total;
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (config.timing) {
      row.runtime_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    }
    std::replace(row.error.begin(), row.error.end(), ',', ';');
    out.rows.push_back(std::move(row));
  }
  return out;
}

ordered_json row_json(const SweepRow& r) {
  ordered_json j;
  j["x"] = r.x;
  j["q"] = r.q;
  j["a"] = r.a;
  j["E_exact"] = r.e_exact ? ordered_json(r.e_exact->to_string()) : ordered_json(nullptr);
  j["abs_E"] = r.abs_e;
  j["qE_over_x"] = r.qe_over_x;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  j["bound_total"] = opt(r.bound_total);
  j["bound_total_eps"] = opt(r.bound_total_eps);
  j["ratio"] = opt(r.ratio);
  j["split"] = r.split ? ordered_json(*r.split) : ordered_json(nullptr);
  j["targets"] = r.targets;
  j["runtime_ms"] = opt(r.runtime_ms);
  j["error"] = r.error;
  return j;
}

ordered_json summary_json(const SweepSummary& s) {
  ordered_json j;
  j["rows"] = s.rows;
  j["cells"] = s.cells;
  j["error_rows"] = s.error_rows;
  j["infeasible_cells"] = s.infeasible_cells;
  j["max_ratio"] = s.max_ratio;
  if (s.fit) {
    j["fit"] = {{"slope", s.fit->slope}, {"intercept", s.fit->intercept}, {"residual", s.fit->residual}};
  } else {
    j["fit"] = nullptr;
  }
  ordered_json per_x = ordered_json::array();
  for (const auto& [x, v] : s.per_x_max) per_x.push_back({{"x", x}, {"max_qE_over_x", v}});
  j["per_x_max"] = per_x;
  j["sum_E"] = s.sum_e ? ordered_json(s.sum_e->to_string()) : ordered_json(nullptr);
  j["full_residue_cells"] = s.full_residue_cells;
  j["zero_sum_cells"] = s.zero_sum_cells;
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct StoredRow {
  u64 x;
  u64 q;
  u64 a;
  Rational e;
};

u64 parse_u64(const std::string& s) {
  require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos, ErrorCode::kParse,
          "expected a non-negative integer field");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(ErrorCode::kParse, "integer field out of range");
  }
}

std::vector<StoredRow> read_rows(const std::string& text) {
  std::vector<StoredRow> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    ordered_json doc;
    try {
      doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, std::string("report is not valid JSON: ") + e.what());
    }
    require(doc.contains("schema") && doc["schema"] == kReportSchema, ErrorCode::kParse,
            "unsupported report schema");
    require(doc.contains("rows") && doc["rows"].is_array(), ErrorCode::kParse, "report has no rows");
    for (const auto& r : doc["rows"]) {
      if (!r.contains("E_exact") || r["E_exact"].is_null()) continue;
      rows.push_back({json_u64(r.at("x"), "x"), json_u64(r.at("q"), "q"), json_u64(r.at("a"), "a"),
                      Rational::parse(r["E_exact"].get<std::string>())});
    }
    return rows;
  }
  std::istringstream in(text);
  std::string line;
  bool schema_ok = false, header_seen = false;
  std::map<std::string, std::size_t> column;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "# schema=" + std::to_string(kReportSchema)) schema_ok = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      require(schema_ok, ErrorCode::kParse, "missing or unsupported schema line");
      require(line == kCsvHeader, ErrorCode::kParse, "unexpected CSV header");
      for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
      header_seen = true;
      continue;
    }
    require(fields.size() == column.size(), ErrorCode::kParse, "CSV row has the wrong field count");
    const std::string& e = fields[column["E_exact"]];
    if (e.empty()) continue;
    rows.push_back({parse_u64(fields[column["x"]]), parse_u64(fields[column["q"]]),
                    parse_u64(fields[column["a"]]), Rational::parse(e)});
  }
  require(header_seen, ErrorCode::kParse, "report has no header");
  return rows;
}

}  // namespace

void validate(const SweepConfig& c) {
  require(!c.x_values.empty(), ErrorCode::kDomain, "x_values must not be empty");
  for (u64 x : c.x_values) require(x >= 1, ErrorCode::kDomain, "x values must be positive");
  if (c.smooth) {
    require(c.smooth->lo_exp >= 0 && c.smooth->lo_exp <= c.smooth->hi_exp, ErrorCode::kDomain,
            "smooth exponents need 0 <= lo_exp <= hi_exp");
    require(c.smooth->hi_exp <= 1, ErrorCode::kDomain, "smooth moduli must stay below x");
  } else {
    require(!c.q_values.empty(), ErrorCode::kDomain, "give q_values or a smooth source");
    for (u64 q : c.q_values) require(q >= 1, ErrorCode::kDomain, "q values must be positive");
  }
  if (c.residue_sample) require(*c.residue_sample >= 1, ErrorCode::kDomain, "sample size must be positive");
  require(c.delta > 0 && c.delta < 1.0 / 12, ErrorCode::kDomain, "delta must lie in (0, 1/12)");
  require(c.eps >= 0, ErrorCode::kDomain, "eps must be non-negative");
  require(c.eta > 0, ErrorCode::kDomain, "eta must be positive");
  require(c.jobs >= 1, ErrorCode::kDomain, "jobs must be positive");
}

SweepConfig sweep_config_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  require(doc.is_object(), ErrorCode::kParse, "config must be a JSON object");
  SweepConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "x_values") {
      require(v.is_array(), ErrorCode::kParse, "x_values must be an array");
      for (const auto& x : v) c.x_values.push_back(json_u64(x, "x_values entries"));
    } else if (key == "q_values") {
      require(v.is_array(), ErrorCode::kParse, "q_values must be an array");
      for (const auto& q : v) c.q_values.push_back(json_u64(q, "q_values entries"));
    } else if (key == "smooth") {
      if (v.is_null()) continue;
      require(v.is_object() && v.contains("lo_exp") && v.contains("hi_exp") && v.size() == 2,
              ErrorCode::kParse, "smooth needs exactly lo_exp and hi_exp");
      c.smooth = SmoothSource{json_real(v["lo_exp"], "lo_exp"), json_real(v["hi_exp"], "hi_exp")};
    } else if (key == "residues") {
      if (v.is_string() && v.get<std::string>() == "all") {
        c.residue_sample.reset();
      } else {
        require(v.is_object() && v.contains("sample") && v.size() == 1, ErrorCode::kParse,
                "residues must be \"all\" or {\"sample\": m}");
        c.residue_sample = json_u64(v["sample"], "sample");
      }
    } else if (key == "delta") {
      c.delta = json_real(v, "delta");
    } else if (key == "eps") {
      c.eps = json_real(v, "eps");
    } else if (key == "eta") {
      c.eta = json_real(v, "eta");
    } else if (key == "seed") {
      c.seed = json_u64(v, "seed");
    } else if (key == "format") {
      require(v.is_string(), ErrorCode::kParse, "format must be a string");
      const std::string f = v.get<std::string>();
      require(f == "csv" || f == "json", ErrorCode::kParse, "format must be csv or json");
      c.format = f == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
    } else if (key == "out") {
      require(v.is_string(), ErrorCode::kParse, "out must be a string");
      c.out = v.get<std::string>();
    } else if (key == "jobs") {
      c.jobs = static_cast<unsigned>(json_u64(v, "jobs"));
    } else if (key == "timing") {
      require(v.is_boolean(), ErrorCode::kParse, "timing must be a boolean");
      c.timing = v.get<bool>();
    } else {
      fail(ErrorCode::kParse, "unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

namespace {

// The fields that determine report content; out, jobs and format do not.
ordered_json config_json(const SweepConfig& c, bool everything) {
  ordered_json j;
  j["x_values"] = c.x_values;
  if (c.smooth) {
    j["smooth"] = {{"lo_exp", c.smooth->lo_exp}, {"hi_exp", c.smooth->hi_exp}};
  } else {
    j["q_values"] = c.q_values;
  }
  j["residues"] = c.residue_sample ? ordered_json{{"sample", *c.residue_sample}} : ordered_json("all");
  j["delta"] = c.delta;
  j["eps"] = c.eps;
  j["eta"] = c.eta;
  j["seed"] = c.seed;
  j["timing"] = c.timing;
  if (everything) {
    j["format"] = c.format == ReportFormat::kCsv ? "csv" : "json";
    j["out"] = c.out;
    j["jobs"] = c.jobs;
  }
  return j;
}

}  // namespace

std::string sweep_config_to_json(const SweepConfig& config) {
  return config_json(config, true).dump();
}

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);
  SweepResult result;
  result.config = config;
  std::vector<u64> xs = config.x_values;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<std::vector<SweepRow>> rows_by_x;
  for (u64 x : xs) {
    std::vector<u64> moduli = cell_moduli(config, x);
    std::sort(moduli.begin(), moduli.end());
    moduli.erase(std::unique(moduli.begin(), moduli.end()), moduli.end());
    std::unique_ptr<DivisorTable> table;
    if (x <= kMaxSweepTable) table = std::make_unique<DivisorTable>(x);
    std::vector<CellOutcome> outcomes(moduli.size());
    parallel_for(moduli.size(), config.jobs, [&](std::size_t i) {
      outcomes[i] = run_cell(config, Cell{x, moduli[i]}, table.get());
    });
    SweepSummary& s = result.summary;
    for (auto& o : outcomes) {
      ++s.cells;
      if (o.infeasible) ++s.infeasible_cells;
      if (o.full_residues) {
        ++s.full_residue_cells;
        Rational cell_sum(0);
        bool exact = true;
        for (const auto& r : o.rows) {
          if (!r.e_exact) {
            exact = false;
            break;
          }
          cell_sum = cell_sum + *r.e_exact;
        }
        if (exact && cell_sum == Rational(0)) ++s.zero_sum_cells;
      }
      for (auto& r : o.rows) result.rows.push_back(std::move(r));
    }
  }

  SweepSummary& s = result.summary;
  s.rows = result.rows.size();
  s.sum_e = Rational(0);
  std::map<u64, double> per_x;
  for (const auto& r : result.rows) {
    if (!r.error.empty()) ++s.error_rows;
    if (r.ratio) s.max_ratio = std::max(s.max_ratio, *r.ratio);
    if (r.e_exact) {
      per_x[r.x] = std::max(per_x[r.x], r.qe_over_x);
      if (s.sum_e) {
        try {
          s.sum_e = *s.sum_e + *r.e_exact;
        } catch (const Error&) {
          s.sum_e.reset();
        }
      }
    }
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [x, v] : per_x) {
    s.per_x_max.push_back({x, v});
    if (v > 0) points.push_back({static_cast<double>(x), v});
  }
  if (points.size() >= 2) s.fit = exponent_fit(points);
  return result;
}

std::string render_summary_line(const SweepSummary& s) {
  std::string fit = "n/a";
  if (s.fit) fit = real(s.fit->slope) + " (rms " + real(s.fit->residual) + ")";
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "rows=%llu cells=%llu max_ratio=%.17g fit_exponent=%s infeasible=%llu errors=%llu "
                "sum_E=%s zero_sum_cells=%llu/%llu",
                static_cast<unsigned long long>(s.rows), static_cast<unsigned long long>(s.cells),
                s.max_ratio, fit.c_str(), static_cast<unsigned long long>(s.infeasible_cells),
                static_cast<unsigned long long>(s.error_rows),
                s.sum_e ? s.sum_e->to_string().c_str() : "overflow",
                static_cast<unsigned long long>(s.zero_sum_cells),
                static_cast<unsigned long long>(s.full_residue_cells));
  return buf;
}

std::string render_csv(const SweepResult& result) {
  std::string out;
  out += "# schema=" + std::to_string(kReportSchema) + "\n";
  out += "# seed=" + std::to_string(result.config.seed) + "\n";
  out += "# config=" + config_json(result.config, false).dump() + "\n";
  out += std::string(kCsvHeader) + "\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.x) + "," + std::to_string(r.q) + "," + std::to_string(r.a) + ",";
    out += (r.e_exact ? r.e_exact->to_string() : "") + ",";
    out += (r.e_exact ? real(r.abs_e) : "") + "," + (r.e_exact ? real(r.qe_over_x) : "") + ",";
    out += real(r.bound_total) + "," + real(r.bound_total_eps) + "," + real(r.ratio) + ",";
    for (std::size_t j = 0; j < 4; ++j) out += (r.split ? std::to_string((*r.split)[j]) : "") + ",";
    for (std::size_t j = 0; j < 4; ++j) out += real(r.targets[j]) + ",";
    out += real(r.runtime_ms) + "," + r.error + "\n";
  }
  out += "# summary " + render_summary_line(result.summary) + "\n";
  return out;
}

std::string render_json(const SweepResult& result) {
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["seed"] = result.config.seed;
  doc["config"] = config_json(result.config, false);
  ordered_json rows = ordered_json::array();
  for (const auto& r : result.rows) rows.push_back(row_json(r));
  doc["rows"] = std::move(rows);
  doc["summary"] = summary_json(result.summary);
  return doc.dump(1) + "\n";
}

std::string render_report(const SweepResult& result) {
  return result.config.format == ReportFormat::kCsv ? render_csv(result) : render_json(result);
}

VerifyResult verify_report(const std::string& text, u64 seed, double fraction) {
  require(fraction > 0 && fraction <= 1, ErrorCode::kDomain, "fraction must lie in (0, 1]");
  const std::vector<StoredRow> rows = read_rows(text);
  VerifyResult result;
  result.rows = rows.size();
  if (rows.empty()) return result;
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(rows.size()))));
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(splitmix64(seed));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + std::uniform_int_distribution<std::size_t>(0, rows.size() - 1 - i)(rng);
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  std::sort(order.begin(), order.end());
  for (std::size_t i : order) {
    const StoredRow& r = rows[i];
    ++result.checked;
    const ErrorTerm e = error_term(ApQuery{r.x, r.q, static_cast<i64>(r.a)}, DivisorMethod::kHyperbola);
    if (!(e.exact == r.e)) {
      if (result.mismatches == 0) {
        result.first_mismatch = "x=" + std::to_string(r.x) + " q=" + std::to_string(r.q) +
                                " a=" + std::to_string(r.a) + " stored " + r.e.to_string() +
                                " recomputed " + e.exact.to_string();
      }
      ++result.mismatches;
    }
  }
  return result;
}

}  // namespace kloostlab
