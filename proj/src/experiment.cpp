#include "simplexwalk/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "simplexwalk/beta_math.hpp"
#include "simplexwalk/estimators.hpp"
#include "simplexwalk/spectral.hpp"

#ifndef SIMPLEXWALK_VERSION
#define SIMPLEXWALK_VERSION "0.0.0"
#endif

namespace simplexwalk {

namespace {

const std::vector<std::string> kKnownKeys = {"kind", "n",      "alpha", "alphas", "times", "linspace", "reps",
                                             "K",    "seed",   "outdir", "f",     "g",     "start"};

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

[[noreturn]] void type_error(const std::string& key, const std::string& value, const std::string& expected)
{
  throw SimplexError("spec key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v)
{
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    type_error(key, v, "a number");
  }
  if (used != v.size() || !std::isfinite(out)) type_error(key, v, "a number");
  return out;
}

long long to_integer(const std::string& key, const std::string& v)
{
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    type_error(key, v, "an integer");
  }
  if (used != v.size()) type_error(key, v, "an integer");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v)
{
  if (v.empty() || v[0] == '-') type_error(key, v, "a nonnegative integer");
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    type_error(key, v, "a nonnegative integer");
  }
  if (used != v.size()) type_error(key, v, "a nonnegative integer");
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& p : split(v, ',')) out.push_back(to_double(key, p));
  return out;
}

std::vector<double> linspace(double a, double b, int count)
{
  std::vector<double> out;
  if (count == 1) return {a};
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * double(i) / double(count - 1));
  return out;
}

std::string join(const std::vector<double>& v)
{
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

bool uses_time_grid(ExperimentKind k)
{
  return k != ExperimentKind::beta_tv_scan && k != ExperimentKind::fkg;
}

std::vector<double> default_grid(const ExperimentSpec& s)
{
  const int n = s.n;
  const double log_n = std::log(double(n));
  const double gap = spectral_gap(n);
  switch (s.kind) {
    case ExperimentKind::gap_decay: return linspace(0.0, 2.0 * log_n / gap, 12);
    case ExperimentKind::heat_curve: return {1.0, 5.0, 20.0};
    case ExperimentKind::meanfield_gap: return linspace(0.0, 4.0 / meanfield_gap(n, s.alpha), 12);
    case ExperimentKind::mixing_profile:
      return linspace(0.0, 5.0 * n * n * log_n / (std::numbers::pi * std::numbers::pi), 12);
    case ExperimentKind::coalesce: return linspace(0.0, 5.0 * log_n / gap, 12);
    case ExperimentKind::censor_dominate: return {double(n) * n};
    case ExperimentKind::separation: return linspace(0.0, 2.0 * log_n / gap, 12);
    case ExperimentKind::wilson_moments: return linspace(0.0, 2.0 * log_n / gap, 8);
    default: return {};
  }
}

}  // namespace

const std::vector<std::string>& experiment_kind_names()
{
  static const std::vector<std::string> names = {"gap-decay", "heat-curve", "meanfield-gap", "mixing-profile",
                                                 "coalesce",  "beta-tv-scan", "fkg", "censor-dominate",
                                                 "separation", "wilson-moments"};
  return names;
}

std::string to_string(ExperimentKind kind) { return experiment_kind_names()[std::size_t(kind)]; }

ExperimentKind parse_experiment_kind(const std::string& name)
{
  const auto& names = experiment_kind_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw SimplexError("spec key 'kind': unknown experiment kind '" + name + "'");
  return ExperimentKind(it - names.begin());
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SpecEntries parse_spec_entries(const std::string& text)
{
  SpecEntries out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string key, value;
    if (line.front() == '[') {
      if (line.back() != ']') throw SimplexError("spec line " + std::to_string(lineno) + ": unterminated section");
      key = "kind";
      value = trim(line.substr(1, line.size() - 2));
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw SimplexError("spec line " + std::to_string(lineno) + ": expected key = value");
      }
      key = trim(line.substr(0, eq));
      value = trim(line.substr(eq + 1));
    }
    if (auto it = out.find(key); it != out.end()) {
      if (key == "kind" && it->second == value) continue;
      throw SimplexError("spec key '" + key + "' given twice");
    }
    out[key] = value;
  }
  return out;
}

ExperimentSpec parse_spec(const SpecEntries& file, const SpecEntries& overrides)
{
  SpecEntries e = file;
  for (const auto& [k, v] : overrides) e[k] = v;
  for (const auto& [k, v] : e) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), k) == kKnownKeys.end()) {
      throw SimplexError("unknown spec key '" + k + "'");
    }
  }
  if (!e.count("kind")) throw SimplexError("spec key 'kind' is required");
  ExperimentSpec s;
  s.kind = parse_experiment_kind(e.at("kind"));

  if (e.count("n")) {
    const auto n = to_integer("n", e.at("n"));
    if (n < 2 || n > 1'000'000) type_error("n", e.at("n"), "an integer in [2, 1000000]");
    s.n = int(n);
  } else if (s.kind != ExperimentKind::beta_tv_scan) {
    throw SimplexError("spec key 'n' is required for kind " + to_string(s.kind));
  }
  if (e.count("alpha")) {
    s.alpha = to_double("alpha", e.at("alpha"));
    if (!(s.alpha > 0)) type_error("alpha", e.at("alpha"), "a positive number");
  }
  if (e.count("alphas")) {
    s.alphas = to_list("alphas", e.at("alphas"));
    for (double a : s.alphas) {
      if (!(a > 0)) type_error("alphas", e.at("alphas"), "positive numbers");
    }
  } else if (s.kind == ExperimentKind::beta_tv_scan) {
    s.alphas = {1.0, 2.0, 3.0};
  }
  if (e.count("reps")) {
    s.reps = to_unsigned("reps", e.at("reps"));
    if (s.reps < 1) type_error("reps", e.at("reps"), "an integer >= 1");
  }
  if (e.count("seed")) s.seed = to_unsigned("seed", e.at("seed"));
  if (e.count("outdir")) s.outdir = e.at("outdir");
  if (e.count("f")) s.f = e.at("f");
  if (e.count("g")) s.g = e.at("g");
  if (e.count("start")) {
    s.start = e.at("start");
    if (s.start != "top" && s.start != "bottom") type_error("start", s.start, "'top' or 'bottom'");
  }
  if (e.count("K")) {
    const auto K = to_integer("K", e.at("K"));
    if (K < 2 || K > s.n) type_error("K", e.at("K"), "an integer in [2, n]");
    s.K = int(K);
  } else if (s.kind == ExperimentKind::censor_dominate) {
    s.K = std::min(4, s.n);
  }
  if (s.kind == ExperimentKind::fkg && s.g.empty()) s.g = "x" + std::to_string(s.n - 1);

  if (e.count("times") && e.count("linspace")) throw SimplexError("spec keys 'times' and 'linspace' conflict");
  if (e.count("times")) {
    s.times = to_list("times", e.at("times"));
  } else if (e.count("linspace")) {
    const auto parts = to_list("linspace", e.at("linspace"));
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
      type_error("linspace", e.at("linspace"), "start,stop,count");
    }
    s.times = linspace(parts[0], parts[1], int(parts[2]));
  } else if (uses_time_grid(s.kind)) {
    s.times = default_grid(s);
  }
  if (uses_time_grid(s.kind) && s.times.empty()) throw SimplexError("spec key 'times': empty time grid");
  if (!std::is_sorted(s.times.begin(), s.times.end())) type_error("times", join(s.times), "a sorted grid");
  for (double t : s.times) {
    if (t < 0) type_error("times", join(s.times), "nonnegative times");
  }
  return s;
}

ExperimentSpec parse_spec_file(const std::filesystem::path& path, const SpecEntries& overrides)
{
  std::ifstream in(path);
  if (!in) throw SimplexError("cannot read spec file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(parse_spec_entries(buf.str()), overrides);
}

SpecEntries spec_entries(const ExperimentSpec& s)
{
  SpecEntries e;
  e["kind"] = to_string(s.kind);
  if (s.n != 0) e["n"] = std::to_string(s.n);
  e["alpha"] = format_double(s.alpha);
  if (!s.alphas.empty()) e["alphas"] = join(s.alphas);
  if (!s.times.empty()) e["times"] = join(s.times);
  e["reps"] = std::to_string(s.reps);
  if (s.K != 0) e["K"] = std::to_string(s.K);
  e["seed"] = std::to_string(s.seed);
  e["outdir"] = s.outdir;
  e["f"] = s.f;
  if (!s.g.empty()) e["g"] = s.g;
  e["start"] = s.start;
  return e;
}

std::string spec_text(const ExperimentSpec& s)
{
  std::string out;
  for (const auto& [k, v] : spec_entries(s)) out += k + " = " + v + "\n";
  return out;
}

SpecEntries parse_overrides(const std::vector<std::string>& args)
{
  SpecEntries out;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) throw SimplexError("expected --key=value, got '" + a + "'");
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw SimplexError("expected --key=value, got '" + a + "'");
    out[a.substr(2, eq - 2)] = a.substr(eq + 1);
  }
  return out;
}

std::string software_version() { return SIMPLEXWALK_VERSION; }

namespace {

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void write(const std::filesystem::path& path) const
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimplexError("cannot write " + path.string());
    write_row(out, header_);
    for (const auto& r : rows_) write_row(out, r);
  }

 private:
  static void write_row(std::ofstream& out, const std::vector<std::string>& r)
  {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

using F = std::string (*)(double);
const F fmt = format_double;

CheckResult at_most(std::string name, double value, double threshold)
{
  return {std::move(name), value, threshold, value <= threshold};
}

CheckResult at_least(std::string name, double value, double threshold)
{
  return {std::move(name), value, threshold, value >= threshold};
}

/// |diff| / max(se, floor). The floor covers columns whose sample variance
/// vanishes (deterministic t = 0 values, coordinates no replica has moved).
double z_score(double diff, double se, double floor)
{
  return std::abs(diff) / std::max(se, floor);
}

double monotone_violation(const std::vector<EstimateWithError>& col)
{
  // Largest rise above the previous value beyond 3 joint standard errors.
  double worst = 0.0;
  for (std::size_t k = 1; k < col.size(); ++k) {
    const double se = std::hypot(col[k].standard_error, col[k - 1].standard_error);
    worst = std::max(worst, col[k].value - col[k - 1].value - 3.0 * se);
  }
  return worst;
}

CsvTable run_gap_decay(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto top = Configuration::top(s.n);
  const double gap = spectral_gap(s.n);
  const double f0 = eigen_stat(1, top);
  const auto prof = eigen_decay_profile(top, s.alpha, {1}, s.times, s.reps, s.seed);
  CsvTable t({"t", "mean_f", "se", "analytic"});
  std::vector<double> means, ses;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double m = prof.mean(Eigen::Index(i), 0);
    const double se = prof.standard_error(Eigen::Index(i), 0);
    const double exact = f0 * std::exp(-gap * s.times[i]);
    means.push_back(m);
    ses.push_back(se);
    worst_z = std::max(worst_z, z_score(m - exact, se, 1e-9 * (1.0 + std::abs(exact))));
    t.add({fmt(s.times[i]), fmt(m), fmt(se), fmt(exact)});
  }
  const auto fit = fit_decay_rate(s.times, means, ses);
  checks.push_back(at_most("rate_relative_error", std::abs(fit.rate - gap) / gap, 0.05));
  checks.push_back(at_most("rate_z", fit.standard_error > 0 ? std::abs(fit.rate - gap) / fit.standard_error : 0.0,
                           3.0));
  checks.push_back(at_most("pointwise_max_z", worst_z, 4.0));
  return t;
}

CsvTable run_heat_curve(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto top = Configuration::top(s.n);
  const auto exact = heat_mean_curve(top, s.times);
  const auto prof = coordinate_mean_profile(top, s.alpha, s.times, s.reps, s.seed);
  const int mid = s.n / 2;
  CsvTable t({"t", "max_abs_diff", "max_z", "mc_mid", "se_mid", "exact_mid"});
  double worst = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const auto r = Eigen::Index(i);
    const Eigen::VectorXd diff = (prof.mean.row(r) - exact.row(r)).transpose().cwiseAbs();
    double z = 0.0;
    for (Eigen::Index k = 0; k < diff.size(); ++k) {
      z = std::max(z, z_score(diff[k], prof.standard_error(r, k), double(s.n) / double(s.reps)));
    }
    worst = std::max(worst, z);
    t.add({fmt(s.times[i]), fmt(diff.maxCoeff()), fmt(z), fmt(prof.mean(r, mid - 1)),
           fmt(prof.standard_error(r, mid - 1)), fmt(exact(r, mid - 1))});
  }
  checks.push_back(at_most("max_z", worst, 4.0));
  return t;
}

CsvTable run_meanfield(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const double gap = meanfield_gap(s.n, s.alpha);
  const double c0 = double(s.n) * s.n - meanfield_stat_equilibrium(s.n, s.alpha);
  const auto prof = meanfield_decay_profile(s.n, s.alpha, s.times, s.reps, s.seed);
  CsvTable t({"t", "mean_centered_g", "se", "analytic"});
  std::vector<double> means, ses;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    means.push_back(prof.mean(Eigen::Index(i), 0));
    ses.push_back(prof.standard_error(Eigen::Index(i), 0));
    t.add({fmt(s.times[i]), fmt(means.back()), fmt(ses.back()), fmt(c0 * std::exp(-gap * s.times[i]))});
  }
  const auto fit = fit_decay_rate(s.times, means, ses);
  checks.push_back(at_most("rate_relative_error", std::abs(fit.rate - gap) / gap, 0.05));
  return t;
}

CsvTable run_mixing(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto p = mixing_profile(s.n, s.alpha, s.times, s.reps, s.seed);
  CsvTable t({"t", "lower", "lower_se", "upper", "upper_se"});
  double violation = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const auto& lo = p.lower[i];
    const auto& up = p.upper[i];
    violation = std::max(violation, (lo.value - 3 * lo.standard_error) - (up.value + 3 * up.standard_error));
    t.add({fmt(s.times[i]), fmt(lo.value), fmt(lo.standard_error), fmt(up.value), fmt(up.standard_error)});
  }
  checks.push_back(at_most("bracket_violation", violation, 0.0));
  checks.push_back(at_most("lower_monotone_violation", monotone_violation(p.lower), 0.0));
  checks.push_back(at_most("upper_monotone_violation", monotone_violation(p.upper), 0.0));
  return t;
}

CsvTable run_coalesce(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto start = s.start == "top" ? Configuration::top(s.n) : Configuration::bottom(s.n);
  const auto col = tv_upper_coupling_profile(s.n, s.alpha, s.times, start, s.reps, s.seed);
  CsvTable t({"t", "p_not_coalesced", "se"});
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    t.add({fmt(s.times[i]), fmt(col[i].value), fmt(col[i].standard_error)});
  }
  checks.push_back(at_most("monotone_violation", monotone_violation(col), 0.0));
  return t;
}

CsvTable run_beta_scan(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  CsvTable t({"alpha", "l1", "r1", "l2", "r2", "tv", "Q", "ratio"});
  double lo = HUGE_VAL, hi = 0.0;
  for (double a : s.alphas) {
    for (const auto& [I1, I2] : ordered_interval_pairs()) {
      const double tv = beta_interval_tv(a, I1, I2, 1e-10);
      const double Q = sticking_ratio_Q(I1.length(), I2.length(), std::abs(I2.midpoint() - I1.midpoint()));
      const double ratio = tv / Q;
      if (a >= 1.0) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      t.add({fmt(a), fmt(I1.lo), fmt(I1.hi), fmt(I2.lo), fmt(I2.hi), fmt(tv), fmt(Q), fmt(ratio)});
    }
  }
  if (hi > 0.0) {
    checks.push_back(at_most("max_ratio", hi, 20.0));
    checks.push_back(at_least("min_ratio", lo, 1.0 / 20.0));
  }
  return t;
}

CsvTable run_fkg(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto est = fkg_correlation(s.n, s.alpha, s.f, s.g, s.reps, s.seed);
  CsvTable t({"f", "g", "cov", "se", "reps"});
  t.add({s.f, s.g, fmt(est.value), fmt(est.standard_error), std::to_string(est.replicas)});
  checks.push_back(at_least("cov_z", est.standard_error > 0 ? est.value / est.standard_error : 0.0, -3.0));
  return t;
}

CsvTable run_censor(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  std::vector<std::string> header = {"t", "min_z"};
  for (int k = 1; k < s.n; ++k) header.push_back("diff_x" + std::to_string(k));
  for (int k = 1; k < s.n; ++k) header.push_back("se_x" + std::to_string(k));
  CsvTable t(header);
  double worst = HUGE_VAL;
  for (double tt : s.times) {
    const auto d = censoring_domination(s.n, s.alpha, s.K, tt, s.reps, s.seed);
    double row_min = HUGE_VAL;
    for (Eigen::Index k = 0; k < d.difference.size(); ++k) {
      const double se = d.standard_error[k];
      row_min = std::min(row_min, se > 0 ? d.difference[k] / se : 0.0);
    }
    worst = std::min(worst, row_min);
    std::vector<std::string> row = {fmt(tt), fmt(row_min)};
    for (Eigen::Index k = 0; k < d.difference.size(); ++k) row.push_back(fmt(d.difference[k]));
    for (Eigen::Index k = 0; k < d.difference.size(); ++k) row.push_back(fmt(d.standard_error[k]));
    t.add(std::move(row));
  }
  checks.push_back(at_least("min_z", worst, -3.0));
  return t;
}

CsvTable run_separation(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  const auto col = separation_witness_profile(s.n, s.alpha, s.times, s.reps, s.seed);
  const auto eq = separation_equilibrium(s.n, s.alpha, s.reps, s.seed);
  CsvTable t({"t", "p", "se", "equilibrium_p"});
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    t.add({fmt(s.times[i]), fmt(col[i].value), fmt(col[i].standard_error), fmt(eq.value)});
  }
  checks.push_back(at_most("monotone_violation", monotone_violation(col), 0.0));
  return t;
}

CsvTable run_wilson(const ExperimentSpec& s, std::vector<CheckResult>& checks)
{
  std::vector<int> modes;
  for (int j = 1; j <= std::min(3, s.n - 1); ++j) modes.push_back(j);
  const auto w = wilson_moments(s.n, s.alpha, modes, s.times, s.reps, s.seed);
  const double n3 = double(s.n) * s.n * s.n;
  std::vector<std::string> header = {"t", "mean_f1", "var_f1"};
  for (int j : modes) header.push_back("scaled_var_f" + std::to_string(j));
  CsvTable t(header);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::vector<std::string> row = {fmt(s.times[i]), fmt(w.moments[i][0].mean.value),
                                    fmt(w.moments[i][0].variance.value)};
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const double scaled = w.moments[i][j].variance.value * modes[j] * modes[j] / n3;
      worst = std::max(worst, scaled);
      row.push_back(fmt(scaled));
    }
    t.add(std::move(row));
  }
  checks.push_back(at_most("max_scaled_variance", worst, 1.0));
  return t;
}

}  // namespace

RunReport run(const ExperimentSpec& spec)
{
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.spec = spec;
  report.version = software_version();

  CsvTable table = [&] {
    switch (spec.kind) {
      case ExperimentKind::gap_decay: return run_gap_decay(spec, report.checks);
      case ExperimentKind::heat_curve: return run_heat_curve(spec, report.checks);
      case ExperimentKind::meanfield_gap: return run_meanfield(spec, report.checks);
      case ExperimentKind::mixing_profile: return run_mixing(spec, report.checks);
      case ExperimentKind::coalesce: return run_coalesce(spec, report.checks);
      case ExperimentKind::beta_tv_scan: return run_beta_scan(spec, report.checks);
      case ExperimentKind::fkg: return run_fkg(spec, report.checks);
      case ExperimentKind::censor_dominate: return run_censor(spec, report.checks);
      case ExperimentKind::separation: return run_separation(spec, report.checks);
      case ExperimentKind::wilson_moments: return run_wilson(spec, report.checks);
    }
    throw SimplexError("unhandled experiment kind");
  }();

  const std::filesystem::path dir(spec.outdir);
  std::filesystem::create_directories(dir);
  const auto csv = dir / (to_string(spec.kind) + ".csv");
  table.write(csv);
  report.tables.push_back(csv);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  nlohmann::ordered_json j;
  j["spec"] = spec_entries(spec);
  j["tables"] = nlohmann::json::array();
  for (const auto& p : report.tables) j["tables"].push_back(p.string());
  j["version"] = report.version;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["checks"] = nlohmann::ordered_json::object();
  for (const auto& c : report.checks) {
    j["checks"][c.name] = {{"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
  }
  report.summary = dir / "summary.json";
  std::ofstream out(report.summary);
  if (!out) throw SimplexError("cannot write " + report.summary.string());
  out << j.dump(2) << "\n";
  return report;
}

}  // namespace simplexwalk
