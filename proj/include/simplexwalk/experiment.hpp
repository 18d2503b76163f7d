#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace simplexwalk {

enum class ExperimentKind {
  gap_decay,
  heat_curve,
  meanfield_gap,
  mixing_profile,
  coalesce,
  beta_tv_scan,
  fkg,
  censor_dominate,
  separation,
  wilson_moments,
};

/// Names as they appear in spec files ("gap-decay", ...), in enum order.
const std::vector<std::string>& experiment_kind_names();
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Declarative description of one run.
///
/// Spec files are flat `key = value` lines; `#` starts a comment and an
/// optional `[kind]` header line sets the kind. Keys:
///   kind, n, alpha, alphas, times, linspace, reps, K, seed, outdir, f, g, start
/// `times` is a comma list, `linspace` a `start,stop,count` triple; both fill
/// the time grid. Missing grids get a kind-specific default derived from n.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::gap_decay;
  int n = 0;
  double alpha = 1.0;
  std::vector<double> alphas;  // beta-tv-scan only
  std::vector<double> times;
  std::uint64_t reps = 1000;
  int K = 0;
  std::uint64_t seed = 1;
  std::string outdir = "out";
  std::string f = "x1";  // fkg
  std::string g;          // fkg, defaults to x{N-1}
  std::string start = "top";  // coalesce: top | bottom

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

using SpecEntries = std::map<std::string, std::string>;

/// Parse `key = value` text into raw entries. Throws on malformed lines and
/// duplicate keys.
SpecEntries parse_spec_entries(const std::string& text);

/// Build a spec from raw entries, flags overriding file values. Rejects
/// unknown keys, type mismatches and missing required fields, naming the key.
ExperimentSpec parse_spec(const SpecEntries& file, const SpecEntries& overrides = {});
ExperimentSpec parse_spec_file(const std::filesystem::path& path, const SpecEntries& overrides = {});

/// Every field as a raw entry; parse_spec(spec_entries(s)) == s.
SpecEntries spec_entries(const ExperimentSpec& spec);
std::string spec_text(const ExperimentSpec& spec);

/// Parse `--key=value` arguments.
SpecEntries parse_overrides(const std::vector<std::string>& args);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RunReport {
  ExperimentSpec spec;
  std::vector<std::filesystem::path> tables;
  std::filesystem::path summary;
  double elapsed_seconds = 0.0;
  std::string version;
  std::vector<CheckResult> checks;
};

std::string software_version();

/// Execute the spec, write `<outdir>/<kind>.csv` and `<outdir>/summary.json`.
RunReport run(const ExperimentSpec& spec);

/// Format a double with 17 significant digits, '.' decimal point.
std::string format_double(double v);

}  // namespace simplexwalk
