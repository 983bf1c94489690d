#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evp/certificate.hpp"
#include "evp/functional.hpp"
#include "evp/point.hpp"
#include "evp/solver.hpp"
#include "evp/space.hpp"

namespace evp {

/// One self-contained problem: space + functional + start point + epsilon
/// + solver and certificate configuration. Loaded from a single JSON
/// document so fixture suites stay auditable.
struct ProblemSpec {
  std::string name;
  MetricSpace space;
  Functional functional;
  Point start;
  double epsilon = 0.1;
  CertMode mode = CertMode::Standard;
  SolverConfig solver;
  CertOptions cert;
  // When set, the solver is skipped and this point is certified directly
  // (used by negative-control fixtures).
  std::optional<Point> evaluate_at;
  std::string expect;  // "", "pass", "partial", "fail", "rejected", "invalid"
};

/// CLI-level overrides applied on top of the problem file.
struct RunOverrides {
  std::optional<double> epsilon;
  std::optional<CertMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  bool allow_partial = false;
};

struct OracleReport {
  bool verified = false;
  double level = 0.0;  // perturbation coefficient the set was computed at
  std::vector<int> ekeland_set;
  double inf_value = 0.0;
  int inf_index = -1;
};

struct RunOutcome {
  Point u;
  Point v;
  IterationTrace trace;
  Certificate certificate;
  std::optional<OracleReport> oracle;
};

ProblemSpec load_problem(const nlohmann::json& j, const std::string& name = "problem");
ProblemSpec load_problem_file(const std::string& path);
void apply_overrides(ProblemSpec& spec, const RunOverrides& o);

/// Solve (or certify evaluate_at directly) and verify. Throws RejectedStart
/// when the approximate-minimizer hypothesis fails, SpecError/DomainError on
/// invalid problems.
RunOutcome run_problem(const ProblemSpec& spec);

// --- report serialization -------------------------------------------------

nlohmann::json certificate_to_json(const Certificate& cert,
                                   const std::optional<OracleReport>& oracle = std::nullopt);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const IterationTrace& trace);
IterationTrace trace_from_json(const nlohmann::json& j);

/// Worst margin across applicable items (+inf when none are applicable).
double worst_margin(const Certificate& cert);

/// Atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

// --- batch front end -------------------------------------------------------

/// Exit codes: 0 pass (or partial with allow_partial), 1 fail, 2 hypothesis
/// rejected, 3 malformed problem file. Writes certificate.json and
/// trace.json under out_dir (prefixed by the problem stem when given).
int run_problem_file(const std::string& spec_path, const std::string& out_dir,
                     const RunOverrides& overrides, std::ostream& log,
                     const std::string& stem = "");

struct SuiteRow {
  std::string name;
  std::string outcome;   // pass/partial/fail/rejected/invalid
  std::string expected;  // same vocabulary, default "pass"
  double worst_margin = 0.0;
  bool ok = false;
};

/// Runs every *.json under dir (sorted by filename). Returns 0 when every
/// outcome matches its expectation, 1 otherwise, 3 for an empty or missing
/// directory.
int run_suite(const std::string& dir, const std::string& out_dir, const RunOverrides& overrides,
              std::ostream& log, std::vector<SuiteRow>* rows_out = nullptr);

}  // namespace evp
