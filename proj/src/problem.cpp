#include "evp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "evp/errors.hpp"
#include "evp/oracle.hpp"

namespace evp {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw SpecError("problem field '" + field + "': " + why);
}

const json& need(const json& j, const std::string& key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) bad_field(ctx + "." + key, "missing");
  return *it;
}

double need_number(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) bad_field(ctx + "." + key, "must be a number");
  return v.get<double>();
}

std::vector<double> parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) bad_field(field, "must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) bad_field(field, "must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

MetricSpace parse_space(const json& j) {
  if (!j.is_object()) bad_field("space", "must be an object");
  const json& kind = need(j, "kind", "space");
  const double scale = j.value("metric_scale", 1.0);
  if (kind == "finite") {
    const json& dj = need(j, "dist", "space");
    if (!dj.is_array()) bad_field("space.dist", "must be a matrix (array of rows)");
    std::vector<std::vector<double>> dist;
    for (std::size_t i = 0; i < dj.size(); ++i) {
      dist.push_back(parse_vector(dj[i], "space.dist[" + std::to_string(i) + "]"));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
    }
    try {
      return MetricSpace::finite(std::move(labels), std::move(dist), scale);
    } catch (const DomainError& e) {
      bad_field("space.dist", e.what());
    }
  }
  if (kind == "normed") {
    const json& dimj = need(j, "dim", "space");
    if (!dimj.is_number_integer() || dimj.get<int>() < 1) {
      bad_field("space.dim", "must be a positive integer");
    }
    const json& nj = need(j, "norm", "space");
    return MetricSpace::normed(dimj.get<int>(), norm_kind_from_string(nj.get<std::string>()),
                               scale);
  }
  bad_field("space.kind", "must be 'finite' or 'normed'");
}

std::vector<double> center_param(const json& params, int dim) {
  if (params.contains("center")) return parse_vector(params.at("center"), "functional.params.center");
  return std::vector<double>(dim, 0.0);
}

Functional parse_functional(const json& j, const MetricSpace& space) {
  if (!j.is_object()) bad_field("functional", "must be an object");
  const std::string name = need(j, "name", "functional").get<std::string>();
  const json params = j.value("params", json::object());

  if (name == "table") {
    if (!space.is_finite()) bad_field("functional", "'table' requires a finite space");
    const json& vj = need(j, "values", "functional");
    if (!vj.is_array()) bad_field("functional.values", "must be an array");
    std::vector<ExtReal> values;
    for (const auto& e : vj) {
      if (e.is_string() && e.get<std::string>() == "inf") {
        values.push_back(ExtReal::infinity());
      } else if (e.is_number()) {
        values.push_back(ExtReal(e.get<double>()));
      } else {
        bad_field("functional.values", "entries must be numbers or \"inf\"");
      }
    }
    if (static_cast<int>(values.size()) != space.point_count()) {
      bad_field("functional.values", "length must equal the number of points");
    }
    const json& lbj = need(j, "lower_bound", "functional");
    if (!lbj.is_number()) bad_field("functional.lower_bound", "must be a number");
    try {
      return zoo::table(std::move(values), lbj.get<double>());
    } catch (const Error& e) {
      bad_field("functional.values", e.what());
    }
  }

  if (space.is_finite()) bad_field("functional", "'" + name + "' requires a normed space");
  const int dim = space.dim();
  if (name == "constant") return zoo::constant(params.value("value", 0.0));
  if (name == "quadratic") return zoo::quadratic(center_param(params, dim));
  if (name == "quartic") return zoo::quartic(center_param(params, dim));
  if (name == "rosenbrock") {
    if (dim < 2) bad_field("functional", "'rosenbrock' requires dim >= 2");
    return zoo::rosenbrock(dim);
  }
  if (name == "abs_sum") return zoo::abs_sum(center_param(params, dim));
  if (name == "boxed_quadratic") {
    if (!params.contains("lo") || !params.contains("hi")) {
      bad_field("functional.params", "'boxed_quadratic' requires lo and hi");
    }
    return zoo::boxed_quadratic(params.value("coeff", 1.0), center_param(params, dim),
                                parse_vector(params.at("lo"), "functional.params.lo"),
                                parse_vector(params.at("hi"), "functional.params.hi"));
  }
  bad_field("functional.name", "unknown functional '" + name + "'");
}

Point parse_point(const json& j, const MetricSpace& space, const std::string& field) {
  if (space.is_finite()) {
    if (!j.is_number_integer()) bad_field(field, "must be a point index on finite spaces");
    const int i = j.get<int>();
    if (i < 0 || i >= space.point_count()) bad_field(field, "point index out of range");
    return Point::finite(i);
  }
  std::vector<double> coords = parse_vector(j, field);
  if (static_cast<int>(coords.size()) != space.dim()) {
    bad_field(field, "coordinate length must equal space dim");
  }
  return Point::normed(std::move(coords));
}

SolverConfig parse_solver(const json& j, double epsilon) {
  SolverConfig cfg;
  cfg.epsilon = epsilon;
  if (j.is_null()) return cfg;
  if (!j.is_object()) bad_field("solver", "must be an object");
  if (j.contains("max_iters")) {
    cfg.max_iters = j.at("max_iters").get<int>();
    if (cfg.max_iters < 1) bad_field("solver.max_iters", "must be >= 1");
  }
  if (j.contains("step_tolerance") && !j.at("step_tolerance").is_null()) {
    cfg.step_tolerance = j.at("step_tolerance").get<double>();
  }
  if (j.contains("sampler")) {
    const json& sj = j.at("sampler");
    const std::string kind = need(sj, "kind", "solver.sampler").get<std::string>();
    if (kind == "exhaustive") {
      cfg.sampler = SamplerKind::Exhaustive;
    } else if (kind == "local_ball") {
      cfg.sampler = SamplerKind::LocalBall;
      cfg.ball.radius_factor = sj.value("radius_factor", cfg.ball.radius_factor);
      cfg.ball.samples_per_iter = sj.value("samples_per_iter", cfg.ball.samples_per_iter);
      cfg.ball.seed = sj.value("seed", cfg.ball.seed);
    } else {
      bad_field("solver.sampler.kind", "must be 'exhaustive' or 'local_ball'");
    }
  }
  return cfg;
}

}  // namespace

namespace {

ProblemSpec load_problem_impl(const json& j, const std::string& name);

}  // namespace

ProblemSpec load_problem(const json& j, const std::string& name) {
  try {
    return load_problem_impl(j, name);
  } catch (const json::exception& e) {
    // Wrong JSON types surface as malformed-document errors, never as raw
    // library exceptions.
    throw SpecError(std::string("malformed problem document: ") + e.what());
  }
}

namespace {

ProblemSpec load_problem_impl(const json& j, const std::string& name) {
  if (!j.is_object()) throw SpecError("problem document must be a JSON object");
  MetricSpace space = parse_space(need(j, "space", "problem"));
  Functional functional = parse_functional(need(j, "functional", "problem"), space);
  Point start = parse_point(need(j, "start", "problem"), space, "start");
  const double epsilon = need_number(j, "epsilon", "problem");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) bad_field("epsilon", "must be positive");

  ProblemSpec spec{.name = j.value("name", name),
                   .space = std::move(space),
                   .functional = std::move(functional),
                   .start = start,
                   .epsilon = epsilon,
                   .mode = CertMode::Standard,
                   .solver = parse_solver(j.value("solver", json()), epsilon),
                   .cert = CertOptions{},
                   .evaluate_at = std::nullopt,
                   .expect = j.value("expect", std::string())};
  if (j.contains("mode")) {
    try {
      spec.mode = cert_mode_from_string(j.at("mode").get<std::string>());
    } catch (const SpecError& e) {
      bad_field("mode", e.what());
    }
  }
  if (j.contains("certificate")) {
    const json& cj = j.at("certificate");
    spec.cert.c3_samples = cj.value("samples", spec.cert.c3_samples);
    spec.cert.directions = cj.value("directions", spec.cert.directions);
    spec.cert.seed = cj.value("seed", spec.cert.seed);
  }
  if (j.contains("evaluate_at")) {
    spec.evaluate_at = parse_point(j.at("evaluate_at"), spec.space, "evaluate_at");
  }
  if (!spec.expect.empty() && spec.expect != "pass" && spec.expect != "partial" &&
      spec.expect != "fail" && spec.expect != "rejected" && spec.expect != "invalid") {
    bad_field("expect", "must be pass, partial, fail, rejected or invalid");
  }
  return spec;
}

}  // namespace

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return load_problem(j, std::filesystem::path(path).stem().string());
}

void apply_overrides(ProblemSpec& spec, const RunOverrides& o) {
  if (o.epsilon) {
    spec.epsilon = *o.epsilon;
    spec.solver.epsilon = *o.epsilon;
  }
  if (o.mode) spec.mode = *o.mode;
  if (o.seed) {
    spec.cert.seed = *o.seed;
    spec.solver.ball.seed = *o.seed;
  }
  if (o.samples) spec.cert.c3_samples = *o.samples;
}

RunOutcome run_problem(const ProblemSpec& spec) {
  const MetricSpace& s = spec.space;
  const Functional& f = spec.functional;
  const double eps = spec.epsilon;
  SolverConfig cfg = spec.solver;
  cfg.epsilon = eps;

  RunOutcome out{.u = spec.start,
                 .v = spec.start,
                 .trace = {},
                 .certificate = {},
                 .oracle = std::nullopt};

  if (spec.evaluate_at) {
    // Certificate-only mode: verify the designated point as-is.
    out.v = *spec.evaluate_at;
    out.trace.points = {out.v};
    out.trace.values = {f.evaluate(out.v).finite_value()};
    out.trace.terminated_by = Termination::Stationary;
    out.trace.effective_epsilon =
        spec.mode == CertMode::SecondOrder ? eps * eps : eps;
  } else {
    SolveResult res = [&] {
      switch (spec.mode) {
        case CertMode::SecondOrder:
          return run_second_order(f, s, spec.start, cfg);
        case CertMode::RemarkRescaled: {
          const double fu = f.evaluate(spec.start).finite_value();
          if (!(fu < f.lower_bound() + eps * eps)) {
            std::ostringstream os;
            os << "rescaled mode: hypothesis F(u) < lower_bound + eps^2 fails: " << fu
               << " >= " << f.lower_bound() << " + " << eps * eps;
            throw RejectedStart(os.str());
          }
          const MetricSpace scaled = s.with_metric_scale(s.metric_scale() * std::sqrt(eps));
          SolverConfig c = cfg;
          c.skip_hypothesis_check = true;
          return run(f, scaled, spec.start, c);
        }
        case CertMode::Standard:
        default:
          return run(f, s, spec.start, cfg);
      }
    }();
    out.v = res.v;
    out.trace = std::move(res.trace);
  }

  out.certificate =
      make_certificate(f, s, out.u, out.v, eps, spec.mode, &out.trace, spec.cert);

  if (s.is_finite()) {
    OracleReport rep;
    switch (spec.mode) {
      case CertMode::SecondOrder: rep.level = eps * eps; break;
      case CertMode::RemarkRescaled: rep.level = std::pow(eps, 1.5); break;
      default: rep.level = eps; break;
    }
    rep.ekeland_set = oracle::ekeland_set(f, s, rep.level);
    const auto [inf_v, inf_p] = oracle::exact_inf(f, s);
    rep.inf_value = inf_v;
    rep.inf_index = inf_p.index();
    const bool in_set =
        std::find(rep.ekeland_set.begin(), rep.ekeland_set.end(), out.v.index()) !=
        rep.ekeland_set.end();
    const double fu = f.evaluate(out.u).finite_value();
    const double fv = f.evaluate(out.v).finite_value();
    const double d_bound = spec.mode == CertMode::RemarkRescaled ? std::sqrt(eps) : 1.0;
    rep.verified = in_set && fv <= fu && s.distance(out.u, out.v) <= d_bound;
    out.oracle = rep;
  }
  return out;
}

// --- serialization ----------------------------------------------------------

namespace {

json number_or_token(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? json("inf") : json("-inf");
}

double number_from_token(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SpecError("expected a number or inf token");
}

json point_to_json(const Point& p) {
  if (p.is_index()) return p.index();
  return json(p.coords());
}

Point point_from_json(const json& j) {
  if (j.is_number_integer()) return Point::finite(j.get<int>());
  std::vector<double> coords;
  for (const auto& e : j) coords.push_back(e.get<double>());
  return Point::normed(std::move(coords));
}

json witness_to_json(const CertWitness& w) {
  json j = json::object();
  if (w.point) j["point"] = point_to_json(*w.point);
  if (w.direction) j["direction"] = *w.direction;
  j["value"] = number_or_token(w.value);
  return j;
}

CertWitness witness_from_json(const json& j) {
  CertWitness w;
  if (j.contains("point")) w.point = point_from_json(j.at("point"));
  if (j.contains("direction")) {
    std::vector<double> d;
    for (const auto& e : j.at("direction")) d.push_back(e.get<double>());
    w.direction = std::move(d);
  }
  w.value = number_from_token(j.at("value"));
  return w;
}

}  // namespace

json certificate_to_json(const Certificate& cert, const std::optional<OracleReport>& oracle) {
  json items = json::array();
  for (const CertItem& it : cert.items) {
    json ij = json::object();
    ij["id"] = it.id;
    ij["status"] = to_string(it.status);
    ij["margin"] = number_or_token(it.margin);
    if (it.samples > 0) ij["samples"] = it.samples;
    if (!it.witnesses.empty()) ij["worst_witness"] = witness_to_json(it.witnesses.front());
    if (!it.note.empty()) ij["note"] = it.note;
    if (!it.metrics.empty()) {
      json mj = json::object();
      for (const auto& [k, v] : it.metrics) mj[k] = number_or_token(v);
      ij["metrics"] = mj;
    }
    items.push_back(std::move(ij));
  }
  json j = json::object();
  j["mode"] = to_string(cert.mode);
  j["epsilon"] = cert.epsilon;
  j["items"] = std::move(items);
  j["overall"] = to_string(cert.overall);
  if (oracle) {
    json oj = json::object();
    oj["verified"] = oracle->verified;
    oj["level"] = oracle->level;
    oj["ekeland_set"] = oracle->ekeland_set;
    oj["inf_value"] = oracle->inf_value;
    oj["inf_index"] = oracle->inf_index;
    j["oracle"] = std::move(oj);
  }
  return j;
}

Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.mode = cert_mode_from_string(j.at("mode").get<std::string>());
  cert.epsilon = j.at("epsilon").get<double>();
  cert.overall = cert_overall_from_string(j.at("overall").get<std::string>());
  for (const auto& ij : j.at("items")) {
    CertItem it;
    it.id = ij.at("id").get<std::string>();
    it.status = cert_status_from_string(ij.at("status").get<std::string>());
    it.margin = number_from_token(ij.at("margin"));
    it.samples = ij.value("samples", 0);
    if (ij.contains("worst_witness")) it.witnesses.push_back(witness_from_json(ij.at("worst_witness")));
    it.note = ij.value("note", std::string());
    if (ij.contains("metrics")) {
      for (const auto& [k, v] : ij.at("metrics").items()) {
        it.metrics.emplace_back(k, number_from_token(v));
      }
    }
    cert.items.push_back(std::move(it));
  }
  return cert;
}

json trace_to_json(const IterationTrace& trace) {
  json points = json::array();
  for (const Point& p : trace.points) points.push_back(point_to_json(p));
  json j = json::object();
  j["points"] = std::move(points);
  j["values"] = trace.values;
  j["step_dists"] = trace.step_dists;
  j["inf_estimates"] = trace.inf_estimates;
  j["terminated_by"] = to_string(trace.terminated_by);
  return j;
}

IterationTrace trace_from_json(const json& j) {
  IterationTrace t;
  for (const auto& pj : j.at("points")) t.points.push_back(point_from_json(pj));
  t.values = j.at("values").get<std::vector<double>>();
  t.step_dists = j.at("step_dists").get<std::vector<double>>();
  t.inf_estimates = j.at("inf_estimates").get<std::vector<double>>();
  t.terminated_by = termination_from_string(j.at("terminated_by").get<std::string>());
  return t;
}

double worst_margin(const Certificate& cert) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& it : cert.items) {
    if (it.status == CertStatus::NotApplicable) continue;
    worst = std::min(worst, it.margin);
  }
  return worst;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

// --- batch front end ---------------------------------------------------------

namespace {

struct SingleResult {
  std::string outcome;  // pass/partial/fail/rejected/invalid
  double worst = 0.0;
  int exit_code = 3;
  std::string message;
};

SingleResult run_one(const std::string& spec_path, const std::string& out_dir,
                     const RunOverrides& overrides, const std::string& stem) {
  SingleResult r;
  try {
    ProblemSpec spec = load_problem_file(spec_path);
    apply_overrides(spec, overrides);
    RunOutcome out = run_problem(spec);
    r.worst = worst_margin(out.certificate);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::string prefix =
          out_dir + "/" + (stem.empty() ? std::string() : stem + ".");
      write_file_atomic(prefix + "certificate.json",
                        certificate_to_json(out.certificate, out.oracle).dump(2) + "\n");
      write_file_atomic(prefix + "trace.json", trace_to_json(out.trace).dump(2) + "\n");
    }
    const bool oracle_ok = !out.oracle || out.oracle->verified ||
                           out.certificate.overall != CertOverall::Pass;
    switch (out.certificate.overall) {
      case CertOverall::Pass:
        r.outcome = oracle_ok ? "pass" : "fail";
        break;
      case CertOverall::Partial: r.outcome = "partial"; break;
      case CertOverall::Fail: r.outcome = "fail"; break;
    }
    if (r.outcome == "pass") {
      r.exit_code = 0;
    } else if (r.outcome == "partial") {
      r.exit_code = overrides.allow_partial ? 0 : 1;
    } else {
      r.exit_code = 1;
    }
  } catch (const RejectedStart& e) {
    r.outcome = "rejected";
    r.exit_code = 2;
    r.message = e.what();
  } catch (const Error& e) {
    r.outcome = "invalid";
    r.exit_code = 3;
    r.message = e.what();
  }
  return r;
}

// Declared expectation of a fixture, readable even when the problem body
// fails validation.
std::string read_expect(const std::string& path) {
  std::ifstream in(path);
  if (!in) return "pass";
  try {
    json j;
    in >> j;
    const std::string e = j.value("expect", std::string("pass"));
    return e.empty() ? "pass" : e;
  } catch (const json::exception&) {
    return "pass";
  }
}

}  // namespace

int run_problem_file(const std::string& spec_path, const std::string& out_dir,
                     const RunOverrides& overrides, std::ostream& log, const std::string& stem) {
  SingleResult r = run_one(spec_path, out_dir, overrides, stem);
  log << spec_path << ": " << r.outcome;
  if (r.outcome == "pass" || r.outcome == "partial" || r.outcome == "fail") {
    log << " (worst margin " << r.worst << ")";
  }
  if (!r.message.empty()) log << ": " << r.message;
  log << "\n";
  return r.exit_code;
}

int run_suite(const std::string& dir, const std::string& out_dir, const RunOverrides& overrides,
              std::ostream& log, std::vector<SuiteRow>* rows_out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    log << "suite: '" << dir << "' is not a directory\n";
    return 3;
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    log << "suite: no problem files in '" << dir << "'\n";
    return 3;
  }

  bool all_ok = true;
  log << std::left;
  for (const std::string& path : files) {
    SuiteRow row;
    row.name = fs::path(path).stem().string();
    row.expected = read_expect(path);
    SingleResult r = run_one(path, out_dir, overrides, row.name);
    row.outcome = r.outcome;
    row.worst_margin = r.worst;
    row.ok = row.outcome == row.expected;
    all_ok = all_ok && row.ok;
    std::ostringstream margin;
    if (row.outcome == "pass" || row.outcome == "partial" || row.outcome == "fail") {
      margin << std::setprecision(6) << row.worst_margin;
    } else {
      margin << "-";
    }
    log << std::setw(32) << row.name << std::setw(10) << row.outcome << " worst margin "
        << std::setw(14) << margin.str() << (row.ok ? "ok" : "UNEXPECTED (wanted " + row.expected + ")")
        << "\n";
    if (rows_out) rows_out->push_back(std::move(row));
  }
  log << (all_ok ? "suite: all expectations met\n" : "suite: unexpected outcomes\n");
  return all_ok ? 0 : 1;
}

}  // namespace evp
