#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evp/errors.hpp"
#include "evp/problem.hpp"

using namespace evp;
using nlohmann::json;

namespace {

const std::string kFixtures = std::string(EVP_FIXTURE_DIR);

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  json j;
  in >> j;
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("problem loading and validation diagnostics") {
  ProblemSpec spec = load_problem_file(kFixtures + "/f1_start4.json");
  CHECK(spec.name == "f1_start4");
  CHECK(spec.epsilon == 0.4);
  CHECK(spec.space.point_count() == 5);
  CHECK(spec.start == Point::finite(4));

  auto expect_spec_error = [](json j, const std::string& needle) {
    try {
      load_problem(j);
      FAIL_CHECK("expected SpecError mentioning '" << needle << "'");
    } catch (const SpecError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  json base = read_json(kFixtures + "/f1_start4.json");
  json j = base;
  j.erase("epsilon");
  expect_spec_error(j, "epsilon");

  j = base;
  j["space"]["dist"][0][1] = 9.0;  // asymmetric
  expect_spec_error(j, "space.dist");

  j = base;
  j["functional"]["name"] = "no_such_zoo_member";
  expect_spec_error(j, "functional");

  j = base;
  j["start"] = 17;
  expect_spec_error(j, "start");

  j = base;
  j["functional"]["values"] = {1.0, 2.0};
  expect_spec_error(j, "values");

  j = base;
  j["expect"] = "maybe";
  expect_spec_error(j, "expect");

  // wrong-typed values anywhere surface as malformed-document errors
  j = base;
  j["name"] = nullptr;
  expect_spec_error(j, "malformed");
  j = base;
  j["solver"] = {{"max_iters", "many"}};
  expect_spec_error(j, "malformed");
  j = base;
  j["space"]["dist"][1] = json::array();  // ragged row
  expect_spec_error(j, "space.dist");
}

TEST_CASE("run_problem on the F1 fixture verifies against the oracle") {
  ProblemSpec spec = load_problem_file(kFixtures + "/f1_start4.json");
  RunOutcome out = run_problem(spec);
  CHECK(out.certificate.overall == CertOverall::Pass);
  REQUIRE(out.oracle.has_value());
  CHECK(out.oracle->verified);
  CHECK(out.oracle->inf_value == 1.0);
  CHECK(out.oracle->inf_index == 1);
  CHECK(out.oracle->ekeland_set == std::vector<int>{1, 4});
}

TEST_CASE("report JSON round-trips field-for-field") {
  ProblemSpec spec = load_problem_file(kFixtures + "/quad_standard.json");
  RunOutcome out = run_problem(spec);

  const json cj = certificate_to_json(out.certificate);
  Certificate parsed = certificate_from_json(cj);
  CHECK(certificate_to_json(parsed).dump() == cj.dump());

  const json tj = trace_to_json(out.trace);
  IterationTrace t2 = trace_from_json(tj);
  CHECK(trace_to_json(t2).dump() == tj.dump());
}

TEST_CASE("exit codes and report files") {
  const std::string out_dir =
      (std::filesystem::temp_directory_path() / "evp_test_reports").string();
  std::filesystem::remove_all(out_dir);
  std::ostringstream log;
  RunOverrides o;

  CHECK(run_problem_file(kFixtures + "/f1_start4.json", out_dir, o, log) == 0);
  CHECK(std::filesystem::exists(out_dir + "/certificate.json"));
  CHECK(std::filesystem::exists(out_dir + "/trace.json"));
  const json cert = read_json(out_dir + "/certificate.json");
  CHECK(cert.at("overall") == "pass");
  CHECK(cert.at("oracle").at("verified") == true);

  CHECK(run_problem_file(kFixtures + "/f1_reject.json", out_dir, o, log) == 2);
  CHECK(run_problem_file(kFixtures + "/f1_neg_argmax.json", out_dir, o, log) == 1);
  CHECK(run_problem_file(kFixtures + "/invalid_asym.json", out_dir, o, log) == 3);
  CHECK(run_problem_file(kFixtures + "/no_such_file.json", out_dir, o, log) == 3);

  // partial needs --allow-partial to exit 0
  CHECK(run_problem_file(kFixtures + "/quad_standard.json", out_dir, o, log) == 1);
  o.allow_partial = true;
  CHECK(run_problem_file(kFixtures + "/quad_standard.json", out_dir, o, log) == 0);
}

TEST_CASE("suite runs the bundled fixtures and meets every expectation") {
  std::ostringstream log;
  std::vector<SuiteRow> rows;
  const int code = run_suite(kFixtures, "", RunOverrides{}, log, &rows);
  INFO(log.str());
  CHECK(code == 0);
  CHECK(rows.size() >= 14);
  int negatives = 0;
  for (const auto& row : rows) {
    CHECK(row.ok);
    if (row.expected == "fail") ++negatives;
  }
  CHECK(negatives >= 5);

  const int empty = run_suite((std::filesystem::temp_directory_path() / "evp_empty").string(),
                              "", RunOverrides{}, log);
  CHECK(empty == 3);
}

TEST_CASE("reports are byte-identical across repeated runs") {
  for (const char* name : {"/f1_start4.json", "/quad_standard.json"}) {
    ProblemSpec spec = load_problem_file(kFixtures + name);
    RunOutcome a = run_problem(spec);
    RunOutcome b = run_problem(spec);
    CHECK(certificate_to_json(a.certificate, a.oracle).dump(2) ==
          certificate_to_json(b.certificate, b.oracle).dump(2));
    CHECK(trace_to_json(a.trace).dump(2) == trace_to_json(b.trace).dump(2));
  }
}

TEST_CASE("seed override leaves exhaustive finite results unchanged") {
  ProblemSpec spec = load_problem_file(kFixtures + "/f1_start4.json");
  RunOverrides o;
  o.seed = 12345;
  ProblemSpec other = load_problem_file(kFixtures + "/f1_start4.json");
  apply_overrides(other, o);
  RunOutcome a = run_problem(spec);
  RunOutcome b = run_problem(other);
  CHECK(certificate_to_json(a.certificate, a.oracle).dump() ==
        certificate_to_json(b.certificate, b.oracle).dump());
  CHECK(trace_to_json(a.trace).dump() == trace_to_json(b.trace).dump());
}

TEST_CASE("metric_scale is honored from the problem document") {
  json j = read_json(kFixtures + "/neg_quad_grad.json");
  j["space"]["metric_scale"] = 2.0;
  ProblemSpec spec = load_problem(j);
  CHECK(spec.space.metric_scale() == 2.0);
  CHECK(spec.space.distance(Point::normed({0.0, 0.0}), Point::normed({3.0, 4.0})) == 10.0);
}

TEST_CASE("rescaled mode enforces the strict hypothesis") {
  // F(u) = 0.09 >= eps^2 = 0.01: rejected before any descent
  json j = read_json(kFixtures + "/quad_standard.json");
  j["mode"] = "remark_rescaled";
  ProblemSpec spec = load_problem(j);
  CHECK_THROWS_AS(run_problem(spec), RejectedStart);

  // boundary case: equality is not "strictly below"
  j["start"] = {0.1, 0.0};  // F(u) = eps^2 exactly
  CHECK_THROWS_AS(run_problem(load_problem(j)), RejectedStart);
}

TEST_CASE("atomic writes leave no temp file behind") {
  const auto dir = std::filesystem::temp_directory_path() / "evp_atomic";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.json").string();
  write_file_atomic(path, "{}\n");
  CHECK(slurp(path) == "{}\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}
