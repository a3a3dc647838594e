/*
 * Copyright 2026 The mpband Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pipeline.hpp"

using namespace mpband;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mpband_pipeline_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig base(const char* potential, const std::string& out) {
  RunConfig c;
  c.potential_path = oracle::data(potential);
  c.out_dir = scratch(out);
  c.solver.t_samples = 21;
  c.solver.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("verify lists") {
  CHECK(parse_verify_list("all") == verdict_names());
  CHECK(parse_verify_list("none").empty());
  CHECK(parse_verify_list("theorem1,corollary2") == std::set<std::string>{"theorem1", "corollary2"});
  CHECK_THROWS_AS(parse_verify_list("theorem9"), Error);
}

TEST_CASE("free potential: CSV of (2 pi k + t)^2 and no gaps") {
  RunConfig c = base("free_m1.json", "free");
  c.solver.n_bands = 6;
  c.verify = {};
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  std::istringstream csv(slurp(c.out_dir / "bands.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,n,lambda");
  int rows = 0;
  std::map<double, std::vector<double>> by_t;
  while (std::getline(csv, line)) {
    double t, lambda;
    int n;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%d,%lf", &t, &n, &lambda) == 3);
    by_t[t].push_back(lambda);
    ++rows;
  }
  CHECK(rows == 21 * 6);
  for (const auto& [t, values] : by_t) {
    const auto want = oracle::free_levels(t, 5, 1);
    for (size_t i = 0; i < values.size(); ++i) CHECK(std::abs(values[i] - want[i]) < 1e-8 * std::max(1.0, want[i]));
  }
  const auto gaps = nlohmann::json::parse(slurp(c.out_dir / "gaps.json"));
  CHECK(gaps["gaps"].empty());
  CHECK(r.report["verdicts"]["theorem1"]["outcome"] == "skipped");
}

TEST_CASE("constant potential: no gaps and theorem 1 passes") {
  RunConfig c = base("constant_swap.json", "constant");
  c.verify = {"theorem1"};
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["gaps"].empty());
  CHECK(r.report["verdicts"]["theorem1"]["outcome"] == "pass");
  CHECK(r.manifest["asymptotics"]["c1"] == 1.0);
}

TEST_CASE("structured band output") {
  RunConfig c = base("mathieu.json", "structured");
  c.format = BandFormat::Structured;
  c.solver.n_bands = 4;
  c.verify = {};
  REQUIRE(run(c).exit_code == 0);
  CHECK(fs::exists(c.out_dir / "bands.json"));
  CHECK_FALSE(fs::exists(c.out_dir / "bands.csv"));
  const auto j = nlohmann::json::parse(slurp(c.out_dir / "bands.json"));
  CHECK(j.is_object());
}

TEST_CASE("malformed document exits 1 with a diagnostic") {
  const RunResult r = run(base("malformed.json", "malformed"));
  CHECK(r.exit_code == 1);
  CHECK(r.message.find("line") != std::string::npos);
  const RunResult h = run(base("not_hermitian.json", "not_hermitian"));
  CHECK(h.exit_code == 1);
  CHECK_FALSE(h.message.empty());
  CHECK(run(base("no_such_file.json", "missing")).exit_code == 1);
}

TEST_CASE("non-convergence exits 2") {
  RunConfig c = base("mathieu.json", "noconv");
  c.solver.n_bands = 4;
  c.solver.truncation = 4;
  c.solver.max_truncation = 8;
  c.solver.convergence_tol = 1e-300;
  const RunResult r = run(c);
  CHECK(r.exit_code == 2);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("a failed verification exits 3 and still writes the report") {
  RunConfig c = base("coupled_first_mode.json", "fail");
  c.c1 = 1e-9;
  c.verify = {"theorem1"};
  const RunResult r = run(c);
  CHECK(r.exit_code == 3);
  const auto report = nlohmann::json::parse(slurp(c.out_dir / "report.json"));
  CHECK(report["verdicts"]["theorem1"]["outcome"] == "fail");
}

TEST_CASE("reruns are byte-identical") {
  RunConfig a = base("coupled_first_mode.json", "rerun_a");
  a.c1 = std::nullopt;
  a.verify = parse_verify_list("theorem1,corollary1,theorem2,corollary2");
  RunConfig b = a;
  b.out_dir = scratch("rerun_b");
  b.solver.threads = 2;
  REQUIRE(run(a).exit_code == run(b).exit_code);
  for (const char* f : {"bands.csv", "gaps.json", "report.json", "manifest.json"}) {
    CHECK(fs::exists(a.out_dir / f));
    CHECK(slurp(a.out_dir / f) == slurp(b.out_dir / f));
  }
}

TEST_CASE("manifest records the effective parameters") {
  RunConfig c = base("coupled_first_mode.json", "manifest");
  c.c1 = std::nullopt;
  c.verify = {};
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const auto m = nlohmann::json::parse(slurp(c.out_dir / "manifest.json"));
  CHECK(m["asymptotics"]["c1_mode"] == "fit");
  CHECK(m["asymptotics"]["c1"] == r.report["asymptotics"]["c1"]);
  for (const char* key : {"N", "N1", "N2", "N3"}) CHECK(m["asymptotics"].contains(key));
  CHECK(m["solver"]["t_samples"] == 21);
  CHECK(m["potential"]["definition"]["m"] == 2);
  CHECK(m["solver"].contains("truncation_used"));
}

TEST_CASE("theorem 4 report fields") {
  RunConfig c = base("scalar_times_identity.json", "t4_na");
  c.verify = {"theorem4"};
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const auto& t4 = r.report["verdicts"]["theorem4"];
  CHECK(t4["applicable"] == false);
  CHECK(t4["outcome"] == "not-applicable");
  CHECK(t4.contains("d"));
  CHECK(t4.contains("triple"));
  CHECK(t4.contains("H"));
}
