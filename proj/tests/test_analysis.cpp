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

#include "analysis.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace mpband;

namespace {

MatrixPotential from_file(const char* name) { return load_potential_file(oracle::data(name)); }

BandGrid synthetic(const std::vector<std::vector<double>>& rows) {
  BandGrid g;
  g.t_values = quasimomentum_grid(static_cast<int>(rows[0].size()));
  g.lambda.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (size_t n = 0; n < rows.size(); ++n)
    for (size_t i = 0; i < rows[n].size(); ++i) g.lambda(n, i) = rows[n][i];
  return g;
}

Asymptotics asymptotics_for(const MatrixPotential& q, double c1) {
  const MeanSpectrum sp = mean_spectrum(mean_matrix(q), default_cluster_tol(mean_matrix(q)));
  AsymptoticParams params;
  params.c1 = c1;
  return Asymptotics(q, sp, auto_thresholds(q, sp, params));
}

Gap fake_gap(double lo, double hi, int after = 0) {
  Gap g;
  g.lower = lo;
  g.upper = hi;
  g.between = {after, after + 1};
  return g;
}

}  // namespace

TEST_CASE("bands and gaps from a synthetic grid") {
  const BandGrid g = synthetic({{0.0, 1.0, 2.0, 1.0}, {3.0, 4.0, 3.5, 3.2}, {4.0, 6.0, 5.0, 4.5}, {6.0, 6.5, 7.0, 6.2}});
  const auto bands = extract_bands(g);
  REQUIRE(bands.size() == 4);
  CHECK(bands[0].lo == 0.0);
  CHECK(bands[0].hi == 2.0);
  CHECK(bands[0].argmax == 2);
  CHECK(bands[1].lo == 3.0);
  const auto gaps = extract_gaps(bands);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].lower == 2.0);
  CHECK(gaps[0].upper == 3.0);
  CHECK(gaps[0].between == std::array<int, 2>{1, 2});
  CHECK(extract_gaps(bands, 1.5).empty());
  const auto jumps = max_adjacent_jumps(g);
  CHECK(jumps[2] == 2.0);
  CHECK(grid_spacing(g) == doctest::Approx(oracle::pi / 2));
}

TEST_CASE("free and constant potentials have no gaps") {
  SolverConfig cfg;
  cfg.n_bands = 16;
  for (const char* name : {"free_m1.json", "free_m2.json", "constant_swap.json"}) {
    const MatrixPotential q = from_file(name);
    const BandGrid g = sample_bands(q, cfg);
    CHECK(detect_gaps(q, g, GapOptions{}).empty());
    GapOptions raw;
    raw.refine = false;
    CHECK(detect_gaps(q, g, raw).empty());
  }
}

TEST_CASE("Mathieu gaps are found and confirmed by the determinant") {
  const MatrixPotential q = from_file("mathieu.json");
  SolverConfig cfg;
  cfg.n_bands = 8;
  const BandGrid g = sample_bands(q, cfg);
  GapOptions opt;
  opt.oracle = true;
  const auto gaps = detect_gaps(q, g, opt);
  REQUIRE(gaps.size() >= 3);
  const double p2 = oracle::pi * oracle::pi;
  CHECK(gaps[0].lower < p2);
  CHECK(gaps[0].upper > p2);
  CHECK(gaps[0].length() == doctest::Approx(2.0).epsilon(0.1));
  for (size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i].length() < gaps[i - 1].length());
  for (const Gap& gap : gaps) {
    CHECK(gap.oracle_checked);
    CHECK(gap.oracle_confirmed);
  }
}

TEST_CASE("refined gaps sit inside the sampled ones") {
  const MatrixPotential q = from_file("coupled_first_mode.json");
  SolverConfig cfg;
  cfg.n_bands = 20;
  cfg.t_samples = 21;
  const BandGrid g = sample_bands(q, cfg);
  const auto sampled = extract_gaps(extract_bands(g));
  const auto refined = detect_gaps(q, g, GapOptions{});
  for (const Gap& r : refined) {
    bool inside = false;
    for (const Gap& s : sampled) inside |= s.lower <= r.lower && r.upper <= s.upper;
    CHECK(inside);
  }
}

TEST_CASE("property: bands and gaps tile the covered range") {
  const MatrixPotential q = from_file("noncommuting.json");
  SolverConfig cfg;
  cfg.n_bands = 24;
  cfg.t_samples = 41;
  const BandGrid g = sample_bands(q, cfg);
  const auto bands = extract_bands(g);
  const auto gaps = extract_gaps(bands);
  std::vector<oracle::Span> spans;
  for (const Band& b : bands) spans.push_back({b.lo, b.hi});
  const auto complement = oracle::union_complement(spans);
  REQUIRE(complement.size() == gaps.size());
  for (size_t i = 0; i < gaps.size(); ++i) {
    CHECK(gaps[i].lower == complement[i].lo);
    CHECK(gaps[i].upper == complement[i].hi);
    for (const Band& b : bands) CHECK((b.hi <= gaps[i].lower || b.lo >= gaps[i].upper));
  }
}

TEST_CASE("property: gap detection is deterministic") {
  const MatrixPotential q = from_file("coupled_first_mode.json");
  SolverConfig cfg;
  cfg.n_bands = 16;
  cfg.t_samples = 33;
  const BandGrid g = sample_bands(q, cfg);
  const auto a = detect_gaps(q, g, GapOptions{});
  const auto b = detect_gaps(q, g, GapOptions{});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lower == b[i].lower);
    CHECK(a[i].upper == b[i].upper);
  }
}

TEST_CASE("edge refinement only widens the sampled range") {
  const MatrixPotential q = from_file("coupled_first_mode.json");
  SolverConfig cfg;
  cfg.n_bands = 10;
  cfg.t_samples = 11;
  const BandGrid g = sample_bands(q, cfg);
  EdgeRefiner refiner(q, g, g.max_truncation);
  const auto bands = extract_bands(g);
  for (int n = 0; n < 10; ++n) {
    CHECK(refiner.hi(n + 1).value >= bands[n].hi);
    CHECK(refiner.lo(n + 1).value <= bands[n].lo);
  }
}

TEST_CASE("c1 fit on the free operator hits the floor") {
  const MatrixPotential q = from_file("free_m1.json");
  SolverConfig cfg;
  cfg.n_bands = 20;
  const BandGrid g = sample_bands(q, cfg);
  const C1Fit fit = fit_c1(q, mean_spectrum(mean_matrix(q), 1e-9), g);
  CHECK(fit.c1 == doctest::Approx(1e-6));
  CHECK(fit.n >= 2);
}

TEST_CASE("c1 fit covers every eigenvalue it saw") {
  const MatrixPotential q = from_file("coupled_first_mode.json");
  SolverConfig cfg;
  cfg.n_bands = 32;
  cfg.t_samples = 21;
  const BandGrid g = sample_bands(q, cfg);
  const MeanSpectrum sp = mean_spectrum(mean_matrix(q), 1e-9);
  const C1Fit fit = fit_c1(q, sp, g);
  CHECK(fit.c1 > 1e-6);
  for (const auto& [k, ratio] : fit.ratio)
    if (k >= fit.n) CHECK(ratio * fit.margin <= fit.c1 * (1 + 1e-12));
}

TEST_CASE("theorem 1 on a constant potential") {
  const MatrixPotential q = from_file("constant_swap.json");
  SolverConfig cfg;
  cfg.n_bands = 2 * 16;
  const BandGrid g = sample_bands(q, cfg);
  const Asymptotics asym = asymptotics_for(q, 1.0);
  EdgeRefiner refiner(q, g, g.max_truncation);
  const Verdict v = verify_theorem1(extract_bands(g), asym, asym.params().n1, 14, &refiner);
  CHECK(v.outcome == Outcome::Pass);
  CHECK(v.checked > 0);
  CHECK_THROWS_AS(verify_theorem1(extract_bands(g), asym, 6, 40, nullptr), Error);
}

TEST_CASE("negative controls for the window statements") {
  const MatrixPotential q = from_file("coupled_first_mode.json");
  const Asymptotics asym = asymptotics_for(q, 0.02);
  const int s = asym.params().n3 + 2;
  const GapWindow u = asym.window_u(s);

  // a wide gap inside U(s): corollary 1 holds but the length bound fails
  std::vector<Gap> gaps{fake_gap(u.lower + 1e-9, u.upper - 1e-9, 2 * s)};
  WindowVerdicts w = verify_corollary1_theorem2(gaps, 2, asym, s + 2);
  CHECK(w.corollary1.outcome == Outcome::Pass);
  CHECK(w.theorem2.outcome == Outcome::Fail);

  // a gap straddling two windows
  gaps = {fake_gap(u.upper - 1.0, asym.window_u(s + 1).lower + 1.0, 2 * s)};
  w = verify_corollary1_theorem2(gaps, 2, asym, s + 2);
  CHECK(w.corollary1.outcome == Outcome::Fail);

  // a tiny gap inside U(s) but between the S pieces
  double probe = u.lower;
  for (double x = u.lower; x < u.upper; x += 1e-3) {
    bool outside = true;
    for (int j = 1; j <= 2; ++j) outside &= !asym.window_s(j, s).contains({x, x + 1e-6});
    if (outside) {
      probe = x;
      break;
    }
  }
  REQUIRE(probe > u.lower);
  gaps = {fake_gap(probe, probe + 1e-6, 2 * s)};
  CHECK(verify_corollary2(gaps, asym, s + 2).outcome == Outcome::Fail);

  // the piece shared by both windows is centred at (pi s)^2 + (mu_1 + mu_2) / 2
  const double c = std::pow(oracle::pi * s, 2) + 0.5 * (asym.spectrum().lowest() + asym.spectrum().highest());
  gaps = {fake_gap(c - 1e-9, c + 1e-9, 2 * s)};
  const Verdict c2 = verify_corollary2(gaps, asym, s + 2);
  CHECK(c2.checked == 1);
  CHECK(c2.outcome == Outcome::Pass);
}

TEST_CASE("theorem 4 threshold and verdicts") {
  const MatrixPotential q = from_file("finite_gap.json");
  const Asymptotics asym = asymptotics_for(q, 0.5);
  const Theorem4Threshold th = theorem4_threshold(asym, 1e-9);
  REQUIRE(th.applicable);
  CHECK(th.condition.d == doctest::Approx(oracle::brute_condition_one({0.0, 1.0, 3.0}).d));
  CHECK(th.s_star > asym.params().n3);
  CHECK(th.h == doctest::Approx(std::pow(oracle::pi * th.s_star, 2)));
  for (int s = th.s_star; s < th.s_star + 10; ++s) CHECK(4 * asym.gamma_of_window(s) < th.condition.d);

  const double top = th.h + 200.0;
  CHECK(verify_theorem4(th, asym, {}, top).outcome == Outcome::Pass);
  CHECK(verify_theorem4(th, asym, {}, top - 1.0).outcome == Outcome::NotApplicable);
  const std::vector<Gap> late{fake_gap(th.h + 10.0, th.h + 10.5)};
  CHECK(verify_theorem4(th, asym, late, top).outcome == Outcome::Fail);
  const std::vector<Gap> early{fake_gap(th.h - 50.0, th.h - 49.0)};
  CHECK(verify_theorem4(th, asym, early, top).outcome == Outcome::Pass);

  const MatrixPotential scalar = from_file("scalar_times_identity.json");
  const Theorem4Threshold none = theorem4_threshold(asymptotics_for(scalar, 0.5), 1e-9);
  CHECK_FALSE(none.applicable);
  CHECK(verify_theorem4(none, asymptotics_for(scalar, 0.5), {}, 1e9).outcome == Outcome::NotApplicable);
}

TEST_CASE("verdict serialisation") {
  Verdict v;
  v.outcome = Outcome::Fail;
  v.checked = 3;
  v.violations = 1;
  const auto j = to_json(v);
  CHECK(j["outcome"] == "fail");
  CHECK(j["checked"] == 3);
  CHECK(j["violations"] == 1);
  CHECK(to_string(Outcome::NotApplicable) == "not-applicable");
  CHECK(to_string(Outcome::Pass) == "pass");
}

TEST_CASE("theorem 3 counting on exact branches") {
  const MatrixPotential q = from_file("constant_swap.json");
  const Asymptotics asym = asymptotics_for(q, 1.0);
  const int k = std::max(asym.params().n2, 2);
  const Verdict v = verify_theorem3(q, asym, k, k + 2, SolverConfig{}, 5);
  CHECK(v.outcome == Outcome::Pass);
  CHECK(v.checked > 0);
}
