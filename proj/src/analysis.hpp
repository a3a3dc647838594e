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

#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bloch.hpp"
#include "common.hpp"
#include "monodromy.hpp"
#include "potential.hpp"
#include "unperturbed.hpp"

namespace mpband {

struct Band {
  int index = 0;  // 1-based
  double lo = 0.0;
  double hi = 0.0;
  int argmin = 0;  // grid column of lo
  int argmax = 0;  // grid column of hi
};

// Per-index extremes over the grid.
std::vector<Band> extract_bands(const BandGrid& grid);

struct Gap {
  double lower = 0.0;
  double upper = 0.0;
  std::array<int, 2> between{};  // band indices n, n + 1
  std::optional<int> window_s;
  double t_lower = 0.0;
  double t_upper = 0.0;
  bool oracle_checked = false;
  bool oracle_confirmed = false;
  double oracle_shift = 0.0;  // largest |oracle root - Galerkin edge|
  double length() const { return upper - lower; }
};

// Complement of the union of the band ranges between the first and the last
// band. Since bands are indexed by sorted order, lo and hi are both
// non-decreasing in the index, so every gap sits between n and n + 1.
// Separations not exceeding touch_tol count as touching.
std::vector<Gap> extract_gaps(const std::vector<Band>& bands, double touch_tol = 0.0);

double grid_spacing(const BandGrid& grid);
// max_i |lambda_n(t_{i+1}) - lambda_n(t_i)| for every band.
std::vector<double> max_adjacent_jumps(const BandGrid& grid);

// Band extremes located between grid points: golden section in t around
// every sampled local extremum that could hold the true extreme.
class EdgeRefiner {
 public:
  struct Edge {
    double value = 0.0;
    double t = 0.0;
  };

  EdgeRefiner(const MatrixPotential& potential, const BandGrid& grid, int truncation);

  // The search stops as soon as the edge passes `target` (a value beyond
  // which the caller's question is settled); such partial results are not
  // cached.
  Edge hi(int n, double target = std::numeric_limits<double>::infinity());
  Edge lo(int n, double target = -std::numeric_limits<double>::infinity());
  int truncation() const { return truncation_; }

 private:
  Edge refine(int n, bool maximise, double target, bool& complete);

  const MatrixPotential& potential_;
  const BandGrid& grid_;
  int truncation_;
  double dt_;
  std::map<std::pair<int, bool>, Edge> cache_;
};

struct GapOptions {
  bool refine = true;
  bool oracle = false;
  double gap_tol = 0.0;  // 0 selects default_gap_tol
  MonodromyOptions monodromy;
};

// max(1e-9, 64 eps (2 pi (K + 1))^2): below this a separation is noise.
double default_gap_tol(int truncation);

// Sampled extremes underestimate band ranges, so sampled gaps contain the
// true ones. With refinement each candidate's two edges are re-located
// between grid points and the gap kept if it still exceeds gap_tol; without
// it, separations within grid resolution (spacing times slope) are dropped.
std::vector<Gap> detect_gaps(const MatrixPotential& potential, const BandGrid& grid,
                             const GapOptions& options);

// Confirms each gap edge as a zero of the characteristic determinant.
void oracle_check_gaps(const MatrixPotential& potential, int truncation, std::vector<Gap>& gaps,
                       const MonodromyOptions& options);

// Sets window_s to the U-window containing the gap, when one does (s >= 5).
void assign_windows(std::vector<Gap>& gaps, const Asymptotics& asym);

struct C1Fit {
  double c1 = 1.0;
  int n = 2;                      // localisation threshold
  bool settled = false;           // separation held for five indices
  double margin = 1.1;
  double separation = 0.0;        // min(min_{i != j} |mu_i - mu_j|, pi^2)
  int k_max = 0;                  // largest |k| seen on the grid
  std::map<int, double> ratio;    // |k| -> max deviation / (ln|k|/|k| + q_k)
};

struct FitOptions {
  double margin = 1.1;
  double c1_min = 1e-6;
};

// Smallest c1 (times margin) that puts every grid eigenvalue with |k| >= n
// inside the eps_k ball of its nearest branch, n being the first index from
// which 2 eps_k stays below the branch separation for five indices.
C1Fit fit_c1(const MatrixPotential& potential, const MeanSpectrum& spectrum,
             const BandGrid& grid, const FitOptions& options = {});

// Fills n1, n2, n3 by runtime scans, given c1 and n.
AsymptoticParams auto_thresholds(const MatrixPotential& potential, const MeanSpectrum& spectrum,
                                 AsymptoticParams params);

enum class Outcome { Pass, Fail, NotApplicable };
std::string to_string(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::NotApplicable;
  int checked = 0;
  int violations = 0;
  std::string note;
  nlohmann::json witness = nlohmann::json::array();
};
nlohmann::json to_json(const Verdict& verdict);

// I(s) inside each of the bands sm+1..sm+m for s in [s_lo, s_hi]. Sampled
// edges are refined before a violation is recorded.
Verdict verify_theorem1(const std::vector<Band>& bands, const Asymptotics& asym, int s_lo,
                        int s_hi, EdgeRefiner* refiner);

struct WindowVerdicts {
  Verdict corollary1;
  Verdict theorem2;
};

// Gaps above (pi N1)^2 up to window index s_max: exactly one U(s), between
// bands sm and sm+1, length at most 2 max(eps(s-1), eps(s)).
WindowVerdicts verify_corollary1_theorem2(const std::vector<Gap>& gaps, int m,
                                          const Asymptotics& asym, int s_max);

// Counts at `samples` interior points of each safe interval, for
// |k| in [k_lo, k_hi] and both signs, plus the band-subset statement at
// the interval endpoints.
Verdict verify_theorem3(const MatrixPotential& potential, const Asymptotics& asym, int k_lo,
                        int k_hi, const SolverConfig& config, int samples = 9);

// Gaps in some U(s), N3 < s <= s_max, must lie in S(j, s) for every j.
Verdict verify_corollary2(const std::vector<Gap>& gaps, const Asymptotics& asym, int s_max);

struct Theorem4Threshold {
  bool applicable = false;
  ConditionOneReport condition;
  int s_star = 0;
  double h = 0.0;
};

// H = (pi s*)^2 with s* the least s > N3 from which 4 gamma(s) < d for ten
// consecutive window indices.
Theorem4Threshold theorem4_threshold(const Asymptotics& asym, double tol);

// No detected gap may meet [H, H + window]; the band data must reach
// covered_top >= H + window. Also checks the empty triple intersection of
// the S-windows for every s* <= s with (pi s)^2 <= H + window.
Verdict verify_theorem4(const Theorem4Threshold& threshold, const Asymptotics& asym,
                        const std::vector<Gap>& gaps, double covered_top, double window = 200.0);

}  // namespace mpband
