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
#include <span>
#include <vector>

#include "common.hpp"
#include "potential.hpp"

namespace mpband {

// Constants the asymptotic statements only assert to exist. c1 scales the
// localisation radii; n is the index from which localisation holds, n1 the
// first U-window index, n2 the first index where safe intervals separate all
// branches, n3 the first S-window index.
struct AsymptoticParams {
  double c1 = 1.0;
  int n = 2;
  int n1 = 5;
  int n2 = 2;
  int n3 = 6;
  double tol = 1e-12;
};

void validate(const AsymptoticParams& params);

struct UnperturbedEigenvalue {
  int k = 0;
  int j = 0;  // 1-based index into the distinct eigenvalues of C
  double t = 0.0;
  double value = 0.0;
  int multiplicity = 0;
};

// mu_{k,j}(t) = (2 pi k + t)^2 + mu_j.
UnperturbedEigenvalue mu_kj(int k, int j, double t, const MeanSpectrum& spectrum);

inline double mu_kj_value(int k, double mu, double t) {
  const double w = kTwoPi * k + t;
  return w * w + mu;
}

// Multiplicity of (2 pi k + t)^2 in the spectrum of L_t(O): 2m at the
// exceptional points (t = 0, k != 0) and t = pi, m otherwise.
int free_multiplicity(int k, double t, int m);

struct ExceptionalPoint {
  long long parity_index = 0;  // 2k (collision with branch -k) or 2k+1 (branch -k-1)
  int j = 0;
  int i = 0;
  double t_star = 0.0;
};

// Quasimomenta in [0, pi] where mu_{k,j} meets mu_{-k,i} or mu_{-k-1,i}.
// Points outside [0, pi] are dropped.
std::vector<ExceptionalPoint> exceptional_points(int k, int j, const MeanSpectrum& spectrum);

// eps_k = c1 (ln|k| / |k| + q_k), |k| >= 2.
double epsilon_k(int k, double q_k, double c1);

// delta_k = max{eps_k, eps_{-k}, eps_{-k-1}} / (4 pi (|k| - 1)).
double delta_k(int k, double eps_k, double eps_minus_k, double eps_minus_k_minus_1);

// gamma_k = 2 (2 pi |k| + pi) delta_k + eps_k + (spread / (4 pi (2|k| - 1)))^2.
double gamma_k(int k, double delta, double eps, double spread);

struct SafeIntervalSet {
  int k = 0;
  int j = 0;
  double delta = 0.0;
  std::vector<Interval> intervals;
  bool empty() const { return intervals.empty(); }
};

// [0, pi] minus the open delta-balls around every exceptional point of (k, j).
// An empty remnant is returned as an empty set, not an error.
SafeIntervalSet safe_intervals(int k, int j, const MeanSpectrum& spectrum, double delta);

enum class WindowKind { U, S };

struct GapWindow {
  int s = 0;
  double lower = 0.0;
  double upper = 0.0;
  WindowKind kind = WindowKind::U;
  int j = 0;               // S-windows only
  double gamma = 0.0;      // S-windows only
  std::vector<Interval> pieces;  // S-windows: open subintervals, one per i
  bool contains(const Interval& gap) const;
};

// U(s) = ((pi s)^2 + mu_1 - eps(s-1), (pi s)^2 + mu_p + eps(s)).
GapWindow window_u(int s, const MeanSpectrum& spectrum, double eps_prev, double eps_s);

// S(j,s): union over i of ((pi s)^2 + (mu_i + mu_j)/2 -+ gamma).
GapWindow window_s(int j, int s, const MeanSpectrum& spectrum, double gamma);

struct TripleScore {
  std::array<int, 3> triple{};  // 1-based, strictly increasing
  double min_diameter = 0.0;
};

struct ConditionOneReport {
  bool applicable = false;
  std::array<int, 3> best_triple{};
  double d = 0.0;
  bool satisfied = false;
  std::vector<TripleScore> per_triple;
};

// Evaluates every triple j1 < j2 < j3; the inner minimum over (i1, i2, i3)
// is exact (three-pointer sweep over sorted sum lists).
ConditionOneReport condition_one(std::span<const double> mu, double tol);
ConditionOneReport condition_one(const MeanSpectrum& spectrum, double tol);

// Binds the radii to one potential and one spectrum of its mean.
class Asymptotics {
 public:
  Asymptotics(const MatrixPotential& potential, MeanSpectrum spectrum, AsymptoticParams params);
  // Same, from an explicit q_k table (q[k] for k >= 1; absent entries are 0).
  Asymptotics(std::vector<double> q_tail, MeanSpectrum spectrum, AsymptoticParams params);

  const MeanSpectrum& spectrum() const { return spectrum_; }
  const AsymptoticParams& params() const { return params_; }
  Asymptotics with_params(const AsymptoticParams& params) const;

  double q(int k) const;
  double epsilon(int k) const;
  // eps(s) = eps_k for s in {2k, 2k+1}.
  double epsilon_of_window(int s) const { return epsilon(s / 2); }
  double delta(int k) const;
  double gamma(int k) const;
  // gamma for the S-windows centred at (pi s)^2, i.e. gamma_{floor(s/2)}.
  double gamma_of_window(int s) const { return gamma(s / 2); }

  SafeIntervalSet safe_intervals(int k, int j) const;
  GapWindow window_u(int s) const;                 // requires s > n1
  GapWindow window_s(int j, int s) const;          // requires s > n3
  GapWindow window_u_unchecked(int s) const;       // requires s >= 5

  // Disjointness at index k (both signs): every closed
  // eps_k-ball around mu_{k,j}(t), t in a safe interval, misses every
  // eps_n-ball around mu_{n,i}(t) with |n| >= n_min, (n,i) != (k,j).
  bool branches_separated(int k, int n_min) const;

 private:
  std::vector<double> q_;
  MeanSpectrum spectrum_;
  AsymptoticParams params_;
};

// First s >= start such that for s..s+4 the interval
// [(s pi)^2 + mu_p + eps(s), (s pi + pi)^2 + mu_1 - eps(s)] is non-empty and
// U(s) does not meet U(s+1).
int scan_n1(const Asymptotics& asym, int start);
// First k >= start such that branches_separated(k', start) holds for k..k+4.
int scan_n2(const Asymptotics& asym, int start);
// Smallest window index exceeding n, n1, n2 whose gamma index is >= n2.
int choose_n3(int n, int n1, int n2);

}  // namespace mpband
