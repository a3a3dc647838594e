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

#include "unperturbed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpband {

namespace {

void check_index(int j, const MeanSpectrum& spectrum, const char* what) {
  if (j < 1 || j > spectrum.p()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": eigenvalue index " + std::to_string(j) +
                    " outside 1.." + std::to_string(spectrum.p()));
  }
}

// Smallest max - min over one pick from each of three sorted lists.
double min_spread(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& c) {
  size_t ia = 0, ib = 0, ic = 0;
  double best = std::numeric_limits<double>::infinity();
  while (ia < a.size() && ib < b.size() && ic < c.size()) {
    const double lo = std::min({a[ia], b[ib], c[ic]});
    const double hi = std::max({a[ia], b[ib], c[ic]});
    best = std::min(best, hi - lo);
    if (best == 0.0) break;
    if (a[ia] == lo) ++ia;
    else if (b[ib] == lo) ++ib;
    else ++ic;
  }
  return best;
}

constexpr int kPersistence = 5;
constexpr int kScanLimit = 200000;

}  // namespace

void validate(const AsymptoticParams& params) {
  if (!(params.c1 > 0.0) || !std::isfinite(params.c1)) {
    throw Error(ErrorCode::InvalidArgument, "c1 must be a positive finite number");
  }
  if (params.n < 2 || params.n2 < 2) {
    throw Error(ErrorCode::InvalidArgument, "thresholds N and N2 must be >= 2");
  }
  if (params.n1 < 4 || params.n3 < 4) {
    throw Error(ErrorCode::InvalidArgument, "window thresholds N1 and N3 must be >= 4");
  }
  if (!(params.tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be >= 0");
}

UnperturbedEigenvalue mu_kj(int k, int j, double t, const MeanSpectrum& spectrum) {
  check_index(j, spectrum, "mu_kj");
  const auto ju = static_cast<size_t>(j - 1);
  return {k, j, t, mu_kj_value(k, spectrum.values[ju], t), spectrum.multiplicities[ju]};
}

int free_multiplicity(int k, double t, int m) {
  const bool at_pi = std::abs(t) == kPi;
  const bool at_zero = t == 0.0 && k != 0;
  return (at_pi || at_zero) ? 2 * m : m;
}

std::vector<ExceptionalPoint> exceptional_points(int k, int j, const MeanSpectrum& spectrum) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "exceptional_points: k must be nonzero");
  check_index(j, spectrum, "exceptional_points");
  std::vector<ExceptionalPoint> out;
  const double mu_j = spectrum.values[static_cast<size_t>(j - 1)];
  for (int i = 1; i <= spectrum.p(); ++i) {
    const double diff = spectrum.values[static_cast<size_t>(i - 1)] - mu_j;
    const double t_even = diff / (4.0 * kPi * (2.0 * k));
    if (t_even >= 0.0 && t_even <= kPi) out.push_back({2LL * k, j, i, t_even});
    const double t_odd = kPi + diff / (4.0 * kPi * (2.0 * k + 1.0));
    if (t_odd >= 0.0 && t_odd <= kPi) out.push_back({2LL * k + 1, j, i, t_odd});
  }
  return out;
}

double epsilon_k(int k, double q_k, double c1) {
  const int a = std::abs(k);
  if (a < 2) throw Error(ErrorCode::InvalidArgument, "epsilon_k: requires |k| >= 2");
  if (!(q_k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon_k: q_k must be >= 0");
  if (!(c1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon_k: c1 must be > 0");
  return c1 * (std::log(static_cast<double>(a)) / a + q_k);
}

double delta_k(int k, double eps_k, double eps_minus_k, double eps_minus_k_minus_1) {
  const int a = std::abs(k);
  if (a < 2) throw Error(ErrorCode::InvalidArgument, "delta_k: requires |k| >= 2");
  const double top = std::max({eps_k, eps_minus_k, eps_minus_k_minus_1});
  return top / (4.0 * kPi * (a - 1));
}

double gamma_k(int k, double delta, double eps, double spread) {
  const int a = std::abs(k);
  if (a < 1) throw Error(ErrorCode::InvalidArgument, "gamma_k: requires |k| >= 1");
  const double offset = spread / (4.0 * kPi * (2.0 * a - 1.0));
  return 2.0 * (kTwoPi * a + kPi) * delta + eps + offset * offset;
}

SafeIntervalSet safe_intervals(int k, int j, const MeanSpectrum& spectrum, double delta) {
  if (std::abs(k) < 2) throw Error(ErrorCode::InvalidArgument, "safe_intervals: requires |k| >= 2");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "safe_intervals: delta must be > 0");

  std::vector<Interval> removed;
  for (const ExceptionalPoint& point : exceptional_points(k, j, spectrum)) {
    removed.push_back({std::max(0.0, point.t_star - delta), std::min(kPi, point.t_star + delta)});
  }
  std::sort(removed.begin(), removed.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  SafeIntervalSet out{k, j, delta, {}};
  // Touching balls leave a single point behind; those are dropped so every
  // remnant interval has positive length.
  double cursor = 0.0;
  for (const Interval& ball : removed) {
    if (ball.lo > cursor) out.intervals.push_back({cursor, ball.lo});
    cursor = std::max(cursor, ball.hi);
  }
  if (cursor < kPi) out.intervals.push_back({cursor, kPi});
  return out;
}

bool GapWindow::contains(const Interval& gap) const {
  if (kind == WindowKind::U) return lower <= gap.lo && gap.hi <= upper;
  std::vector<Interval> merged;
  std::vector<Interval> sorted = pieces;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const Interval& piece : sorted) {
    if (!merged.empty() && piece.lo < merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, piece.hi);
    } else {
      merged.push_back(piece);
    }
  }
  return std::any_of(merged.begin(), merged.end(), [&](const Interval& piece) {
    return piece.lo <= gap.lo && gap.hi <= piece.hi;
  });
}

GapWindow window_u(int s, const MeanSpectrum& spectrum, double eps_prev, double eps_s) {
  const double centre = (kPi * s) * (kPi * s);
  GapWindow w;
  w.s = s;
  w.kind = WindowKind::U;
  w.lower = centre + spectrum.lowest() - eps_prev;
  w.upper = centre + spectrum.highest() + eps_s;
  return w;
}

GapWindow window_s(int j, int s, const MeanSpectrum& spectrum, double gamma) {
  check_index(j, spectrum, "window_s");
  const double centre = (kPi * s) * (kPi * s);
  const double mu_j = spectrum.values[static_cast<size_t>(j - 1)];
  GapWindow w;
  w.s = s;
  w.kind = WindowKind::S;
  w.j = j;
  w.gamma = gamma;
  w.lower = std::numeric_limits<double>::infinity();
  w.upper = -std::numeric_limits<double>::infinity();
  for (double mu_i : spectrum.values) {
    const double mid = centre + 0.5 * (mu_i + mu_j);
    w.pieces.push_back({mid - gamma, mid + gamma});
    w.lower = std::min(w.lower, mid - gamma);
    w.upper = std::max(w.upper, mid + gamma);
  }
  return w;
}

ConditionOneReport condition_one(std::span<const double> mu_in, double tol) {
  std::vector<double> mu(mu_in.begin(), mu_in.end());
  std::sort(mu.begin(), mu.end());
  ConditionOneReport report;
  const int p = static_cast<int>(mu.size());
  if (p < 3) return report;
  report.applicable = true;
  report.d = -1.0;

  auto shifted = [&](int j) {
    std::vector<double> sums(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) sums[i] = mu[static_cast<size_t>(j)] + mu[i];
    return sums;
  };
  for (int j1 = 0; j1 < p; ++j1) {
    const auto a = shifted(j1);
    for (int j2 = j1 + 1; j2 < p; ++j2) {
      const auto b = shifted(j2);
      for (int j3 = j2 + 1; j3 < p; ++j3) {
        const double value = min_spread(a, b, shifted(j3));
        report.per_triple.push_back({{j1 + 1, j2 + 1, j3 + 1}, value});
        if (value > report.d) {
          report.d = value;
          report.best_triple = {j1 + 1, j2 + 1, j3 + 1};
        }
      }
    }
  }
  report.satisfied = report.d > tol;
  return report;
}

ConditionOneReport condition_one(const MeanSpectrum& spectrum, double tol) {
  return condition_one(std::span<const double>(spectrum.values), tol);
}

Asymptotics::Asymptotics(const MatrixPotential& potential, MeanSpectrum spectrum,
                         AsymptoticParams params)
    : spectrum_(std::move(spectrum)), params_(params) {
  validate(params_);
  const int top = potential.max_index() / 2;
  q_.assign(static_cast<size_t>(top) + 1, 0.0);
  for (int k = 1; k <= top; ++k) q_[static_cast<size_t>(k)] = fourier_tail(potential, k);
}

Asymptotics::Asymptotics(std::vector<double> q_tail, MeanSpectrum spectrum,
                         AsymptoticParams params)
    : q_(std::move(q_tail)), spectrum_(std::move(spectrum)), params_(params) {
  validate(params_);
  for (double q : q_) {
    if (!(q >= 0.0)) throw Error(ErrorCode::InvalidArgument, "q_k values must be >= 0");
  }
}

Asymptotics Asymptotics::with_params(const AsymptoticParams& params) const {
  return Asymptotics(q_, spectrum_, params);
}

double Asymptotics::q(int k) const {
  const auto a = static_cast<size_t>(std::abs(k));
  return a < q_.size() ? q_[a] : 0.0;
}

double Asymptotics::epsilon(int k) const { return epsilon_k(k, q(k), params_.c1); }

double Asymptotics::delta(int k) const {
  const double eps = epsilon(k);
  // The partner index -k-1 only drops below 2 for k = -2; reuse index 2 there.
  const int partner = std::max(2, std::abs(-k - 1));
  return delta_k(k, eps, eps, epsilon(partner));
}

double Asymptotics::gamma(int k) const {
  return gamma_k(k, delta(k), epsilon(k), spectrum_.spread());
}

SafeIntervalSet Asymptotics::safe_intervals(int k, int j) const {
  return mpband::safe_intervals(k, j, spectrum_, delta(k));
}

GapWindow Asymptotics::window_u_unchecked(int s) const {
  if (s < 5) throw Error(ErrorCode::InvalidArgument, "window_u: requires s >= 5");
  return mpband::window_u(s, spectrum_, epsilon_of_window(s - 1), epsilon_of_window(s));
}

GapWindow Asymptotics::window_u(int s) const {
  if (s <= params_.n1) {
    throw Error(ErrorCode::InvalidArgument,
                "window_u: s = " + std::to_string(s) + " must exceed N1 = " +
                    std::to_string(params_.n1));
  }
  return window_u_unchecked(s);
}

GapWindow Asymptotics::window_s(int j, int s) const {
  if (s <= params_.n3) {
    throw Error(ErrorCode::InvalidArgument,
                "window_s: s = " + std::to_string(s) + " must exceed N3 = " +
                    std::to_string(params_.n3));
  }
  return mpband::window_s(j, s, spectrum_, gamma_of_window(s));
}

bool Asymptotics::branches_separated(int k, int n_min) const {
  const int a = std::abs(k);
  const int floor_n = std::max(2, n_min);
  for (int kk : {a, -a}) {
    const double eps_k = epsilon(kk);
    for (int j = 1; j <= spectrum_.p(); ++j) {
      const double mu_j = spectrum_.values[static_cast<size_t>(j - 1)];
      const SafeIntervalSet set = safe_intervals(kk, j);
      if (set.empty()) return false;
      for (const Interval& iv : set.intervals) {
        for (int n = -a - 3; n <= a + 3; ++n) {
          if (std::abs(n) < floor_n) continue;
          const double radii = eps_k + epsilon(n);
          for (int i = 1; i <= spectrum_.p(); ++i) {
            if (n == kk && i == j) continue;
            const double mu_i = spectrum_.values[static_cast<size_t>(i - 1)];
            // The difference of two branches is affine in t.
            const double da = mu_kj_value(kk, mu_j, iv.lo) - mu_kj_value(n, mu_i, iv.lo);
            const double db = mu_kj_value(kk, mu_j, iv.hi) - mu_kj_value(n, mu_i, iv.hi);
            if (da * db <= 0.0) return false;
            if (std::min(std::abs(da), std::abs(db)) <= radii) return false;
          }
        }
      }
    }
  }
  return true;
}

int scan_n1(const Asymptotics& asym, int start) {
  const MeanSpectrum& sp = asym.spectrum();
  auto ok = [&](int s) {
    const double eps = asym.epsilon_of_window(s);
    const double lo = (s * kPi) * (s * kPi) + sp.highest() + eps;
    const double hi = (s * kPi + kPi) * (s * kPi + kPi) + sp.lowest() - eps;
    return lo < hi;  // also separates U(s) from U(s+1)
  };
  for (int s = std::max(start, 5); s < kScanLimit; ++s) {
    bool all = true;
    for (int r = 0; r < kPersistence && all; ++r) all = ok(s + r);
    if (all) return s;
  }
  throw Error(ErrorCode::NoConvergence, "N1 scan did not settle");
}

int scan_n2(const Asymptotics& asym, int start) {
  for (int k = std::max(start, 2); k < kScanLimit; ++k) {
    bool all = true;
    for (int r = 0; r < kPersistence && all; ++r) all = asym.branches_separated(k + r, k);
    if (all) return k;
  }
  throw Error(ErrorCode::NoConvergence, "N2 scan did not settle");
}

int choose_n3(int n, int n1, int n2) {
  int s = std::max({n, n1, n2}) + 1;
  while (s / 2 < std::max(n2, 2)) ++s;
  return s;
}

}  // namespace mpband
