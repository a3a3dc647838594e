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

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpband {

using nlohmann::json;

std::vector<Band> extract_bands(const BandGrid& grid) {
  std::vector<Band> bands;
  bands.reserve(static_cast<size_t>(grid.n_bands()));
  for (int n = 0; n < grid.n_bands(); ++n) {
    Band b;
    b.index = n + 1;
    Eigen::Index imin = 0;
    Eigen::Index imax = 0;
    b.lo = grid.lambda.row(n).minCoeff(&imin);
    b.hi = grid.lambda.row(n).maxCoeff(&imax);
    b.argmin = static_cast<int>(imin);
    b.argmax = static_cast<int>(imax);
    bands.push_back(b);
  }
  return bands;
}

std::vector<Gap> extract_gaps(const std::vector<Band>& bands, double touch_tol) {
  std::vector<Gap> gaps;
  for (size_t n = 0; n + 1 < bands.size(); ++n) {
    const double lower = bands[n].hi;
    const double upper = bands[n + 1].lo;
    if (upper - lower > touch_tol) {
      Gap g;
      g.lower = lower;
      g.upper = upper;
      g.between = {bands[n].index, bands[n + 1].index};
      gaps.push_back(g);
    }
  }
  return gaps;
}

double grid_spacing(const BandGrid& grid) {
  if (grid.t_values.size() < 2) return kTwoPi;
  return grid.t_values[1] - grid.t_values[0];
}

std::vector<double> max_adjacent_jumps(const BandGrid& grid) {
  std::vector<double> jumps(static_cast<size_t>(grid.n_bands()), 0.0);
  for (int n = 0; n < grid.n_bands(); ++n) {
    for (int i = 0; i + 1 < grid.n_t(); ++i) {
      jumps[static_cast<size_t>(n)] =
          std::max(jumps[static_cast<size_t>(n)], std::abs(grid.lambda(n, i + 1) - grid.lambda(n, i)));
    }
  }
  return jumps;
}

EdgeRefiner::EdgeRefiner(const MatrixPotential& potential, const BandGrid& grid, int truncation)
    : potential_(potential), grid_(grid), truncation_(truncation), dt_(grid_spacing(grid)) {}

EdgeRefiner::Edge EdgeRefiner::hi(int n, double target) {
  const auto key = std::make_pair(n, true);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  bool complete = true;
  const Edge e = refine(n, true, target, complete);
  if (complete) cache_.emplace(key, e);
  return e;
}

EdgeRefiner::Edge EdgeRefiner::lo(int n, double target) {
  const auto key = std::make_pair(n, false);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  bool complete = true;
  const Edge e = refine(n, false, target, complete);
  if (complete) cache_.emplace(key, e);
  return e;
}

EdgeRefiner::Edge EdgeRefiner::refine(int n, bool maximise, double target, bool& complete) {
  if (n < 1 || n > grid_.n_bands()) throw Error(ErrorCode::InvalidArgument, "band index out of range");
  const double sign = maximise ? 1.0 : -1.0;
  const int nt = grid_.n_t();
  auto sampled = [&](int i) { return sign * grid_.lambda(n - 1, ((i % nt) + nt) % nt); };
  auto value = [&](double t) {
    return sign * galerkin_values(potential_, wrap_quasimomentum(t), truncation_, n)[static_cast<size_t>(n - 1)];
  };

  double best = sampled(0);
  int best_i = 0;
  double jump = 0.0;
  for (int i = 0; i < nt; ++i) {
    if (sampled(i) > best) {
      best = sampled(i);
      best_i = i;
    }
    if (i + 1 < nt) jump = std::max(jump, std::abs(sampled(i + 1) - sampled(i)));
  }
  // A sampled local extremum within one grid jump of the sampled extreme may
  // hide the true one.
  std::vector<std::pair<double, int>> candidates;
  for (int i = 0; i < nt; ++i) {
    if (sampled(i) >= sampled(i - 1) && sampled(i) >= sampled(i + 1) && sampled(i) >= best - jump) {
      candidates.emplace_back(sampled(i), i);
    }
  }
  std::sort(candidates.rbegin(), candidates.rend());
  if (candidates.size() > 8) candidates.resize(8);

  Edge out{sign * best, grid_.t_values[static_cast<size_t>(best_i)]};
  const double goal = sign * target;
  complete = true;
  if (best >= goal) {
    complete = false;
    return out;
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (const auto& [v, i] : candidates) {
    const double t0 = grid_.t_values[static_cast<size_t>(i)];
    double a = t0 - dt_;
    double b = t0 + dt_;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = value(c);
    double fd = value(d);
    // band maxima often sit on kinks, so shrink the bracket to rounding level
    const double floor_t = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(t0) + dt_);
    for (int iter = 0; iter < 96 && b - a > floor_t; ++iter) {
      if (std::max(fc, fd) >= goal) {
        complete = false;
        return {sign * std::max(fc, fd), wrap_quasimomentum(fc > fd ? c : d)};
      }
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = value(d);
      }
    }
    const double f = std::max(fc, fd);
    if (f > sign * out.value) out = {sign * f, wrap_quasimomentum(fc > fd ? c : d)};
  }
  return out;
}

double default_gap_tol(int truncation) {
  const double top = kTwoPi * (truncation + 1);
  return std::max(1e-9, 64.0 * std::numeric_limits<double>::epsilon() * top * top);
}

std::vector<Gap> detect_gaps(const MatrixPotential& potential, const BandGrid& grid,
                             const GapOptions& options) {
  const std::vector<Band> bands = extract_bands(grid);
  const int truncation = grid.max_truncation;
  const double tol = options.gap_tol > 0.0 ? options.gap_tol : default_gap_tol(truncation);
  std::vector<Gap> gaps;
  if (!options.refine) {
    const std::vector<double> jumps = max_adjacent_jumps(grid);
    for (size_t n = 0; n + 1 < bands.size(); ++n) {
      const double rho = std::max(jumps[n], jumps[n + 1]);
      if (bands[n + 1].lo - bands[n].hi > std::max(rho, tol)) {
        Gap g;
        g.lower = bands[n].hi;
        g.upper = bands[n + 1].lo;
        g.between = {bands[n].index, bands[n + 1].index};
        g.t_lower = grid.t_values[static_cast<size_t>(bands[n].argmax)];
        g.t_upper = grid.t_values[static_cast<size_t>(bands[n + 1].argmin)];
        gaps.push_back(g);
      }
    }
  } else {
    EdgeRefiner refiner(potential, grid, truncation);
    for (size_t n = 0; n + 1 < bands.size(); ++n) {
      if (bands[n + 1].lo <= bands[n].hi) continue;
      const EdgeRefiner::Edge lower = refiner.hi(bands[n].index, bands[n + 1].lo - tol);
      if (bands[n + 1].lo - lower.value <= tol) continue;
      const EdgeRefiner::Edge upper = refiner.lo(bands[n + 1].index, lower.value + tol);
      if (upper.value - lower.value > tol) {
        Gap g;
        g.lower = lower.value;
        g.upper = upper.value;
        g.between = {bands[n].index, bands[n + 1].index};
        g.t_lower = lower.t;
        g.t_upper = upper.t;
        gaps.push_back(g);
      }
    }
  }
  if (options.oracle) oracle_check_gaps(potential, truncation, gaps, options.monodromy);
  return gaps;
}

namespace {

// |oracle root - value| for the Galerkin eigenvalue number n at t, or a
// negative number when the determinant has no zero nearby.
double oracle_shift(const MatrixPotential& potential, int truncation, int n, double t,
                    double value, const MonodromyOptions& options) {
  const int m = potential.dimension();
  const int count = std::min(n + 2 * m, (2 * truncation - 1) * m);
  const std::vector<double> values = galerkin_values(potential, t, truncation, count);
  const double width = refine_width(values, value);
  try {
    return std::abs(refine_eigenvalue(potential, t, value, width, options) - value);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoRoot) return -1.0;
    throw;
  }
}

}  // namespace

void oracle_check_gaps(const MatrixPotential& potential, int truncation, std::vector<Gap>& gaps,
                       const MonodromyOptions& options) {
  for (Gap& g : gaps) {
    const double lo = oracle_shift(potential, truncation, g.between[0], g.t_lower, g.lower, options);
    const double hi = oracle_shift(potential, truncation, g.between[1], g.t_upper, g.upper, options);
    g.oracle_checked = true;
    g.oracle_shift = std::max(lo, hi);
    const double limit = 1e-7 * std::max(1.0, std::abs(g.upper));
    g.oracle_confirmed = lo >= 0.0 && hi >= 0.0 && g.oracle_shift <= limit;
  }
}

void assign_windows(std::vector<Gap>& gaps, const Asymptotics& asym) {
  for (Gap& g : gaps) {
    g.window_s.reset();
    const int s0 = static_cast<int>(std::floor(std::sqrt(std::max(g.lower, 0.0)) / kPi));
    for (int s = std::max(5, s0 - 1); s <= s0 + 2; ++s) {
      if (asym.window_u_unchecked(s).contains({g.lower, g.upper})) {
        g.window_s = s;
        break;
      }
    }
  }
}

C1Fit fit_c1(const MatrixPotential& potential, const MeanSpectrum& spectrum,
             const BandGrid& grid, const FitOptions& options) {
  C1Fit fit;
  fit.margin = options.margin;
  fit.separation = kPi * kPi;
  for (int a = 0; a < spectrum.p(); ++a) {
    for (int b = a + 1; b < spectrum.p(); ++b) {
      fit.separation = std::min(fit.separation, std::abs(spectrum.values[b] - spectrum.values[a]));
    }
  }
  std::map<int, double> q;
  auto q_of = [&](int k) {
    auto it = q.find(k);
    if (it == q.end()) it = q.emplace(k, fourier_tail(potential, k)).first;
    return it->second;
  };

  for (int i = 0; i < grid.n_t(); ++i) {
    const double t = grid.t_values[static_cast<size_t>(i)];
    for (int n = 0; n < grid.n_bands(); ++n) {
      const double lambda = grid.lambda(n, i);
      double best = std::numeric_limits<double>::infinity();
      int best_k = 0;
      for (double mu : spectrum.values) {
        const double w = std::sqrt(std::max(lambda - mu, 0.0));
        for (double branch : {w, -w}) {
          const double x = (branch - t) / kTwoPi;
          for (int k : {static_cast<int>(std::floor(x)), static_cast<int>(std::ceil(x))}) {
            const double dev = std::abs(lambda - mu_kj_value(k, mu, t));
            if (dev < best) {
              best = dev;
              best_k = std::abs(k);
            }
          }
        }
      }
      if (best_k < 2) continue;
      const double r = best / (std::log(best_k) / best_k + q_of(best_k));
      double& slot = fit.ratio[best_k];
      slot = std::max(slot, r);
      fit.k_max = std::max(fit.k_max, best_k);
    }
  }

  auto c1_from = [&](int n) {
    double r = 0.0;
    for (auto it = fit.ratio.lower_bound(n); it != fit.ratio.end(); ++it) r = std::max(r, it->second);
    return std::max(options.c1_min, options.margin * r);
  };
  auto separated = [&](int n, double c1) {
    for (int k = n; k < n + 5; ++k) {
      if (!(2.0 * epsilon_k(k, q_of(k), c1) < fit.separation)) return false;
    }
    return true;
  };
  const int last = std::max(2, fit.k_max);
  for (int n = 2; n <= last; ++n) {
    const double c1 = c1_from(n);
    if (separated(n, c1)) {
      fit.c1 = c1;
      fit.n = n;
      fit.settled = true;
      return fit;
    }
  }
  fit.n = last;
  fit.c1 = c1_from(last);
  return fit;
}

AsymptoticParams auto_thresholds(const MatrixPotential& potential, const MeanSpectrum& spectrum,
                                 AsymptoticParams params) {
  const Asymptotics asym(potential, spectrum, params);
  params.n1 = scan_n1(asym, std::max(5, 2 * params.n));
  params.n2 = scan_n2(asym, std::max(2, params.n));
  params.n3 = choose_n3(params.n, params.n1, params.n2);
  return params;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

json to_json(const Verdict& verdict) {
  return {{"outcome", to_string(verdict.outcome)},
          {"checked", verdict.checked},
          {"violations", verdict.violations},
          {"note", verdict.note},
          {"witness", verdict.witness}};
}

namespace {

void settle(Verdict& v) {
  v.outcome = v.violations == 0 ? Outcome::Pass : Outcome::Fail;
}

}  // namespace

Verdict verify_theorem1(const std::vector<Band>& bands, const Asymptotics& asym, int s_lo,
                        int s_hi, EdgeRefiner* refiner) {
  const MeanSpectrum& sp = asym.spectrum();
  const int m = sp.dimension();
  if (s_lo < 4 || s_hi < s_lo) throw Error(ErrorCode::InvalidArgument, "theorem 1 needs 4 <= s_lo <= s_hi");
  if ((s_hi + 1) * m > static_cast<int>(bands.size())) {
    throw Error(ErrorCode::InvalidArgument,
                "theorem 1 up to s = " + std::to_string(s_hi) + " needs " +
                    std::to_string((s_hi + 1) * m) + " bands, have " + std::to_string(bands.size()));
  }
  Verdict v;
  int empty = 0;
  for (int s = s_lo; s <= s_hi; ++s) {
    const double eps = asym.epsilon_of_window(s);
    const Interval is{(s * kPi) * (s * kPi) + sp.highest() + eps,
                      (s * kPi + kPi) * (s * kPi + kPi) + sp.lowest() - eps};
    json entry = {{"s", s}, {"I", {is.lo, is.hi}}, {"eps", eps}};
    if (!(is.lo < is.hi)) {
      entry["empty"] = true;
      ++empty;
      v.witness.push_back(entry);
      continue;
    }
    ++v.checked;
    json covering = json::array();
    bool ok = true;
    for (int n = s * m + 1; n <= s * m + m; ++n) {
      double lo = bands[static_cast<size_t>(n - 1)].lo;
      double hi = bands[static_cast<size_t>(n - 1)].hi;
      if (refiner && !(lo <= is.lo && is.hi <= hi)) {
        lo = std::min(lo, refiner->lo(n).value);
        hi = std::max(hi, refiner->hi(n).value);
      }
      const bool inside = lo <= is.lo && is.hi <= hi;
      ok = ok && inside;
      covering.push_back({{"n", n}, {"band", {lo, hi}}, {"contains", inside}});
    }
    entry["bands"] = covering;
    entry["ok"] = ok;
    if (!ok) ++v.violations;
    v.witness.push_back(entry);
  }
  settle(v);
  if (v.checked == 0) v.note = "every I(s) empty; vacuous";
  else if (empty > 0) v.note = std::to_string(empty) + " empty interval(s) skipped";
  return v;
}

WindowVerdicts verify_corollary1_theorem2(const std::vector<Gap>& gaps, int m,
                                          const Asymptotics& asym, int s_max) {
  WindowVerdicts out;
  const int n1 = asym.params().n1;
  const double threshold = (kPi * n1) * (kPi * n1);
  for (const Gap& g : gaps) {
    if (!(g.lower > threshold)) continue;
    const int s_near = static_cast<int>(std::lround(std::sqrt(g.lower) / kPi));
    const int s_between = g.between[0] % m == 0 ? g.between[0] / m : -1;
    const int s_ref = s_between > 0 ? s_between : s_near;
    if (s_ref > s_max) continue;

    json windows = json::array();
    int hits = 0;
    int s_hit = 0;
    // A gap just above (pi N1)^2 sits between I(N1 - 1) and I(N1), so the
    // boundary window U(N1) is admitted too.
    for (int s = std::max(n1, s_near - 1); s <= s_near + 2; ++s) {
      const GapWindow w = asym.window_u_unchecked(s);
      if (w.contains({g.lower, g.upper})) {
        ++hits;
        s_hit = s;
        windows.push_back({{"s", s}, {"U", {w.lower, w.upper}}});
      }
    }
    const bool between_ok = hits == 1 && g.between[0] == s_hit * m && g.between[1] == s_hit * m + 1;
    ++out.corollary1.checked;
    if (!between_ok) ++out.corollary1.violations;
    out.corollary1.witness.push_back({{"gap", {g.lower, g.upper}},
                                      {"between", {g.between[0], g.between[1]}},
                                      {"windows", windows},
                                      {"ok", between_ok}});

    ++out.theorem2.checked;
    json entry = {{"gap", {g.lower, g.upper}}, {"length", g.length()}};
    if (s_between > 0) {
      const double bound = 2.0 * std::max(asym.epsilon_of_window(s_between - 1),
                                          asym.epsilon_of_window(s_between));
      const bool ok = g.length() <= bound;
      entry["s"] = s_between;
      entry["bound"] = bound;
      entry["ok"] = ok;
      if (!ok) ++out.theorem2.violations;
    } else {
      entry["ok"] = false;
      entry["reason"] = "not between bands sm and sm+1";
      ++out.theorem2.violations;
    }
    out.theorem2.witness.push_back(entry);
  }
  settle(out.corollary1);
  settle(out.theorem2);
  const std::string scope = "gaps above (pi N1)^2 = " + std::to_string(threshold);
  out.corollary1.note = scope;
  out.theorem2.note = scope;
  return out;
}

Verdict verify_theorem3(const MatrixPotential& potential, const Asymptotics& asym, int k_lo,
                        int k_hi, const SolverConfig& config, int samples) {
  const MeanSpectrum& sp = asym.spectrum();
  const int m = sp.dimension();
  if (k_lo < std::max(2, asym.params().n2) || k_hi < k_lo) {
    throw Error(ErrorCode::InvalidArgument, "theorem 3 needs max(2, N2) <= k_lo <= k_hi");
  }
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  Verdict v;
  int empty_sets = 0;

  auto spectrum_at = [&](double t, double top) {
    SolverConfig cfg = config;
    cfg.truncation = 0;
    cfg.t_samples = 2;
    cfg.n_bands = m * (2 * (static_cast<int>(std::sqrt(std::max(top, 0.0)) / kTwoPi) + 2) + 1);
    while (true) {
      std::vector<double> values = eigen_sorted(potential, t, cfg);
      if (values.back() > top) return values;
      cfg.n_bands += 2 * m;
    }
  };

  for (int k = k_lo; k <= k_hi; ++k) {
    for (int kk : {k, -k}) {
      const double eps = asym.epsilon(kk);
      for (int j = 1; j <= sp.p(); ++j) {
        const SafeIntervalSet set = asym.safe_intervals(kk, j);
        if (set.empty()) {
          ++empty_sets;
          v.witness.push_back({{"k", kk}, {"j", j}, {"safe_intervals", json::array()}});
          continue;
        }
        const int mj = sp.multiplicities[static_cast<size_t>(j - 1)];
        const double mu = sp.values[static_cast<size_t>(j - 1)];
        for (const Interval& iv : set.intervals) {
          std::vector<double> ts{iv.lo};
          for (int q = 1; q <= samples; ++q) ts.push_back(iv.lo + iv.length() * q / (samples + 1));
          ts.push_back(iv.hi);
          json counts = json::array();
          bool ok = true;
          int l_first = -1;
          bool l_constant = true;
          for (double t : ts) {
            const double centre = mu_kj_value(kk, mu, t);
            const std::vector<double> values = spectrum_at(t, centre + eps);
            int inside = 0;
            int below = 0;
            for (double x : values) {
              if (x <= centre - eps) ++below;
              else if (x < centre + eps) ++inside;
            }
            if (l_first < 0) l_first = below;
            l_constant = l_constant && below == l_first;
            ok = ok && inside == mj;
            counts.push_back(inside);
          }
          ok = ok && l_constant;
          double ia = mu_kj_value(kk, mu, iv.lo);
          double ib = mu_kj_value(kk, mu, iv.hi);
          if (ia > ib) std::swap(ia, ib);
          ++v.checked;
          if (!ok) ++v.violations;
          v.witness.push_back({{"k", kk},
                               {"j", j},
                               {"interval", {iv.lo, iv.hi}},
                               {"eps", eps},
                               {"expected", mj},
                               {"counts", counts},
                               {"l", l_first},
                               {"image", {ia + eps, ib - eps}},
                               {"bands", {l_first + 1, l_first + mj}},
                               {"ok", ok}});
        }
      }
    }
  }
  settle(v);
  if (empty_sets > 0) v.note = std::to_string(empty_sets) + " (k, j) pair(s) without safe intervals";
  if (v.checked == 0) v.outcome = Outcome::NotApplicable;
  return v;
}

Verdict verify_corollary2(const std::vector<Gap>& gaps, const Asymptotics& asym, int s_max) {
  const MeanSpectrum& sp = asym.spectrum();
  const int n3 = asym.params().n3;
  Verdict v;
  for (const Gap& g : gaps) {
    std::optional<int> s;
    const int s_near = static_cast<int>(std::lround(std::sqrt(std::max(g.lower, 0.0)) / kPi));
    for (int c = std::max(n3 + 1, s_near - 1); c <= s_near + 2 && c <= s_max; ++c) {
      if (asym.window_u_unchecked(c).contains({g.lower, g.upper})) {
        s = c;
        break;
      }
    }
    if (!s) continue;
    ++v.checked;
    json excluded = json::array();
    for (int j = 1; j <= sp.p(); ++j) {
      if (!asym.window_s(j, *s).contains({g.lower, g.upper})) excluded.push_back(j);
    }
    const bool ok = excluded.empty();
    if (!ok) ++v.violations;
    v.witness.push_back({{"gap", {g.lower, g.upper}},
                         {"s", *s},
                         {"gamma", asym.gamma_of_window(*s)},
                         {"excluded_by", excluded},
                         {"ok", ok}});
  }
  settle(v);
  v.note = "gaps in U(s) with N3 < s <= " + std::to_string(s_max);
  return v;
}

Theorem4Threshold theorem4_threshold(const Asymptotics& asym, double tol) {
  Theorem4Threshold out;
  out.condition = condition_one(asym.spectrum(), tol);
  if (!out.condition.satisfied) return out;
  const double d = out.condition.d;
  auto ok = [&](int s) { return 4.0 * asym.gamma_of_window(s) < d; };
  for (int s = asym.params().n3 + 1; s < 400000; ++s) {
    bool all = true;
    for (int r = 0; r < 10 && all; ++r) all = ok(s + r);
    if (all) {
      out.applicable = true;
      out.s_star = s;
      out.h = (kPi * s) * (kPi * s);
      return out;
    }
  }
  throw Error(ErrorCode::NoConvergence, "no window index with 4 gamma < d found");
}

namespace {

std::vector<Interval> merged_pieces(const GapWindow& w) {
  std::vector<Interval> sorted = w.pieces;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& piece : sorted) {
    if (!merged.empty() && piece.lo < merged.back().hi) merged.back().hi = std::max(merged.back().hi, piece.hi);
    else merged.push_back(piece);
  }
  return merged;
}

// Intersection of two unions of open intervals.
std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const Interval& x : a) {
    for (const Interval& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  return out;
}

}  // namespace

Verdict verify_theorem4(const Theorem4Threshold& threshold, const Asymptotics& asym,
                        const std::vector<Gap>& gaps, double covered_top, double window) {
  Verdict v;
  if (!threshold.applicable) {
    v.note = threshold.condition.applicable ? "condition 1 fails (d = 0)" : "fewer than three distinct eigenvalues";
    return v;
  }
  const double top = threshold.h + window;
  if (covered_top < top) {
    v.note = "band data reach " + std::to_string(covered_top) + ", below H + window = " + std::to_string(top);
    return v;
  }
  const auto& triple = threshold.condition.best_triple;
  json premise = json::array();
  for (int s = threshold.s_star; s < threshold.s_star + 10; ++s) {
    std::vector<Interval> common = merged_pieces(asym.window_s(triple[0], s));
    for (int r = 1; r < 3; ++r) common = intersect(common, merged_pieces(asym.window_s(triple[r], s)));
    ++v.checked;
    if (!common.empty()) ++v.violations;
    premise.push_back({{"s", s}, {"gamma", asym.gamma_of_window(s)}, {"empty", common.empty()}});
  }
  json found = json::array();
  for (const Gap& g : gaps) {
    if (g.upper > threshold.h && g.lower < top) {
      ++v.violations;
      found.push_back({g.lower, g.upper});
    }
  }
  ++v.checked;
  v.witness = {{"premise", premise}, {"gaps_in_range", found}, {"range", {threshold.h, top}}};
  settle(v);
  return v;
}

}  // namespace mpband
