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

#include "monodromy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace mpband {

namespace {

struct Tableau {
  std::array<double, 4> c{};
  std::array<std::array<double, 4>, 4> a{};
  std::array<double, 4> b{};
};

// Collocation at the Gauss-Legendre nodes: a_ij = int_0^{c_i} l_j,
// b_j = int_0^1 l_j, obtained from the moment conditions
// sum_j a_ij c_j^{q-1} = c_i^q / q.
Tableau make_tableau() {
  Tableau tab;
  const double r1 = std::sqrt((3.0 - 2.0 * std::sqrt(6.0 / 5.0)) / 7.0);
  const double r2 = std::sqrt((3.0 + 2.0 * std::sqrt(6.0 / 5.0)) / 7.0);
  tab.c = {0.5 * (1.0 - r2), 0.5 * (1.0 - r1), 0.5 * (1.0 + r1), 0.5 * (1.0 + r2)};
  Eigen::Matrix4d v;
  for (int q = 0; q < 4; ++q) {
    for (int j = 0; j < 4; ++j) v(q, j) = std::pow(tab.c[j], q);
  }
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(v);
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d rhs;
    for (int q = 0; q < 4; ++q) rhs(q) = std::pow(tab.c[i], q + 1) / (q + 1);
    const Eigen::Vector4d row = lu.solve(rhs);
    for (int j = 0; j < 4; ++j) tab.a[i][j] = row(j);
  }
  Eigen::Vector4d rhs;
  for (int q = 0; q < 4; ++q) rhs(q) = 1.0 / (q + 1);
  const Eigen::Vector4d bw = lu.solve(rhs);
  for (int j = 0; j < 4; ++j) tab.b[j] = bw(j);
  return tab;
}

const Tableau& tableau() {
  static const Tableau tab = make_tableau();
  return tab;
}

CMatrix system_matrix(const MatrixPotential& potential, double lambda, double x) {
  const int m = potential.dimension();
  CMatrix a = CMatrix::Zero(2 * m, 2 * m);
  a.topRightCorner(m, m).setIdentity();
  a.bottomLeftCorner(m, m) = evaluate(potential, x);
  a.bottomLeftCorner(m, m).diagonal().array() -= lambda;
  return a;
}

CMatrix propagate(const MatrixPotential& potential, double lambda, int steps) {
  const Tableau& tab = tableau();
  const int n = 2 * potential.dimension();
  const double h = 1.0 / steps;
  std::array<CMatrix, 4> a;
  CMatrix z = CMatrix::Identity(n, n);
  CMatrix lhs(4 * n, 4 * n);
  CMatrix rhs(4 * n, n);
  for (int step = 0; step < steps; ++step) {
    const double x0 = step * h;
    for (int i = 0; i < 4; ++i) a[i] = system_matrix(potential, lambda, x0 + tab.c[i] * h);
    // Stage slopes K_i = A_i (Z + h sum_j a_ij K_j).
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        lhs.block(i * n, j * n, n, n) = -h * tab.a[i][j] * a[i];
        if (i == j) lhs.block(i * n, j * n, n, n).diagonal().array() += 1.0;
      }
      rhs.block(i * n, 0, n, n) = a[i] * z;
    }
    const CMatrix k = lhs.partialPivLu().solve(rhs);
    for (int i = 0; i < 4; ++i) z += h * tab.b[i] * k.block(i * n, 0, n, n);
  }
  return z;
}

double sup_norm_bound(const MatrixPotential& potential) {
  double bound = 0.0;
  for (const FourierMode& mode : potential.modes()) {
    bound += (mode.index == 0 ? 1.0 : 2.0) * mode.coefficient.norm();
  }
  return bound;
}

}  // namespace

CMatrix MonodromyData::transfer() const {
  const Eigen::Index m = y1.rows();
  CMatrix z(2 * m, 2 * m);
  z << y2, y1, dy2, dy1;
  return z;
}

MonodromyData integrate(const MatrixPotential& potential, double lambda,
                        const MonodromyOptions& options) {
  if (options.steps < 64) throw Error(ErrorCode::InvalidArgument, "steps must be >= 64");
  if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
  const double frequency = std::sqrt(std::abs(lambda) + sup_norm_bound(potential));
  int steps = std::max(options.steps, static_cast<int>(std::ceil(4.0 * frequency)));
  CMatrix coarse = propagate(potential, lambda, steps);
  double error = 0.0;
  while (true) {
    if (2 * steps > options.max_steps) {
      throw Error(ErrorCode::NoConvergence,
                  "monodromy integration did not reach tolerance at lambda = " +
                      std::to_string(lambda) + " (error " + std::to_string(error) + ")");
    }
    CMatrix fine = propagate(potential, lambda, 2 * steps);
    const CMatrix correction = (fine - coarse) / 255.0;
    error = correction.norm();
    steps *= 2;
    if (error <= options.tol * std::max(1.0, fine.norm())) {
      const CMatrix z = fine + correction;
      const int m = potential.dimension();
      MonodromyData out;
      out.lambda = lambda;
      out.y2 = z.topLeftCorner(m, m);
      out.y1 = z.topRightCorner(m, m);
      out.dy2 = z.bottomLeftCorner(m, m);
      out.dy1 = z.bottomRightCorner(m, m);
      out.steps = steps;
      out.error_estimate = error;
      return out;
    }
    coarse = std::move(fine);
  }
}

namespace {

CMatrix boundary_matrix(const MonodromyData& data, double t) {
  const Eigen::Index m = data.y1.rows();
  const Complex z = std::polar(1.0, t);
  CMatrix u(2 * m, 2 * m);
  u << data.y1, data.y2, data.dy1, data.dy2;
  u.topRightCorner(m, m).diagonal().array() -= z;
  u.bottomLeftCorner(m, m).diagonal().array() -= z;
  return u;
}

}  // namespace

Complex delta_from(const MonodromyData& data, double t) {
  return boundary_matrix(data, t).partialPivLu().determinant();
}

Complex delta(const MatrixPotential& potential, double lambda, double t,
              const MonodromyOptions& options) {
  return delta_from(integrate(potential, lambda, options), t);
}

double boundary_sigma_min(const MonodromyData& data, double t) {
  const Eigen::JacobiSVD<CMatrix> svd(boundary_matrix(data, t));
  return svd.singularValues().tail(1)(0);
}

namespace {

struct Probe {
  double lambda;
  double abs_delta;
  double sigma_min;
  double sigma_next;
};

Probe probe(const MatrixPotential& potential, double lambda, double t,
            const MonodromyOptions& options) {
  const MonodromyData data = integrate(potential, lambda, options);
  const CMatrix u = boundary_matrix(data, t);
  const Eigen::JacobiSVD<CMatrix> svd(u);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index n = s.size();
  return {lambda, std::abs(u.partialPivLu().determinant()), s(n - 1), n > 1 ? s(n - 2) : s(0)};
}

template <class Key>
Probe golden_min(const MatrixPotential& potential, double t, double lo, double hi,
                 const MonodromyOptions& options, Key key) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  Probe c = probe(potential, b - invphi * (b - a), t, options);
  Probe d = probe(potential, a + invphi * (b - a), t, options);
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo));
  while (b - a > floor) {
    if (key(c) < key(d)) {
      b = d.lambda;
      d = c;
      c = probe(potential, b - invphi * (b - a), t, options);
    } else {
      a = c.lambda;
      c = d;
      d = probe(potential, a + invphi * (b - a), t, options);
    }
  }
  return key(c) < key(d) ? c : d;
}

}  // namespace

RefinedRoot refine_root(const MatrixPotential& potential, double t, double guess, double width,
                        const MonodromyOptions& options) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bracket width must be > 0");
  const double lo = guess - width;
  const double hi = guess + width;
  const Probe edge_lo = probe(potential, lo, t, options);
  const Probe edge_hi = probe(potential, hi, t, options);
  const double scale = std::max(edge_lo.sigma_min, edge_hi.sigma_min);

  auto by_delta = [](const Probe& p) { return p.abs_delta; };
  Probe best = golden_min(potential, t, lo, hi, options, by_delta);

  // |Delta|^2 is locally quadratic around a simple zero; one vertex step
  // removes the golden-section resolution limit.
  const double h = std::max(1e-6 * width, 64.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1.0, std::abs(best.lambda)));
  if (best.lambda - h > lo && best.lambda + h < hi) {
    const Probe left = probe(potential, best.lambda - h, t, options);
    const Probe right = probe(potential, best.lambda + h, t, options);
    const double f0 = best.abs_delta * best.abs_delta;
    const double fl = left.abs_delta * left.abs_delta;
    const double fr = right.abs_delta * right.abs_delta;
    const double curvature = fl - 2.0 * f0 + fr;
    if (curvature > 0.0) {
      const double shift = 0.5 * h * (fl - fr) / curvature;
      if (std::abs(shift) < h) {
        const Probe vertex = probe(potential, best.lambda + shift, t, options);
        if (vertex.abs_delta <= best.abs_delta) best = vertex;
      }
    }
  }

  RefinedRoot out;
  out.scale = scale;
  out.multiple = best.sigma_next <= 1e-3 * scale;
  if (out.multiple) {
    const double w = std::max(1e-3 * width, 1e-9 * std::max(1.0, std::abs(best.lambda)));
    auto by_sigma = [](const Probe& p) { return p.sigma_min; };
    const Probe polished = golden_min(potential, t, std::max(lo, best.lambda - w),
                                      std::min(hi, best.lambda + w), options, by_sigma);
    if (polished.sigma_min <= best.sigma_min) best = polished;
  }
  out.lambda = best.lambda;
  out.abs_delta = best.abs_delta;
  out.sigma_min = best.sigma_min;

  const double edge_gap = 1e-3 * width;
  if (best.lambda - lo < edge_gap || hi - best.lambda < edge_gap ||
      !(best.sigma_min <= 1e-4 * scale)) {
    throw Error(ErrorCode::NoRoot, "no zero of the characteristic determinant in [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) +
                                       "] at t = " + std::to_string(t));
  }
  return out;
}

double refine_width(const std::vector<double>& values, double value) {
  const double scale = std::max(1.0, std::abs(value));
  double nearest = std::numeric_limits<double>::infinity();
  for (double v : values) {
    const double d = std::abs(v - value);
    if (d > 1e-9 * scale) nearest = std::min(nearest, d);
  }
  return std::min(1e-3 * scale, 0.4 * nearest);
}

double refine_eigenvalue(const MatrixPotential& potential, double t, double guess, double width,
                         const MonodromyOptions& options) {
  return refine_root(potential, t, guess, width, options).lambda;
}

}  // namespace mpband
