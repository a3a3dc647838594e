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

#include <vector>

#include "common.hpp"
#include "potential.hpp"

namespace mpband {

struct MonodromyOptions {
  int steps = 64;          // initial step count, >= 64
  double tol = 1e-12;      // relative Richardson error target
  int max_steps = 1 << 16;
};

// Boundary values at x = 1 of the matrix solutions of -Y'' + QY = lambda Y
// with Y1(0) = 0, Y1'(0) = I and Y2(0) = I, Y2'(0) = 0.
struct MonodromyData {
  double lambda = 0.0;
  CMatrix y1, dy1, y2, dy2;
  int steps = 0;
  double error_estimate = 0.0;

  // [[Y2, Y1], [Y2', Y1']]; det = 1 in exact arithmetic.
  CMatrix transfer() const;
};

// 4-stage Gauss-Legendre collocation (order 8) on the first-order system
// Z' = [[0, I], [Q - lambda, 0]] Z, Z(0) = I, with step doubling and
// Richardson extrapolation until the error estimate meets options.tol.
MonodromyData integrate(const MatrixPotential& potential, double lambda,
                        const MonodromyOptions& options = {});

// det [[Y1(1), Y2(1) - zI], [Y1'(1) - zI, Y2'(1)]] with z = e^{it}.
Complex delta_from(const MonodromyData& data, double t);
Complex delta(const MatrixPotential& potential, double lambda, double t,
              const MonodromyOptions& options = {});

// Smallest singular value of the boundary matrix above; vanishes linearly
// at every Bloch eigenvalue regardless of multiplicity.
double boundary_sigma_min(const MonodromyData& data, double t);

// Bracket half-width for refining `value` given every Galerkin eigenvalue
// at the same t: min(1e-3 max(1, |value|), 0.4 x the distance to the
// nearest value that differs from it by more than 1e-9 max(1, |value|)).
double refine_width(const std::vector<double>& values, double value);

struct RefinedRoot {
  double lambda = 0.0;
  double abs_delta = 0.0;
  double sigma_min = 0.0;
  double scale = 0.0;  // sigma_min at the bracket edges
  bool multiple = false;
};

// Minimises |Delta(., t)|^2 on [guess - width, guess + width] by golden
// section and a quadratic vertex step. A root whose boundary matrix has a
// second vanishing singular value is polished on sigma_min instead, since
// |Delta| flattens there. Throws NoRoot when the minimum is not a zero or
// sits on the bracket edge.
RefinedRoot refine_root(const MatrixPotential& potential, double t, double guess, double width,
                        const MonodromyOptions& options = {});
double refine_eigenvalue(const MatrixPotential& potential, double t, double guess, double width,
                         const MonodromyOptions& options = {});

}  // namespace mpband
