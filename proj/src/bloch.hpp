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

struct SolverConfig {
  int truncation = 0;  // Fourier cutoff K (indices -K..K); 0 selects the default
  int t_samples = 101;
  int n_bands = 0;  // 0 selects 16 m
  double convergence_tol = 1e-8;
  int max_truncation = 1024;
  int threads = 0;  // 0 uses the hardware concurrency
};

// Resolves the zero defaults against a potential and checks ranges.
SolverConfig resolved(const SolverConfig& config, const MatrixPotential& potential);

// max(8, 2 ceil(n_bands / m) + max mode index + 4).
int default_truncation(const MatrixPotential& potential, int n_bands);

// Galerkin matrix of L_t(Q) in the basis e^{i(2 pi n + t)x} e_a, n = -K..K.
// Row (n + K) m + a. Diagonal blocks (2 pi n + t)^2 I + Q_0, block (n, n') is
// Q_{n - n'}. Hermitian by construction.
CMatrix assemble(const MatrixPotential& potential, double t, int truncation);

// Lowest count Galerkin eigenvalues at a fixed K, without certification.
std::vector<double> galerkin_values(const MatrixPotential& potential, double t, int truncation,
                                    int count);

struct BlochSolve {
  std::vector<double> values;  // lowest n_bands, non-decreasing
  int truncation = 0;          // K actually used
  double max_change = 0.0;     // largest shift between K and K + 4
};

// Lowest n_bands Bloch eigenvalues at t. Certified by re-solving at K + 4;
// K doubles until the shift is within convergence_tol.
BlochSolve solve_bloch(const MatrixPotential& potential, double t, const SolverConfig& config);

std::vector<double> eigen_sorted(const MatrixPotential& potential, double t,
                                 const SolverConfig& config);

// Uniform grid of quasimomenta that contains 0 and pi exactly. Even counts
// tile (-pi, pi] with step 2 pi / n; odd counts tile [-pi, pi] with step
// 2 pi / (n - 1), so -pi (the same point as pi) also appears.
std::vector<double> quasimomentum_grid(int samples);

struct BandGrid {
  std::vector<double> t_values;
  Eigen::MatrixXd lambda;  // lambda(n, i) = lambda_{n+1}(t_i)
  int max_truncation = 0;
  double max_change = 0.0;

  int n_bands() const { return static_cast<int>(lambda.rows()); }
  int n_t() const { return static_cast<int>(lambda.cols()); }
  bool coarse() const { return t_values.size() < 3; }
};

// Bands on quasimomentum_grid(config.t_samples). Grid points are solved
// independently across worker threads; the result does not depend on the
// thread count.
BandGrid sample_bands(const MatrixPotential& potential, const SolverConfig& config);

// Wraps t into (-pi, pi].
double wrap_quasimomentum(double t);

}  // namespace mpband
