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

#include "bloch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace mpband {

SolverConfig resolved(const SolverConfig& config, const MatrixPotential& potential) {
  SolverConfig out = config;
  const int m = potential.dimension();
  if (out.n_bands == 0) out.n_bands = 16 * m;
  if (out.n_bands < 1) throw Error(ErrorCode::InvalidArgument, "n_bands must be >= 1");
  if (out.t_samples < 2) throw Error(ErrorCode::InvalidArgument, "t_samples must be >= 2");
  if (out.truncation < 0) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 0");
  if (!(out.convergence_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "convergence_tol must be > 0");
  }
  if (out.truncation == 0) out.truncation = default_truncation(potential, out.n_bands);
  // Keep n_bands <= (2K+1) m - 2m: the top 2m Galerkin values are discarded.
  const int needed = (out.n_bands + m - 1) / m;  // ceil(n_bands / m)
  out.truncation = std::max(out.truncation, (needed + 2) / 2);
  if (out.max_truncation < out.truncation) out.max_truncation = out.truncation;
  if (out.threads <= 0) {
    out.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return out;
}

int default_truncation(const MatrixPotential& potential, int n_bands) {
  const int m = potential.dimension();
  const int per_m = (n_bands + m - 1) / m;
  return std::max(8, 2 * per_m + potential.max_index() + 4);
}

CMatrix assemble(const MatrixPotential& potential, double t, int truncation) {
  const int m = potential.dimension();
  const int blocks = 2 * truncation + 1;
  const int size = blocks * m;
  CMatrix a = CMatrix::Zero(size, size);
  const int reach = std::min(potential.max_index(), 2 * truncation);
  for (int row = 0; row < blocks; ++row) {
    const int n = row - truncation;
    const double w = kTwoPi * n + t;
    a.block(row * m, row * m, m, m) = potential.stored(0);
    a.block(row * m, row * m, m, m).diagonal().array() += w * w;
    for (int d = 1; d <= reach; ++d) {
      const int col = row - d;
      if (col < 0) break;
      const CMatrix& q = potential.stored(d);
      a.block(row * m, col * m, m, m) = q;
      a.block(col * m, row * m, m, m) = q.adjoint();
    }
  }
  return a;
}

namespace {

// The Galerkin matrix is banded: block (n, n') vanishes for |n - n'| beyond
// the largest mode. LAPACK's banded Hermitian driver with an index range
// keeps the cost near O(size * band^2) instead of O(size^3).
std::vector<double> lowest_values(const MatrixPotential& potential, double t, int truncation,
                                  int count) {
  const int m = potential.dimension();
  const int blocks = 2 * truncation + 1;
  const lapack_int size = blocks * m;
  const int reach = std::min(potential.max_index(), 2 * truncation);
  const lapack_int kd = std::min<lapack_int>(reach * m + m - 1, size - 1);
  const lapack_int ldab = kd + 1;
  std::vector<Complex> ab(static_cast<size_t>(ldab * size), Complex(0.0, 0.0));
  auto put = [&](lapack_int i, lapack_int j, Complex v) {
    if (i <= j && j - i <= kd) ab[static_cast<size_t>(kd + i - j + j * ldab)] = v;
  };
  for (int col = 0; col < blocks; ++col) {
    const double w = kTwoPi * (col - truncation) + t;
    for (int d = 0; d <= reach && d <= col; ++d) {
      const int row = col - d;
      // Block (row, col) = Q_{row - col} = Q_d^dagger.
      const CMatrix& q = potential.stored(d);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          put(row * m + a, col * m + b, std::conj(q(b, a)));
        }
      }
    }
    for (int a = 0; a < m; ++a) {
      const lapack_int i = col * m + a;
      ab[static_cast<size_t>(kd + i * ldab)] += w * w;
    }
  }
  std::vector<double> w(static_cast<size_t>(size));
  std::vector<lapack_int> ifail(static_cast<size_t>(size));
  Complex qdummy(0.0, 0.0);
  Complex zdummy(0.0, 0.0);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zhbevx(
      LAPACK_COL_MAJOR, 'N', 'I', 'U', size, kd, ab.data(), ldab, &qdummy, 1, 0.0, 0.0, 1,
      count, 2.0 * LAPACKE_dlamch('S'), &found, w.data(), &zdummy, 1, ifail.data());
  if (info != 0 || found != count) {
    throw Error(ErrorCode::NoConvergence,
                "banded Hermitian eigensolver failed (info " + std::to_string(info) + ")");
  }
  return {w.begin(), w.begin() + count};
}

}  // namespace

std::vector<double> galerkin_values(const MatrixPotential& potential, double t, int truncation,
                                    int count) {
  const int m = potential.dimension();
  if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 1");
  if (count < 1 || count > (2 * truncation - 1) * m) {
    throw Error(ErrorCode::InvalidArgument, "eigenvalue count outside the converged range");
  }
  return lowest_values(potential, t, truncation, count);
}

BlochSolve solve_bloch(const MatrixPotential& potential, double t, const SolverConfig& config) {
  const SolverConfig cfg = resolved(config, potential);
  int k = cfg.truncation;
  double last_change = 0.0;
  while (k <= cfg.max_truncation) {
    std::vector<double> coarse = lowest_values(potential, t, k, cfg.n_bands);
    std::vector<double> fine = lowest_values(potential, t, k + 4, cfg.n_bands);
    double change = 0.0;
    for (size_t i = 0; i < coarse.size(); ++i) {
      change = std::max(change, std::abs(fine[i] - coarse[i]));
    }
    if (change <= cfg.convergence_tol) return {std::move(coarse), k, change};
    last_change = change;
    k *= 2;
  }
  throw Error(ErrorCode::NoConvergence,
              "Bloch eigenvalues did not converge at t = " + std::to_string(t) +
                  " up to K = " + std::to_string(cfg.max_truncation) +
                  " (last shift " + std::to_string(last_change) + ")");
}

std::vector<double> eigen_sorted(const MatrixPotential& potential, double t,
                                 const SolverConfig& config) {
  return solve_bloch(potential, t, config).values;
}

std::vector<double> quasimomentum_grid(int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "t_samples must be >= 2");
  std::vector<double> grid(static_cast<size_t>(samples));
  if (samples % 2 == 0) {
    for (int i = 1; i <= samples; ++i) {
      double t = -kPi + kTwoPi * i / samples;
      if (2 * i == samples) t = 0.0;
      if (i == samples) t = kPi;
      grid[static_cast<size_t>(i - 1)] = t;
    }
  } else {
    const int last = samples - 1;
    for (int i = 0; i <= last; ++i) {
      double t = -kPi + kTwoPi * i / last;
      if (i == 0) t = -kPi;
      if (2 * i == last) t = 0.0;
      if (i == last) t = kPi;
      grid[static_cast<size_t>(i)] = t;
    }
  }
  return grid;
}

double wrap_quasimomentum(double t) {
  double r = std::remainder(t, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

BandGrid sample_bands(const MatrixPotential& potential, const SolverConfig& config) {
  const SolverConfig cfg = resolved(config, potential);
  BandGrid grid;
  grid.t_values = quasimomentum_grid(cfg.t_samples);
  const int nt = static_cast<int>(grid.t_values.size());
  grid.lambda.resize(cfg.n_bands, nt);

  std::vector<BlochSolve> results(static_cast<size_t>(nt));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(nt));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < nt; i = next++) {
      try {
        results[static_cast<size_t>(i)] = solve_bloch(potential, grid.t_values[static_cast<size_t>(i)], cfg);
      } catch (...) {
        errors[static_cast<size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::min(cfg.threads, nt);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (int i = 0; i < nt; ++i) {
    const BlochSolve& r = results[static_cast<size_t>(i)];
    for (int n = 0; n < cfg.n_bands; ++n) grid.lambda(n, i) = r.values[static_cast<size_t>(n)];
    grid.max_truncation = std::max(grid.max_truncation, r.truncation);
    grid.max_change = std::max(grid.max_change, r.max_change);
  }
  return grid;
}

}  // namespace mpband
