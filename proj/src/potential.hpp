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

#include <filesystem>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace mpband {

// One Fourier coefficient Q_n of the potential, n >= 0. Negative modes are
// implied: Q_{-n} = Q_n^H.
struct FourierMode {
  int index = 0;
  CMatrix coefficient;
};

// Period-1 Hermitian m x m potential
//   Q(x) = Q_0 + sum_{n>=1} (Q_n e^{i 2 pi n x} + Q_n^H e^{-i 2 pi n x}).
// Immutable once constructed; the constructor enforces every invariant.
class MatrixPotential {
 public:
  MatrixPotential(int dimension, std::vector<FourierMode> modes);

  int dimension() const { return dimension_; }
  // Modes sorted by index.
  const std::vector<FourierMode>& modes() const { return modes_; }
  // Largest index with a stored coefficient (0 for a constant potential).
  int max_index() const { return static_cast<int>(dense_.size()) - 1; }

  // Q_n for any integer n; zero when the mode is absent.
  CMatrix coefficient(int n) const;
  // Same, without the copy, for n >= 0 within range.
  const CMatrix& stored(int n) const { return dense_[static_cast<size_t>(n)]; }

 private:
  int dimension_;
  std::vector<FourierMode> modes_;
  std::vector<CMatrix> dense_;  // index 0..max_index, zero-filled
};

// Parses the JSON potential document:
//   {"m": 2, "modes": [{"n": 0, "re": [[..],[..]], "im": [[..],[..]]}, ...]}
// Matrices may be nested rows or a flat row-major list; "im" defaults to 0.
MatrixPotential load_potential(std::string_view document);
MatrixPotential load_potential_file(const std::filesystem::path& path);

// Q(x). The result is Hermitian bit-for-bit and depends only on x mod 1.
CMatrix evaluate(const MatrixPotential& potential, double x);

// C = integral of Q over one period, which is exactly Q_0.
CMatrix mean_matrix(const MatrixPotential& potential);

// Distinct eigenvalues mu_1 < ... < mu_p of a Hermitian matrix, with
// multiplicities and an orthonormal eigenvector family per value.
struct MeanSpectrum {
  std::vector<double> values;
  std::vector<int> multiplicities;
  std::vector<CMatrix> eigenvectors;  // m x m_j, orthonormal columns

  int p() const { return static_cast<int>(values.size()); }
  int dimension() const;
  double lowest() const { return values.front(); }
  double highest() const { return values.back(); }
  double spread() const { return values.back() - values.front(); }
};

double default_cluster_tol(const CMatrix& c);

// Raw eigenvalues closer than cluster_tol (chained) are merged into one
// distinct value; the reported value is the cluster mean.
MeanSpectrum mean_spectrum(const CMatrix& c, double cluster_tol);

// Spectrum with given distinct values, simple multiplicities and the
// canonical basis as eigenvectors; C = diag(values).
MeanSpectrum diagonal_spectrum(const std::vector<double>& values);

// q_k = max |(Q_n)_{s,r}| over n in {2k, 2k+1} (and their negatives, which
// have the same moduli).
double fourier_tail(const MatrixPotential& potential, int k);

}  // namespace mpband
