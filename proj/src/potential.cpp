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

#include "potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "json.hpp"

namespace mpband {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Parse, field + ": " + what);
}

Eigen::MatrixXd read_real_matrix(const json& node, int m, const std::string& field) {
  Eigen::MatrixXd out(m, m);
  if (!node.is_array()) fail_field(field, "expected an array");
  auto number = [&](const json& v, int r, int c) {
    if (!v.is_number()) {
      fail_field(field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                 "expected a number");
    }
    double x = v.get<double>();
    if (!std::isfinite(x)) fail_field(field, "non-finite entry");
    return x;
  };
  if (node.size() == static_cast<size_t>(m) * m && (node.empty() || !node[0].is_array())) {
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) out(r, c) = number(node[static_cast<size_t>(r * m + c)], r, c);
    return out;
  }
  if (node.size() != static_cast<size_t>(m)) {
    fail_field(field, "expected " + std::to_string(m) + " rows or " + std::to_string(m * m) +
                          " row-major entries, got " + std::to_string(node.size()));
  }
  for (int r = 0; r < m; ++r) {
    const json& row = node[static_cast<size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<size_t>(m)) {
      fail_field(field + "[" + std::to_string(r) + "]",
                 "expected a row of " + std::to_string(m) + " numbers");
    }
    for (int c = 0; c < m; ++c) out(r, c) = number(row[static_cast<size_t>(c)], r, c);
  }
  return out;
}

}  // namespace

MatrixPotential::MatrixPotential(int dimension, std::vector<FourierMode> modes)
    : dimension_(dimension), modes_(std::move(modes)) {
  if (dimension_ < 1) {
    throw Error(ErrorCode::InvalidArgument, "potential dimension m must be >= 1");
  }
  std::sort(modes_.begin(), modes_.end(),
            [](const FourierMode& a, const FourierMode& b) { return a.index < b.index; });
  int top = 0;
  for (size_t i = 0; i < modes_.size(); ++i) {
    const FourierMode& mode = modes_[i];
    if (mode.index < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "mode index " + std::to_string(mode.index) + " is negative; store n >= 0 only");
    }
    if (i > 0 && modes_[i - 1].index == mode.index) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate mode index " + std::to_string(mode.index));
    }
    if (mode.coefficient.rows() != dimension_ || mode.coefficient.cols() != dimension_) {
      throw Error(ErrorCode::InvalidArgument,
                  "mode " + std::to_string(mode.index) + " coefficient is not " +
                      std::to_string(dimension_) + "x" + std::to_string(dimension_));
    }
    if (!mode.coefficient.allFinite()) {
      throw Error(ErrorCode::InvalidArgument,
                  "mode " + std::to_string(mode.index) + " has non-finite entries");
    }
    if (mode.index == 0 && mode.coefficient != mode.coefficient.adjoint()) {
      throw Error(ErrorCode::NotHermitian, "zero mode is not Hermitian");
    }
    top = std::max(top, mode.index);
  }
  dense_.assign(static_cast<size_t>(top) + 1, CMatrix::Zero(dimension_, dimension_));
  for (const FourierMode& mode : modes_) dense_[static_cast<size_t>(mode.index)] = mode.coefficient;
}

CMatrix MatrixPotential::coefficient(int n) const {
  const int a = n < 0 ? -n : n;
  if (a > max_index()) return CMatrix::Zero(dimension_, dimension_);
  return n < 0 ? CMatrix(stored(a).adjoint()) : stored(a);
}

MatrixPotential load_potential(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) fail_field("<root>", "expected an object with keys \"m\" and \"modes\"");
  if (!doc.contains("m")) fail_field("m", "missing");
  if (!doc["m"].is_number_integer()) fail_field("m", "expected an integer");
  const long long m_raw = doc["m"].get<long long>();
  if (m_raw < 1 || m_raw > 4096) {
    throw Error(ErrorCode::InvalidArgument, "m: must be >= 1, got " + std::to_string(m_raw));
  }
  const int m = static_cast<int>(m_raw);
  if (!doc.contains("modes")) fail_field("modes", "missing");
  const json& modes_node = doc["modes"];
  if (!modes_node.is_array()) fail_field("modes", "expected a list");

  std::vector<FourierMode> modes;
  std::set<int> seen;
  for (size_t i = 0; i < modes_node.size(); ++i) {
    const std::string field = "modes[" + std::to_string(i) + "]";
    const json& node = modes_node[i];
    if (!node.is_object()) fail_field(field, "expected an object");
    if (!node.contains("n") || !node["n"].is_number_integer()) {
      fail_field(field + ".n", "expected an integer");
    }
    const long long n = node["n"].get<long long>();
    if (n < 0 || n > 1'000'000) fail_field(field + ".n", "must be a non-negative integer");
    if (!seen.insert(static_cast<int>(n)).second) {
      throw Error(ErrorCode::InvalidArgument,
                  field + ".n: duplicate mode index " + std::to_string(n));
    }
    if (!node.contains("re")) fail_field(field + ".re", "missing");
    const Eigen::MatrixXd re = read_real_matrix(node["re"], m, field + ".re");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(m, m);
    if (node.contains("im")) im = read_real_matrix(node["im"], m, field + ".im");
    if (n == 0 && (re != re.transpose() || im != -im.transpose())) {
      throw Error(ErrorCode::NotHermitian,
                  field + ": zero mode must have symmetric re and antisymmetric im");
    }
    CMatrix coefficient(m, m);
    coefficient.real() = re;
    coefficient.imag() = im;
    modes.push_back({static_cast<int>(n), std::move(coefficient)});
  }
  return MatrixPotential(m, std::move(modes));
}

MatrixPotential load_potential_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open potential file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_potential(buffer.str());
}

CMatrix evaluate(const MatrixPotential& potential, double x) {
  const double frac = x - std::floor(x);
  CMatrix wave = CMatrix::Zero(potential.dimension(), potential.dimension());
  for (const FourierMode& mode : potential.modes()) {
    if (mode.index == 0) continue;
    double cycles = static_cast<double>(mode.index) * frac;
    cycles -= std::floor(cycles);
    wave += mode.coefficient * std::polar(1.0, kTwoPi * cycles);
  }
  CMatrix q = potential.stored(0) + wave + wave.adjoint();
  // Exact symmetrisation: entry (r,c) and (c,r) are then conjugates bit-for-bit.
  return 0.5 * (q + q.adjoint());
}

CMatrix mean_matrix(const MatrixPotential& potential) { return potential.stored(0); }

int MeanSpectrum::dimension() const {
  int m = 0;
  for (int mult : multiplicities) m += mult;
  return m;
}

double default_cluster_tol(const CMatrix& c) {
  double norm = 0.0;
  if (c.size() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(c, Eigen::EigenvaluesOnly);
    norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  return 1e-9 * std::max(1.0, norm);
}

MeanSpectrum mean_spectrum(const CMatrix& c, double cluster_tol) {
  if (c.rows() != c.cols() || c.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "mean_spectrum: expected a non-empty square matrix");
  }
  if (!(cluster_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mean_spectrum: cluster_tol must be >= 0");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(c);
  const Eigen::VectorXd& raw = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();
  const int m = static_cast<int>(c.rows());

  MeanSpectrum out;
  int start = 0;
  for (int i = 1; i <= m; ++i) {
    if (i < m && raw(i) - raw(i - 1) <= cluster_tol) continue;
    const int size = i - start;
    out.values.push_back(raw.segment(start, size).mean());
    out.multiplicities.push_back(size);
    Eigen::HouseholderQR<CMatrix> qr(vectors.middleCols(start, size));
    CMatrix basis = qr.householderQ() * CMatrix::Identity(m, size);
    out.eigenvectors.push_back(std::move(basis));
    start = i;
  }
  return out;
}

MeanSpectrum diagonal_spectrum(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "diagonal_spectrum: no values");
  if (!std::is_sorted(values.begin(), values.end()) ||
      std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw Error(ErrorCode::InvalidArgument, "diagonal_spectrum: values must strictly increase");
  }
  const int m = static_cast<int>(values.size());
  MeanSpectrum out;
  out.values = values;
  out.multiplicities.assign(values.size(), 1);
  for (int j = 0; j < m; ++j) out.eigenvectors.push_back(CMatrix::Identity(m, m).col(j));
  return out;
}

double fourier_tail(const MatrixPotential& potential, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "fourier_tail: k must be >= 1");
  double q = 0.0;
  for (long long n : {2LL * k, 2LL * k + 1}) {
    if (n <= potential.max_index()) {
      q = std::max(q, potential.stored(static_cast<int>(n)).cwiseAbs().maxCoeff());
    }
  }
  return q;
}

}  // namespace mpband
