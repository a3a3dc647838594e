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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "potential.hpp"

using namespace mpband;

namespace {

ErrorCode code_of(const char* document) {
  try {
    load_potential(document);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

std::string message_of(const char* document) {
  try {
    load_potential(document);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

MatrixPotential mixed() {
  return load_potential(R"({"m": 2, "modes": [
    {"n": 0, "re": [[1, 0.5], [0.5, -1]], "im": [[0, 0.25], [-0.25, 0]]},
    {"n": 1, "re": [[0.5, 0.3], [0.2, 0.4]], "im": [[0.1, 0], [0.3, -0.2]]},
    {"n": 3, "re": [[0, 0.7], [0.1, 0]]}]})");
}

}  // namespace

TEST_CASE("single cosine mode evaluates to 2 cos 2 pi x") {
  const MatrixPotential q = load_potential(R"({"m": 1, "modes": [{"n": 1, "re": [[1]]}]})");
  CHECK(evaluate(q, 0.0)(0, 0).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(evaluate(q, 0.25)(0, 0)) < 1e-15);
  CHECK(evaluate(q, 0.5)(0, 0).real() == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("constant potential is its zero mode everywhere") {
  const MatrixPotential q = load_potential_file(oracle::data("constant_swap.json"));
  CMatrix c(2, 2);
  c << 0, 1, 1, 0;
  for (double x : {0.0, 0.1, 0.37, 0.99, 5.5}) CHECK((evaluate(q, x) - c).norm() == 0.0);
  CHECK(mean_matrix(q) == c);
}

TEST_CASE("loader rejects invalid documents") {
  CHECK(code_of(R"({"m": 2, "modes": [{"n": 0, "re": [[0, 0], [0, 0]], "im": [[0, 1], [0, 0]]}]})") ==
        ErrorCode::NotHermitian);
  CHECK(code_of(R"({"m": 1, "modes": [{"n": 1, "re": [[1]]}, {"n": 1, "re": [[2]]}]})") ==
        ErrorCode::InvalidArgument);
  CHECK(code_of(R"({"m": 0, "modes": []})") == ErrorCode::InvalidArgument);
  CHECK(code_of(R"({"m": 1, "modes": [{"n": -1, "re": [[1]]}]})") == ErrorCode::Parse);
  CHECK(code_of(R"({"m": 2, "modes": [{"n": 0, "re": [[0, 1]]}]})") == ErrorCode::Parse);
  CHECK(code_of(R"({"m": 1, "modes": [{"n": 0, "re": [[1]],)") == ErrorCode::Parse);
  CHECK(code_of(R"({"m": 1})") == ErrorCode::Parse);
}

TEST_CASE("diagnostics name the line or the field") {
  CHECK(message_of("{\"m\": 1,\n \"modes\": [\n  {\"n\": 0, \"re\": [[1]]\n]}").find("line") != std::string::npos);
  CHECK(message_of(R"({"m": 1, "modes": [{"n": 2}]})").find("modes[0].re") != std::string::npos);
  CHECK(message_of(R"({"m": 1, "modes": [{"n": 2, "re": [[1]]}, {"n": 3, "re": [["x"]]}]})")
            .find("modes[1].re") != std::string::npos);
}

TEST_CASE("flat row-major matrices and missing im are accepted") {
  const MatrixPotential a = load_potential(R"({"m": 2, "modes": [{"n": 1, "re": [1, 2, 3, 4]}]})");
  const MatrixPotential b = load_potential(
      R"({"m": 2, "modes": [{"n": 1, "re": [[1, 2], [3, 4]], "im": [[0, 0], [0, 0]]}]})");
  CHECK(a.coefficient(1) == b.coefficient(1));
  CHECK(a.coefficient(-1) == b.coefficient(1).adjoint());
}

TEST_CASE("file loading") {
  CHECK(load_potential_file(oracle::data("mathieu.json")).max_index() == 1);
  CHECK_THROWS_AS(load_potential_file(oracle::data("missing.json")), Error);
  try {
    load_potential_file(oracle::data("malformed.json"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("mean matrix of a zero-mean cosine block") {
  const MatrixPotential q = load_potential(
      R"({"m": 2, "modes": [{"n": 0, "re": [[0, 1], [1, 0]]}, {"n": 1, "re": [[1, 0], [0, 0]]}]})");
  CMatrix c(2, 2);
  c << 0, 1, 1, 0;
  CHECK(mean_matrix(q) == c);
  const MatrixPotential z = load_potential(R"({"m": 2, "modes": [{"n": 1, "re": [[1, 0], [0, 1]]}]})");
  CHECK(mean_matrix(z).norm() == 0.0);
}

TEST_CASE("mean spectrum examples") {
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  MeanSpectrum s = mean_spectrum(swap, 1e-10);
  REQUIRE(s.p() == 2);
  CHECK(s.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.multiplicities == std::vector<int>{1, 1});

  s = mean_spectrum(CMatrix::Identity(2, 2), 1e-10);
  CHECK(s.p() == 1);
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.multiplicities == std::vector<int>{2});

  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 0, 1, 3;
  s = mean_spectrum(d, 1e-10);
  CHECK(s.p() == 3);
  CHECK(s.values[2] == doctest::Approx(3.0));
  CHECK(s.multiplicities == std::vector<int>{1, 1, 1});
}

TEST_CASE("fourier tail examples") {
  const MatrixPotential low = load_potential(R"({"m": 1, "modes": [{"n": 0, "re": [[2]]}, {"n": 1, "re": [[1]]}]})");
  CHECK(fourier_tail(low, 1) == 0.0);
  const MatrixPotential two = load_potential(R"({"m": 1, "modes": [{"n": 2, "re": [[0.3]]}]})");
  CHECK(fourier_tail(two, 1) == doctest::Approx(0.3));
  CHECK(fourier_tail(two, 50) == 0.0);
  CHECK_THROWS_AS(fourier_tail(two, 0), Error);
  const MatrixPotential odd = load_potential(R"({"m": 1, "modes": [{"n": 5, "re": [[0.1]], "im": [[-0.4]]}]})");
  CHECK(fourier_tail(odd, 2) == doctest::Approx(std::hypot(0.1, 0.4)));
}

TEST_CASE("property: Q(x) is exactly Hermitian and 1-periodic") {
  const MatrixPotential q = mixed();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dyadic(0, 1 << 20);
  for (int i = 0; i < 100; ++i) {
    const CMatrix v = evaluate(q, u(rng));
    CHECK((v - v.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const double x = dyadic(rng) / double(1 << 20);
    CHECK((evaluate(q, x + 1.0) - evaluate(q, x)).cwiseAbs().maxCoeff() == 0.0);
    const double y = u(rng);
    CHECK((evaluate(q, y + 1.0) - evaluate(q, y)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("property: mean matrix equals the midpoint rule") {
  const MatrixPotential q = mixed();
  CMatrix sum = CMatrix::Zero(2, 2);
  const int nodes = 2048;
  for (int i = 0; i < nodes; ++i) sum += evaluate(q, (i + 0.5) / nodes);
  sum /= nodes;
  CHECK((sum - mean_matrix(q)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("property: mean spectrum residuals, orthonormality and multiplicities") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 1 + trial % 6;
    CMatrix z(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) z(r, c) = Complex(g(rng), g(rng));
    const CMatrix u = z.householderQr().householderQ();
    Eigen::VectorXd d(m);
    for (int r = 0; r < m; ++r) d(r) = std::floor(3.0 * g(rng));  // forces repeats
    const CMatrix c = u * d.cast<Complex>().asDiagonal() * u.adjoint();
    const CMatrix herm = 0.5 * (c + c.adjoint());
    const double tol = default_cluster_tol(herm);
    const MeanSpectrum s = mean_spectrum(herm, tol);
    int total = 0;
    std::vector<double> distinct(d.data(), d.data() + m);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    CHECK(s.p() == static_cast<int>(distinct.size()));
    CMatrix all(m, 0);
    for (int j = 0; j < s.p(); ++j) {
      total += s.multiplicities[j];
      const CMatrix& e = s.eigenvectors[j];
      CHECK((herm * e - s.values[j] * e).norm() <= 1e-12 * std::max(1.0, herm.norm()));
      CMatrix grown(m, all.cols() + e.cols());
      grown << all, e;
      all = grown;
    }
    CHECK(total == m);
    CHECK((all.adjoint() * all - CMatrix::Identity(m, m)).norm() < 1e-12);
  }
}

TEST_CASE("property: fourier tail vanishes beyond half the top mode") {
  const MatrixPotential q = mixed();
  for (int k = 2; k < 10; ++k) CHECK(fourier_tail(q, k) == 0.0);
  CHECK(fourier_tail(q, 1) == doctest::Approx(0.7));
}
