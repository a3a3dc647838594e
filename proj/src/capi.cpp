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

#include "mpband/mpband.h"

#include <cstring>
#include <string>

#include "analysis.hpp"
#include "bloch.hpp"
#include "monodromy.hpp"
#include "pipeline.hpp"
#include "potential.hpp"
#include "unperturbed.hpp"

struct mpb_potential {
  mpband::MatrixPotential value;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_summary;

mpb_status status_for(mpband::ErrorCode code) {
  using mpband::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return MPB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return MPB_ERR_PARSE;
    case ErrorCode::NotHermitian: return MPB_ERR_NOT_HERMITIAN;
    case ErrorCode::NoConvergence: return MPB_ERR_NO_CONVERGENCE;
    case ErrorCode::NoRoot: return MPB_ERR_NO_ROOT;
    case ErrorCode::Io: return MPB_ERR_IO;
    case ErrorCode::Internal: return MPB_ERR_INTERNAL;
  }
  return MPB_ERR_INTERNAL;
}

mpb_status fail(mpb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
mpb_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const mpband::Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MPB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MPB_ERR_INTERNAL, e.what());
  }
}

#define MPB_REQUIRE(cond, what) \
  if (!(cond)) return fail(MPB_ERR_INVALID_ARGUMENT, what)

void split(const mpband::CMatrix& a, double* re, double* im) {
  const Eigen::Index m = a.rows();
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      re[r * m + c] = a(r, c).real();
      im[r * m + c] = a(r, c).imag();
    }
  }
}

mpband::SolverConfig to_core(const mpb_solver_config& c) {
  mpband::SolverConfig s;
  s.truncation = c.truncation;
  s.t_samples = c.t_samples;
  s.n_bands = c.n_bands;
  s.convergence_tol = c.convergence_tol;
  s.max_truncation = c.max_truncation;
  s.threads = c.threads;
  return s;
}

}  // namespace

extern "C" {

const char* mpb_version(void) { return "0.1.0"; }

const char* mpb_last_error(void) { return last_error.c_str(); }

const char* mpb_status_name(mpb_status status) {
  switch (status) {
    case MPB_OK: return "ok";
    case MPB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MPB_ERR_PARSE: return "parse error";
    case MPB_ERR_NOT_HERMITIAN: return "not hermitian";
    case MPB_ERR_NO_CONVERGENCE: return "no convergence";
    case MPB_ERR_NO_ROOT: return "no root";
    case MPB_ERR_IO: return "i/o error";
    case MPB_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case MPB_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

mpb_status mpb_potential_parse(const char* document, mpb_potential** out) {
  MPB_REQUIRE(document && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new mpb_potential{mpband::load_potential(document)};
    return MPB_OK;
  });
}

mpb_status mpb_potential_load(const char* path, mpb_potential** out) {
  MPB_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new mpb_potential{mpband::load_potential_file(path)};
    return MPB_OK;
  });
}

void mpb_potential_free(mpb_potential* potential) { delete potential; }

int mpb_potential_dimension(const mpb_potential* potential) {
  return potential ? potential->value.dimension() : 0;
}

int mpb_potential_max_index(const mpb_potential* potential) {
  return potential ? potential->value.max_index() : -1;
}

mpb_status mpb_potential_evaluate(const mpb_potential* potential, double x, double* re, double* im) {
  MPB_REQUIRE(potential && re && im, "null argument");
  return guarded([&] {
    split(mpband::evaluate(potential->value, x), re, im);
    return MPB_OK;
  });
}

mpb_status mpb_mean_matrix(const mpb_potential* potential, double* re, double* im) {
  MPB_REQUIRE(potential && re && im, "null argument");
  return guarded([&] {
    split(mpband::mean_matrix(potential->value), re, im);
    return MPB_OK;
  });
}

mpb_status mpb_mean_spectrum(const mpb_potential* potential, double cluster_tol, double* values,
                             int* multiplicities, int capacity, int* p) {
  MPB_REQUIRE(potential && values && multiplicities && p, "null argument");
  return guarded([&] {
    const mpband::CMatrix c = mpband::mean_matrix(potential->value);
    const double tol = cluster_tol < 0.0 ? mpband::default_cluster_tol(c) : cluster_tol;
    const mpband::MeanSpectrum sp = mpband::mean_spectrum(c, tol);
    *p = sp.p();
    if (capacity < sp.p()) return fail(MPB_ERR_BUFFER_TOO_SMALL, "capacity below p");
    for (int j = 0; j < sp.p(); ++j) {
      values[j] = sp.values[static_cast<size_t>(j)];
      multiplicities[j] = sp.multiplicities[static_cast<size_t>(j)];
    }
    return MPB_OK;
  });
}

mpb_status mpb_fourier_tail(const mpb_potential* potential, int k, double* q) {
  MPB_REQUIRE(potential && q, "null argument");
  return guarded([&] {
    *q = mpband::fourier_tail(potential->value, k);
    return MPB_OK;
  });
}

void mpb_solver_config_init(mpb_solver_config* config) {
  if (!config) return;
  const mpband::SolverConfig d;
  config->truncation = d.truncation;
  config->t_samples = d.t_samples;
  config->n_bands = d.n_bands;
  config->convergence_tol = d.convergence_tol;
  config->max_truncation = d.max_truncation;
  config->threads = d.threads;
}

mpb_status mpb_bloch_eigenvalues(const mpb_potential* potential, double t,
                                 const mpb_solver_config* config, double* values, int capacity,
                                 int* count, int* truncation_used) {
  MPB_REQUIRE(potential && config && values && count, "null argument");
  return guarded([&] {
    const mpband::BlochSolve r = mpband::solve_bloch(potential->value, t, to_core(*config));
    *count = static_cast<int>(r.values.size());
    if (truncation_used) *truncation_used = r.truncation;
    if (capacity < *count) return fail(MPB_ERR_BUFFER_TOO_SMALL, "capacity below n_bands");
    std::memcpy(values, r.values.data(), r.values.size() * sizeof(double));
    return MPB_OK;
  });
}

mpb_status mpb_sample_bands(const mpb_potential* potential, const mpb_solver_config* config,
                            double* t_values, double* lambda, size_t capacity) {
  MPB_REQUIRE(potential && config && t_values && lambda, "null argument");
  return guarded([&] {
    const mpband::SolverConfig core = mpband::resolved(to_core(*config), potential->value);
    const size_t need = static_cast<size_t>(core.n_bands) * static_cast<size_t>(core.t_samples);
    if (capacity < need) return fail(MPB_ERR_BUFFER_TOO_SMALL, "capacity below n_bands * t_samples");
    const mpband::BandGrid grid = mpband::sample_bands(potential->value, core);
    for (int i = 0; i < grid.n_t(); ++i) t_values[i] = grid.t_values[static_cast<size_t>(i)];
    for (int n = 0; n < grid.n_bands(); ++n) {
      for (int i = 0; i < grid.n_t(); ++i) lambda[static_cast<size_t>(n) * grid.n_t() + i] = grid.lambda(n, i);
    }
    return MPB_OK;
  });
}

mpb_status mpb_delta(const mpb_potential* potential, double lambda, double t, double* re, double* im) {
  MPB_REQUIRE(potential && re && im, "null argument");
  return guarded([&] {
    const mpband::Complex d = mpband::delta(potential->value, lambda, t);
    *re = d.real();
    *im = d.imag();
    return MPB_OK;
  });
}

mpb_status mpb_transfer_determinant(const mpb_potential* potential, double lambda, double* re,
                                    double* im) {
  MPB_REQUIRE(potential && re && im, "null argument");
  return guarded([&] {
    const mpband::Complex d = mpband::integrate(potential->value, lambda).transfer().determinant();
    *re = d.real();
    *im = d.imag();
    return MPB_OK;
  });
}

mpb_status mpb_refine_eigenvalue(const mpb_potential* potential, double t, double guess,
                                 double width, double* lambda) {
  MPB_REQUIRE(potential && lambda, "null argument");
  return guarded([&] {
    *lambda = mpband::refine_eigenvalue(potential->value, t, guess, width);
    return MPB_OK;
  });
}

mpb_status mpb_condition_one(const double* mu, int p, double tol, double* d, int triple[3],
                             int* applicable, int* satisfied) {
  MPB_REQUIRE(mu && d && triple && applicable && satisfied && p >= 0, "null argument");
  return guarded([&] {
    const mpband::ConditionOneReport r =
        mpband::condition_one(std::span<const double>(mu, static_cast<size_t>(p)), tol);
    *d = r.d;
    *applicable = r.applicable ? 1 : 0;
    *satisfied = r.satisfied ? 1 : 0;
    for (int i = 0; i < 3; ++i) triple[i] = r.best_triple[static_cast<size_t>(i)];
    return MPB_OK;
  });
}

void mpb_run_config_init(mpb_run_config* config) {
  if (!config) return;
  const mpband::RunConfig d;
  config->potential_path = nullptr;
  config->out_dir = ".";
  config->format = MPB_FORMAT_CSV;
  mpb_solver_config_init(&config->solver);
  config->s_max = d.s_max;
  config->fit_c1 = 0;
  config->c1 = *d.c1;
  config->verify = "all";
  config->oracle = 0;
}

mpb_status mpb_run(const mpb_run_config* config, int* exit_code) {
  MPB_REQUIRE(config && exit_code && config->potential_path && config->out_dir, "null argument");
  last_summary.clear();
  return guarded([&] {
    mpband::RunConfig rc;
    rc.potential_path = config->potential_path;
    rc.out_dir = config->out_dir;
    rc.format = config->format == MPB_FORMAT_STRUCTURED ? mpband::BandFormat::Structured
                                                        : mpband::BandFormat::Csv;
    rc.solver = to_core(config->solver);
    rc.s_max = config->s_max;
    if (config->fit_c1) rc.c1.reset();
    else rc.c1 = config->c1;
    rc.oracle = config->oracle != 0;
    try {
      rc.verify = mpband::parse_verify_list(config->verify ? config->verify : "all");
    } catch (const mpband::Error& e) {
      *exit_code = 1;
      last_error = e.what();
      return MPB_OK;
    }
    const mpband::RunResult result = mpband::run(rc);
    *exit_code = result.exit_code;
    last_error = result.message;
    last_summary = result.summary;
    return MPB_OK;
  });
}

const char* mpb_last_summary(void) { return last_summary.c_str(); }

}  // extern "C"
