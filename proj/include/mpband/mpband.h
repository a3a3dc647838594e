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

/* C interface to the mpband core: periodic matrix Schrodinger operators,
 * Bloch bands, gaps and the asymptotic checks. Every function returns an
 * mpb_status; on failure mpb_last_error() holds a message for the calling
 * thread. Matrices are m x m, row-major, split into real and imaginary
 * arrays. */

#ifndef MPBAND_MPBAND_H
#define MPBAND_MPBAND_H

#include <stddef.h>

#if defined(MPBAND_BUILDING_LIBRARY)
#define MPB_API __attribute__((visibility("default")))
#else
#define MPB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpb_status {
  MPB_OK = 0,
  MPB_ERR_INVALID_ARGUMENT = 1,
  MPB_ERR_PARSE = 2,
  MPB_ERR_NOT_HERMITIAN = 3,
  MPB_ERR_NO_CONVERGENCE = 4,
  MPB_ERR_NO_ROOT = 5,
  MPB_ERR_IO = 6,
  MPB_ERR_BUFFER_TOO_SMALL = 7,
  MPB_ERR_INTERNAL = 8
} mpb_status;

typedef struct mpb_potential mpb_potential;

MPB_API const char* mpb_version(void);
MPB_API const char* mpb_last_error(void);
MPB_API const char* mpb_status_name(mpb_status status);

/* Potential documents: {"m": int, "modes": [{"n": int, "re": [[..]], "im": [[..]]}]}. */
MPB_API mpb_status mpb_potential_parse(const char* document, mpb_potential** out);
MPB_API mpb_status mpb_potential_load(const char* path, mpb_potential** out);
MPB_API void mpb_potential_free(mpb_potential* potential);
MPB_API int mpb_potential_dimension(const mpb_potential* potential);
MPB_API int mpb_potential_max_index(const mpb_potential* potential);

/* Q(x); re and im receive m*m values. */
MPB_API mpb_status mpb_potential_evaluate(const mpb_potential* potential, double x, double* re,
                                          double* im);
/* The zero mode C. */
MPB_API mpb_status mpb_mean_matrix(const mpb_potential* potential, double* re, double* im);
/* Distinct eigenvalues of C (ascending) and multiplicities; capacity >= m.
 * A negative cluster_tol selects 1e-9 max(1, |C|). */
MPB_API mpb_status mpb_mean_spectrum(const mpb_potential* potential, double cluster_tol,
                                     double* values, int* multiplicities, int capacity, int* p);
/* q_k: largest entry modulus of the modes 2k and 2k+1, k >= 1. */
MPB_API mpb_status mpb_fourier_tail(const mpb_potential* potential, int k, double* q);

typedef struct mpb_solver_config {
  int truncation;        /* Fourier cutoff K; 0 = default */
  int t_samples;         /* quasimomentum grid size, >= 2 */
  int n_bands;           /* 0 = 16 m */
  double convergence_tol;
  int max_truncation;
  int threads;           /* 0 = hardware concurrency */
} mpb_solver_config;

MPB_API void mpb_solver_config_init(mpb_solver_config* config);

/* Lowest n_bands Bloch eigenvalues at quasimomentum t, certified against
 * K + 4. truncation_used may be NULL. */
MPB_API mpb_status mpb_bloch_eigenvalues(const mpb_potential* potential, double t,
                                         const mpb_solver_config* config, double* values,
                                         int capacity, int* count, int* truncation_used);

/* Band samples: t_values receives t_samples values, lambda receives
 * n_bands * t_samples values with lambda[n * t_samples + i] = lambda_{n+1}(t_i). */
MPB_API mpb_status mpb_sample_bands(const mpb_potential* potential,
                                    const mpb_solver_config* config, double* t_values,
                                    double* lambda, size_t capacity);

/* Characteristic determinant Delta(lambda, t) from the monodromy blocks. */
MPB_API mpb_status mpb_delta(const mpb_potential* potential, double lambda, double t, double* re,
                             double* im);
/* det of the 2m x 2m transfer matrix (1 in exact arithmetic). */
MPB_API mpb_status mpb_transfer_determinant(const mpb_potential* potential, double lambda,
                                            double* re, double* im);
/* Zero of Delta(., t) in [guess - width, guess + width]. */
MPB_API mpb_status mpb_refine_eigenvalue(const mpb_potential* potential, double t, double guess,
                                         double width, double* lambda);

/* Condition 1 on distinct values mu[0..p): d and the maximising triple
 * (1-based). applicable is 0 when p < 3. */
MPB_API mpb_status mpb_condition_one(const double* mu, int p, double tol, double* d,
                                     int triple[3], int* applicable, int* satisfied);

typedef enum mpb_band_format { MPB_FORMAT_CSV = 0, MPB_FORMAT_STRUCTURED = 1 } mpb_band_format;

typedef struct mpb_run_config {
  const char* potential_path;
  const char* out_dir;
  mpb_band_format format;
  mpb_solver_config solver;
  int s_max;
  int fit_c1;     /* nonzero: fit c1 on the band grid */
  double c1;      /* used when fit_c1 == 0 */
  const char* verify; /* "all", "none" or a comma list of theorem1, corollary1,
                         theorem2, theorem3, corollary2, theorem4 */
  int oracle;     /* nonzero: confirm gap edges with the characteristic determinant */
} mpb_run_config;

MPB_API void mpb_run_config_init(mpb_run_config* config);

/* Runs the pipeline and writes bands, gaps, report and manifest into
 * out_dir. exit_code: 0 ok, 1 invalid input, 2 non-convergence, 3 a
 * requested verification failed; for 1 to 3 mpb_last_error() explains.
 * The status is an error only for a malformed config struct. */
MPB_API mpb_status mpb_run(const mpb_run_config* config, int* exit_code);
/* One line per verdict from the last mpb_run on this thread. */
MPB_API const char* mpb_last_summary(void);

#ifdef __cplusplus
}
#endif

#endif /* MPBAND_MPBAND_H */
