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

/* Plain C client of libmpband. */
#include <math.h>
#include <stdio.h>

#include "mpband/mpband.h"

static int failures = 0;

#define EXPECT(cond)                                        \
  do {                                                      \
    if (!(cond)) {                                          \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                           \
    }                                                       \
  } while (0)

int main(void) {
  mpb_potential* q = NULL;
  double values[8];
  int count = 0;
  mpb_solver_config cfg;
  const double pi = 3.14159265358979323846;

  EXPECT(mpb_potential_parse("{\"m\": 1, \"modes\": []}", &q) == MPB_OK);
  mpb_solver_config_init(&cfg);
  cfg.n_bands = 3;
  EXPECT(mpb_bloch_eigenvalues(q, 0.5, &cfg, values, 8, &count, NULL) == MPB_OK);
  EXPECT(count == 3);
  EXPECT(fabs(values[0] - 0.25) < 1e-10);
  EXPECT(fabs(values[1] - (2 * pi - 0.5) * (2 * pi - 0.5)) < 1e-9);
  mpb_potential_free(q);

  EXPECT(mpb_potential_parse("{\"m\": 1", &q) == MPB_ERR_PARSE);
  EXPECT(mpb_last_error()[0] != '\0');
  if (failures == 0) printf("c client ok\n");
  return failures == 0 ? 0 : 1;
}
