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

// Command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "mpband/mpband.h"

int main(int argc, char** argv) {
  CLI::App app{"Bloch bands, spectral gaps and asymptotic checks for -y'' + Q(x) y"};
  app.set_version_flag("--version", std::string(mpb_version()));

  mpb_run_config config;
  mpb_run_config_init(&config);

  std::string potential;
  std::string out = "out";
  std::string c1 = "1.0";
  std::string verify = "all";
  std::string oracle = "off";
  std::string format = "csv";
  app.add_option("--potential", potential, "potential definition (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--kmax", config.solver.truncation, "Fourier cutoff K (0 = automatic)")->check(CLI::NonNegativeNumber);
  app.add_option("--tgrid", config.solver.t_samples, "quasimomentum samples")->check(CLI::Range(2, 1 << 20));
  app.add_option("--nbands", config.solver.n_bands, "bands to compute (0 = (smax + 2) m)")->check(CLI::NonNegativeNumber);
  app.add_option("--c1", c1, "localisation constant, or 'fit'");
  app.add_option("--verify", verify, "all, none, or a comma list of theorem1,corollary1,theorem2,theorem3,corollary2,theorem4");
  app.add_option("--oracle", oracle, "confirm gap edges with the characteristic determinant")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--tol", config.solver.convergence_tol, "eigenvalue convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "band table format")->check(CLI::IsMember({"csv", "structured"}));
  app.add_option("--smax", config.s_max, "highest window index covered by default")->check(CLI::Range(5, 100000));
  app.add_option("--threads", config.solver.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (c1 == "fit") {
    config.fit_c1 = 1;
  } else {
    char* end = nullptr;
    config.c1 = std::strtod(c1.c_str(), &end);
    if (end == c1.c_str() || *end != '\0' || !(config.c1 > 0.0)) {
      std::fprintf(stderr, "--c1: expected a positive number or 'fit', got '%s'\n", c1.c_str());
      return 1;
    }
  }
  config.potential_path = potential.c_str();
  config.out_dir = out.c_str();
  config.verify = verify.c_str();
  config.oracle = oracle == "on";
  config.format = format == "csv" ? MPB_FORMAT_CSV : MPB_FORMAT_STRUCTURED;

  int exit_code = 0;
  if (mpb_run(&config, &exit_code) != MPB_OK) {
    std::fprintf(stderr, "mpband: %s\n", mpb_last_error());
    return 1;
  }
  std::fputs(mpb_last_summary(), stdout);
  if (exit_code != 0) std::fprintf(stderr, "mpband: %s\n", mpb_last_error());
  return exit_code;
}
