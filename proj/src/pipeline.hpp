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
#include <optional>
#include <set>
#include <string>

#include "json.hpp"

#include "analysis.hpp"
#include "bloch.hpp"
#include "monodromy.hpp"

namespace mpband {

enum class BandFormat { Csv, Structured };

struct RunConfig {
  std::filesystem::path potential_path;
  std::filesystem::path out_dir = ".";
  BandFormat format = BandFormat::Csv;

  SolverConfig solver;  // n_bands 0 selects (s_max + 2) m
  int s_max = 14;       // highest window index the default band count reaches

  std::optional<double> c1 = 1.0;  // nullopt fits c1 on the band grid
  int n = 2;                       // localisation index used with a fixed c1
  FitOptions fit;
  double cluster_tol = -1.0;  // negative selects default_cluster_tol

  std::set<std::string> verify;  // names from verdict_names(); empty = none
  bool oracle = false;
  double gap_tol = 0.0;
  MonodromyOptions monodromy;

  int theorem3_k_lo = 0;  // 0 selects max(2, N, N2)
  int theorem3_span = 4;
  int theorem3_samples = 9;
  double condition_tol = 1e-9;
  double theorem4_window = 200.0;
  int max_bands = 2400;  // cap on the band count when extending to H + window
};

const std::set<std::string>& verdict_names();

// Parses "all", "none" or a comma-separated subset of verdict_names().
std::set<std::string> parse_verify_list(const std::string& spec);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 invalid input, 2 non-convergence, 3 verification failure
  std::string message;
  std::string summary;
  nlohmann::json report;
  nlohmann::json manifest;
};

// Runs the whole pipeline and writes bands.csv (or bands.json), gaps.json,
// report.json and manifest.json into out_dir. Never throws; failures are
// mapped to exit codes with the diagnostic in message.
RunResult run(const RunConfig& config);

}  // namespace mpband
