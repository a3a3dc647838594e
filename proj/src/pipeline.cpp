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

#include "pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mpband {

using nlohmann::json;

namespace {

const char* kVersion = "0.1.0";

json gap_json(const Gap& g) {
  json out = {{"lower", g.lower},
              {"upper", g.upper},
              {"between", {g.between[0], g.between[1]}},
              {"window_s", g.window_s ? json(*g.window_s) : json(nullptr)},
              {"length", g.length()},
              {"t_lower", g.t_lower},
              {"t_upper", g.t_upper}};
  if (g.oracle_checked) {
    out["oracle"] = {{"confirmed", g.oracle_confirmed}, {"shift", g.oracle_shift}};
  }
  return out;
}

json potential_json(const MatrixPotential& potential) {
  json modes = json::array();
  for (const FourierMode& mode : potential.modes()) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < mode.coefficient.rows(); ++r) {
      json rr = json::array();
      json ir = json::array();
      for (Eigen::Index c = 0; c < mode.coefficient.cols(); ++c) {
        rr.push_back(mode.coefficient(r, c).real());
        ir.push_back(mode.coefficient(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ir);
    }
    modes.push_back({{"n", mode.index}, {"re", re}, {"im", im}});
  }
  return {{"m", potential.dimension()}, {"modes", modes}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string bands_csv(const BandGrid& grid) {
  std::string text = "t,n,lambda\n";
  for (int i = 0; i < grid.n_t(); ++i) {
    const std::string t = format_double(grid.t_values[static_cast<size_t>(i)]);
    for (int n = 0; n < grid.n_bands(); ++n) {
      text += t;
      text += ',';
      text += std::to_string(n + 1);
      text += ',';
      text += format_double(grid.lambda(n, i));
      text += '\n';
    }
  }
  return text;
}

json bands_structured(const BandGrid& grid) {
  json lambda = json::array();
  for (int n = 0; n < grid.n_bands(); ++n) {
    json row = json::array();
    for (int i = 0; i < grid.n_t(); ++i) row.push_back(grid.lambda(n, i));
    lambda.push_back(row);
  }
  return {{"t", grid.t_values}, {"lambda", lambda}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::NoRoot:
      return 2;
    default:
      return 1;
  }
}

// Band count whose lowest band minimum clears `energy`: every branch
// (2 pi k + t)^2 + mu_j below energy + |Q| is counted.
int bands_reaching(const MatrixPotential& potential, const MeanSpectrum& spectrum, double energy) {
  double q = 0.0;
  for (const FourierMode& mode : potential.modes()) q += (mode.index == 0 ? 0.0 : 2.0) * mode.coefficient.norm();
  const double reach = std::sqrt(std::max(energy - spectrum.lowest() + q, 0.0));
  const int k = static_cast<int>(std::ceil(reach / kTwoPi)) + 1;
  return potential.dimension() * (2 * k + 1);
}

}  // namespace

const std::set<std::string>& verdict_names() {
  static const std::set<std::string> names{"theorem1", "corollary1", "theorem2",
                                           "theorem3", "corollary2", "theorem4"};
  return names;
}

std::set<std::string> parse_verify_list(const std::string& spec) {
  if (spec == "all") return verdict_names();
  if (spec == "none" || spec.empty()) return {};
  std::set<std::string> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!verdict_names().count(item)) {
      throw Error(ErrorCode::InvalidArgument, "unknown verification '" + item + "'");
    }
    out.insert(item);
  }
  return out;
}

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    if (config.s_max < 5) throw Error(ErrorCode::InvalidArgument, "s_max must be >= 5");
    if (config.c1 && !(*config.c1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "c1 must be > 0");
    const MatrixPotential potential = load_potential_file(config.potential_path);
    const int m = potential.dimension();
    const CMatrix c = mean_matrix(potential);
    const double cluster_tol = config.cluster_tol >= 0.0 ? config.cluster_tol : default_cluster_tol(c);
    const MeanSpectrum spectrum = mean_spectrum(c, cluster_tol);

    SolverConfig solver = config.solver;
    if (solver.n_bands == 0) solver.n_bands = (config.s_max + 2) * m;
    solver = resolved(solver, potential);
    BandGrid grid = sample_bands(potential, solver);

    AsymptoticParams params;
    json fit_json = nullptr;
    if (config.c1) {
      params.c1 = *config.c1;
      params.n = config.n;
    } else {
      const C1Fit fit = fit_c1(potential, spectrum, grid, config.fit);
      params.c1 = fit.c1;
      params.n = fit.n;
      json ratios = json::object();
      for (const auto& [k, r] : fit.ratio) ratios[std::to_string(k)] = r;
      fit_json = {{"c1", fit.c1}, {"n", fit.n}, {"settled", fit.settled}, {"margin", fit.margin},
                  {"c1_min", config.fit.c1_min}, {"separation", fit.separation}, {"ratios", ratios}};
    }
    validate(params);
    params = auto_thresholds(potential, spectrum, params);
    const Asymptotics asym(potential, spectrum, params);
    const int k3_lo = config.theorem3_k_lo > 0 ? config.theorem3_k_lo : std::max({2, params.n, params.n2});
    const Theorem4Threshold threshold = theorem4_threshold(asym, config.condition_tol);

    const bool want4 = config.verify.count("theorem4") > 0;
    const int base_bands = grid.n_bands();
    std::string extension_note;
    if (want4 && threshold.applicable) {
      const double need = threshold.h + config.theorem4_window;
      if (extract_bands(grid).back().lo < need) {
        const int bands = bands_reaching(potential, spectrum, need);
        if (bands <= config.max_bands) {
          SolverConfig wider = config.solver;
          wider.n_bands = bands;
          solver = resolved(wider, potential);
          grid = sample_bands(potential, solver);
        } else {
          extension_note = "H + window needs " + std::to_string(bands) + " bands, above the cap " +
                           std::to_string(config.max_bands);
        }
      }
    }

    GapOptions gap_options;
    gap_options.oracle = config.oracle;
    gap_options.gap_tol = config.gap_tol;
    gap_options.monodromy = config.monodromy;
    std::vector<Gap> gaps = detect_gaps(potential, grid, gap_options);
    assign_windows(gaps, asym);
    const std::vector<Band> bands = extract_bands(grid);
    const int s_limit = (grid.n_bands() - 1) / m;

    json verdicts = json::object();
    auto skipped = [] { return json{{"outcome", "skipped"}}; };
    for (const std::string& name : verdict_names()) verdicts[name] = skipped();
    bool failed = false;
    auto record = [&](const std::string& name, const Verdict& v) {
      verdicts[name] = to_json(v);
      failed = failed || v.outcome == Outcome::Fail;
    };

    if (config.verify.count("theorem1")) {
      const int s_hi = std::min(config.s_max, grid.n_bands() / m - 1);
      if (s_hi < params.n1) {
        Verdict v;
        v.note = "band data end below N1";
        record("theorem1", v);
      } else {
        EdgeRefiner refiner(potential, grid, grid.max_truncation);
        record("theorem1", verify_theorem1(bands, asym, params.n1, s_hi, &refiner));
      }
    }
    if (config.verify.count("corollary1") || config.verify.count("theorem2")) {
      const WindowVerdicts w = verify_corollary1_theorem2(gaps, m, asym, s_limit);
      if (config.verify.count("corollary1")) record("corollary1", w.corollary1);
      if (config.verify.count("theorem2")) record("theorem2", w.theorem2);
    }
    if (config.verify.count("theorem3")) {
      SolverConfig point = solver;
      point.threads = 1;
      record("theorem3", verify_theorem3(potential, asym, k3_lo, k3_lo + config.theorem3_span, point,
                                         config.theorem3_samples));
    }
    if (config.verify.count("corollary2")) record("corollary2", verify_corollary2(gaps, asym, s_limit));

    json t4 = {{"applicable", threshold.applicable},
               {"d", threshold.condition.d},
               {"triple", threshold.condition.applicable ? json(threshold.condition.best_triple) : json(nullptr)},
               {"H", threshold.applicable ? json(threshold.h) : json(nullptr)},
               {"s_star", threshold.applicable ? json(threshold.s_star) : json(nullptr)}};
    if (want4) {
      Verdict v = verify_theorem4(threshold, asym, gaps, bands.back().lo, config.theorem4_window);
      if (!extension_note.empty()) v.note = extension_note + (v.note.empty() ? "" : "; " + v.note);
      failed = failed || v.outcome == Outcome::Fail;
      t4.update(to_json(v));
    } else {
      t4["outcome"] = "skipped";
    }
    verdicts["theorem4"] = t4;

    json gaps_json = json::array();
    for (const Gap& g : gaps) gaps_json.push_back(gap_json(g));

    result.report = {{"gaps", gaps_json},
                     {"verdicts", verdicts},
                     {"spectrum", {{"mu", spectrum.values}, {"multiplicities", spectrum.multiplicities}}},
                     {"asymptotics",
                      {{"c1", params.c1},
                       {"N", params.n},
                       {"N1", params.n1},
                       {"N2", params.n2},
                       {"N3", params.n3},
                       {"fit", fit_json}}}};

    std::vector<std::string> verify_list(config.verify.begin(), config.verify.end());
    result.manifest = {
        {"version", kVersion},
        {"potential", {{"path", config.potential_path.string()}, {"definition", potential_json(potential)}}},
        {"solver",
         {{"truncation_requested", config.solver.truncation},
          {"truncation_start", solver.truncation},
          {"truncation_used", grid.max_truncation},
          {"max_truncation", solver.max_truncation},
          {"t_samples", solver.t_samples},
          {"n_bands", grid.n_bands()},
          {"n_bands_base", base_bands},
          {"convergence_tol", solver.convergence_tol},
          {"max_certified_shift", grid.max_change}}},
        {"spectrum", {{"cluster_tol", cluster_tol}}},
        {"asymptotics",
         {{"c1_mode", config.c1 ? "fixed" : "fit"},
          {"c1", params.c1},
          {"N", params.n},
          {"N1", params.n1},
          {"N2", params.n2},
          {"N3", params.n3},
          {"tol", params.tol},
          {"fit_margin", config.fit.margin},
          {"fit_c1_min", config.fit.c1_min}}},
        {"gaps",
         {{"refine", gap_options.refine},
          {"oracle", config.oracle},
          {"gap_tol", config.gap_tol > 0.0 ? config.gap_tol : default_gap_tol(grid.max_truncation)}}},
        {"monodromy",
         {{"steps", config.monodromy.steps}, {"tol", config.monodromy.tol}, {"max_steps", config.monodromy.max_steps}}},
        {"verification",
         {{"selected", verify_list},
          {"s_max", config.s_max},
          {"theorem3_k", {k3_lo, k3_lo + config.theorem3_span}},
          {"theorem3_samples", config.theorem3_samples},
          {"condition_tol", config.condition_tol},
          {"theorem4_window", config.theorem4_window},
          {"max_bands", config.max_bands}}},
        {"output", {{"format", config.format == BandFormat::Csv ? "csv" : "structured"}}}};

    std::filesystem::create_directories(config.out_dir);
    if (config.format == BandFormat::Csv) {
      write_text(config.out_dir / "bands.csv", bands_csv(grid));
    } else {
      write_text(config.out_dir / "bands.json", bands_structured(grid).dump(1) + "\n");
    }
    write_text(config.out_dir / "gaps.json", json{{"gaps", gaps_json}}.dump(1) + "\n");
    write_text(config.out_dir / "report.json", result.report.dump(1) + "\n");
    write_text(config.out_dir / "manifest.json", result.manifest.dump(1) + "\n");

    std::ostringstream summary;
    summary << "bands " << grid.n_bands() << " x " << grid.n_t() << ", gaps " << gaps.size()
            << ", c1 " << params.c1 << " (N " << params.n << ", N1 " << params.n1 << ", N2 "
            << params.n2 << ", N3 " << params.n3 << ")\n";
    for (const std::string& name : verdict_names()) {
      summary << name << ": " << verdicts[name]["outcome"].get<std::string>() << "\n";
    }
    result.summary = summary.str();
    result.exit_code = failed ? 3 : 0;
    if (failed) result.message = "theorem verification failed";
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = 1;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = std::string("internal error: ") + e.what();
  }
  return result;
}

}  // namespace mpband
