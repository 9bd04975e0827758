// Copyright 2026 The jsccsj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jsccsj/jsccsj.hpp"

namespace {

using jsccsj::format_number;

std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

jsccsj::LoadedSpec load_input(const std::string& path) {
  if (path == "-") {
    return jsccsj::load_spec_text(read_all(std::cin));
  }
  return jsccsj::load_spec_file(path);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + out_path);
  }
  out << content;
}

std::string condition_verdict(const jsccsj::ConditionResult& c) {
  if (c.passed) return c.degenerate ? "PASS (degenerate)" : "PASS";
  return c.degenerate ? "DEGENERATE" : "FAIL";
}

// Effective tolerance: explicit value if given, otherwise 1e-9, relaxed to
// 1e-6 when any parsed distribution row needed renormalizing (rounded
// decimal input).
double effective_tol(const std::optional<double>& requested,
                     const jsccsj::LoadedSpec& spec) {
  if (requested.has_value()) return *requested;
  return spec.max_row_drift > 1e-12 ? 1e-6 : 1e-9;
}

void print_condition(const std::string& name, const jsccsj::ConditionResult& c,
                     const char* slope_name, const char* intercept_name) {
  std::printf("  %s condition: %s\n", name.c_str(),
              condition_verdict(c).c_str());
  if (intercept_name != nullptr) {
    std::printf("    %s=%s %s=%s residual=%s\n", slope_name,
                format_number(c.slope).c_str(), intercept_name,
                format_number(c.intercept).c_str(),
                format_number(c.residual).c_str());
  } else {
    std::printf("    %s=%s residual=%s\n", slope_name,
                format_number(c.slope).c_str(),
                format_number(c.residual).c_str());
  }
  if (!c.diagnosis.empty()) {
    std::printf("    note: %s\n", c.diagnosis.c_str());
  }
  for (const auto& v : c.slack_violations) {
    if (v.j < 0) {
      std::printf("    off-support violation at x=%zu (amount %s)\n", v.x,
                  format_number(v.amount).c_str());
    } else {
      std::printf("    off-support violation at (x=%zu, j=%td) (amount %s)\n",
                  v.x, v.j, format_number(v.amount).c_str());
    }
  }
}

void print_match_machine(const jsccsj::MatchReport& report) {
  std::printf("[machine]\n");
  std::printf("verdict=%s\n", report.passed ? "MATCHED" : "NOT_MATCHED");
  std::printf("passed=%d\n", report.passed ? 1 : 0);
  std::printf("tol=%s\n", format_number(report.tol).c_str());
  const auto dump = [](const char* prefix, const jsccsj::ConditionResult& c) {
    std::printf("%s_passed=%d\n", prefix, c.passed ? 1 : 0);
    std::printf("%s_degenerate=%d\n", prefix, c.degenerate ? 1 : 0);
    std::printf("%s_residual=%s\n", prefix, format_number(c.residual).c_str());
  };
  dump("cond_encoder_cost", report.encoder_cost);
  dump("cond_distortion", report.distortion);
  dump("cond_jammer_cost", report.jammer_cost);
  std::printf("a1=%s\n", format_number(report.a1).c_str());
  std::printf("a2=%s\n", format_number(report.a2).c_str());
  std::printf("b1=%s\n", format_number(report.b1).c_str());
  for (std::size_t s = 0; s < report.d0.size(); ++s) {
    std::printf("d0_%zu=%s\n", s, format_number(report.d0[s]).c_str());
  }
  std::printf("c1=%s\n", format_number(report.c1).c_str());
  std::printf("c2=%s\n", format_number(report.c2).c_str());
  std::printf("slack_violations=%zu\n", report.slack_violations.size());
}

int cmd_validate(const std::string& path) {
  try {
    const jsccsj::LoadedSpec spec = load_input(path);
    std::printf("valid: %s system%s\n",
                spec.has_finite() ? "finite" : "gaussian",
                (spec.has_finite() && spec.gaussian) ? " + gaussian block" : "");
    if (spec.max_row_drift > 0.0) {
      std::printf("note: largest row-sum drift %s (rows renormalized)\n",
                  format_number(spec.max_row_drift).c_str());
    }
    std::printf("[machine]\nok=1\nrow_drift=%s\n",
                format_number(spec.max_row_drift).c_str());
    return 0;
  } catch (const jsccsj::SpecError& e) {
    for (const auto& d : e.diagnostics()) {
      std::printf("violation: %s\n", d.c_str());
    }
    std::printf("[machine]\nok=0\nviolations=%zu\n", e.diagnostics().size());
    return 1;
  }
}

int cmd_check_matched(const std::string& path, std::optional<double> tol_opt,
                      std::size_t grid_m, double grid_l) {
  const jsccsj::LoadedSpec spec = load_input(path);
  if (spec.has_finite()) {
    if (!spec.profile) {
      throw std::runtime_error("check-matched: the file carries no profile");
    }
    const double tol = effective_tol(tol_opt, spec);
    const jsccsj::MatchReport report =
        jsccsj::check_matched(*spec.system, *spec.profile, tol);
    std::printf("matched source-jammer-channel verification (tol=%s)\n",
                format_number(tol).c_str());
    print_condition("encoder-cost", report.encoder_cost, "a1", "a2");
    print_condition("distortion", report.distortion, "b1", nullptr);
    for (std::size_t s = 0; s < report.d0.size(); ++s) {
      std::printf("    d0(%zu)=%s\n", s, format_number(report.d0[s]).c_str());
    }
    print_condition("jammer-cost", report.jammer_cost, "c1", "c2");
    std::printf("verdict: %s\n", report.passed ? "MATCHED" : "NOT MATCHED");
    print_match_machine(report);
    return 0;
  }
  if (!spec.gaussian_profile) {
    throw std::runtime_error("check-matched: the file carries no profile");
  }
  jsccsj::GridSpec grid{grid_m, grid_l};
  const double width = jsccsj::resolve_grid_width(grid);
  const double tol =
      tol_opt.has_value() ? *tol_opt : jsccsj::default_grid_tol(grid_m);
  const jsccsj::DiscretizedMatchReport disc = jsccsj::discretized_matching_check(
      *spec.gaussian, *spec.gaussian_profile, grid, tol);
  std::printf(
      "matched source-jammer-channel verification on a %zu-point grid "
      "(+/- %s stddev, tol=%s)\n",
      grid.points, format_number(width).c_str(), format_number(tol).c_str());
  print_condition("encoder-cost", disc.report.encoder_cost, "a1", "a2");
  print_condition("distortion", disc.report.distortion, "b1", nullptr);
  print_condition("jammer-cost", disc.report.jammer_cost, "c1", "c2");
  const char* verdict = disc.verdict == jsccsj::GridVerdict::kMatched
                            ? "MATCHED"
                            : disc.verdict == jsccsj::GridVerdict::kNotMatched
                                  ? "NOT MATCHED"
                                  : "INCONCLUSIVE";
  std::printf("verdict: %s\n", verdict);
  print_match_machine(disc.report);
  std::printf("grid_m=%zu\ngrid_l=%s\ngrid_verdict=%s\n", grid.points,
              format_number(width).c_str(), verdict);
  return 0;
}

int cmd_nash_verify(const std::string& path, std::optional<double> tol_opt,
                    std::size_t block_n) {
  const jsccsj::LoadedSpec spec = load_input(path);
  if (spec.has_finite()) {
    if (!spec.profile) {
      throw std::runtime_error("nash-verify: the file carries no profile");
    }
    const double tol = effective_tol(tol_opt, spec);
    const jsccsj::GameReport report =
        jsccsj::nash_gap(*spec.system, *spec.profile, tol, block_n);
    std::printf("nash equilibrium verification (tol=%s, block_n=%zu)\n",
                format_number(tol).c_str(), block_n);
    std::printf("  profile value:             %s\n",
                format_number(report.value).c_str());
    std::printf("  jammer best response:      %s  (gap %s)\n",
                format_number(report.jammer_br_value).c_str(),
                format_number(report.jammer_gap).c_str());
    std::printf("  user best response (n=1):  %s  (gap %s)\n",
                format_number(report.user_br_value).c_str(),
                format_number(report.user_gap).c_str());
    if (block_n >= 2) {
      std::printf("  block jammer LP (n=%zu):    %s\n", block_n,
                  format_number(report.block_jammer_value).c_str());
    }
    std::printf("verdict: %s\n",
                report.nash_ok ? "EQUILIBRIUM" : "NOT EQUILIBRIUM");
    std::printf("[machine]\n");
    std::printf("value=%s\n", format_number(report.value).c_str());
    std::printf("jammer_br_value=%s\n",
                format_number(report.jammer_br_value).c_str());
    std::printf("user_br_value=%s\n",
                format_number(report.user_br_value).c_str());
    std::printf("jammer_gap=%s\n", format_number(report.jammer_gap).c_str());
    std::printf("user_gap=%s\n", format_number(report.user_gap).c_str());
    if (block_n >= 2) {
      std::printf("block_n=%zu\nblock_jammer_value=%s\n", block_n,
                  format_number(report.block_jammer_value).c_str());
    }
    std::printf("nash_ok=%d\nverdict=%s\n", report.nash_ok ? 1 : 0,
                report.nash_ok ? "EQUILIBRIUM" : "NOT_EQUILIBRIUM");
    return 0;
  }
  if (!spec.gaussian_profile) {
    throw std::runtime_error("nash-verify: the file carries no profile");
  }
  const double tol = tol_opt.has_value() ? *tol_opt : 1e-6;
  const jsccsj::GaussianNashReport report =
      jsccsj::gaussian_nash_gaps(*spec.gaussian, *spec.gaussian_profile, tol);
  std::printf("nash gaps within the linear gaussian family (tol=%s)\n",
              format_number(tol).c_str());
  std::printf("  profile value:               %s\n",
              format_number(report.value).c_str());
  std::printf("  best linear jammer:          %s  (gap %s)\n",
              format_number(report.jammer_br_value).c_str(),
              format_number(report.jammer_gap).c_str());
  std::printf("  best decoder gain response:  %s  (gap %s)\n",
              format_number(report.user_br_value).c_str(),
              format_number(report.user_gap).c_str());
  std::printf("verdict: %s\n",
              report.nash_ok ? "EQUILIBRIUM" : "NOT EQUILIBRIUM");
  std::printf("[machine]\n");
  std::printf("value=%s\n", format_number(report.value).c_str());
  std::printf("jammer_br_value=%s\n",
              format_number(report.jammer_br_value).c_str());
  std::printf("user_br_value=%s\n",
              format_number(report.user_br_value).c_str());
  std::printf("jammer_gap=%s\n", format_number(report.jammer_gap).c_str());
  std::printf("user_gap=%s\n", format_number(report.user_gap).c_str());
  std::printf("nash_ok=%d\nverdict=%s\n", report.nash_ok ? 1 : 0,
              report.nash_ok ? "EQUILIBRIUM" : "NOT_EQUILIBRIUM");
  return 0;
}

std::vector<double> parse_grid(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char extra = '\0';
  const int got = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop,
                              &step, &extra);
  if (got != 3 || step <= 0.0 || stop < start) {
    throw std::runtime_error(
        "deq-curve: --grid expects start:stop:step with step > 0 and "
        "stop >= start");
  }
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
  if (grid.empty()) throw std::runtime_error("deq-curve: empty grid");
  return grid;
}

int cmd_deq_curve(const std::string& path, const std::string& grid_text,
                  const std::string& out_path, std::optional<double> tol_opt) {
  const jsccsj::LoadedSpec spec = load_input(path);
  if (!spec.has_finite()) {
    throw std::runtime_error("deq-curve: a finite system is required");
  }
  if (!spec.profile) {
    throw std::runtime_error("deq-curve: the file carries no profile");
  }
  const double tol = effective_tol(tol_opt, spec);
  const std::vector<double> grid = parse_grid(grid_text);
  const jsccsj::JsccsjSystem& sys = *spec.system;
  const jsccsj::StrategyProfile& prof = *spec.profile;
  const double min_cost = jsccsj::min_feasible_jammer_cost(sys, prof.encoder);

  std::vector<double> feasible;
  std::vector<bool> ok(grid.size(), true);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < min_cost - 1e-9) {
      ok[i] = false;
    } else {
      feasible.push_back(grid[i]);
    }
  }
  if (feasible.empty()) {
    throw std::runtime_error(
        "deq-curve: every grid point is below the minimum feasible jammer "
        "cost " +
        format_number(min_cost));
  }
  const jsccsj::DistortionCurve curve =
      jsccsj::distortion_cost_curve(sys, prof.encoder, prof.decoder, feasible,
                                    tol);
  std::string csv = "P_J,D\n";
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!ok[i]) {
      csv += format_number(grid[i]) + ",INFEASIBLE\n";
    } else {
      csv += format_number(grid[i]) + "," +
             format_number(curve.samples[k++].value) + "\n";
    }
  }
  csv += "# monotone_ok=" + std::to_string(curve.monotone_ok ? 1 : 0) + "\n";
  csv += "# concave_ok=" + std::to_string(curve.concave_ok ? 1 : 0) + "\n";
  csv += "# linear_ok=" + std::to_string(curve.linear_ok ? 1 : 0) + "\n";
  csv += "# monotone_violation=" + format_number(curve.monotone_violation) + "\n";
  csv += "# concavity_violation=" + format_number(curve.concavity_violation) + "\n";
  csv += "# linearity_deviation=" + format_number(curve.linearity_deviation) + "\n";
  write_output(out_path, csv);
  return 0;
}

int cmd_simulate(const std::string& path, std::size_t n, std::size_t blocks,
                 std::uint64_t seed) {
  const jsccsj::LoadedSpec spec = load_input(path);
  jsccsj::SimConfig cfg;
  cfg.block_length = n;
  cfg.num_blocks = blocks;
  cfg.seed = seed;
  jsccsj::SimResult result;
  double analytic_distortion = 0.0, analytic_user = 0.0, analytic_jammer = 0.0;
  if (spec.has_finite()) {
    if (!spec.profile) {
      throw std::runtime_error("simulate: the file carries no profile");
    }
    result = jsccsj::simulate(*spec.system, *spec.profile, cfg);
    analytic_distortion = jsccsj::expected_distortion(*spec.system, *spec.profile);
    analytic_user = jsccsj::expected_user_cost(*spec.system, spec.profile->encoder);
    analytic_jammer = jsccsj::expected_jammer_cost(
        *spec.system, spec.profile->encoder, spec.profile->jammer);
  } else {
    if (!spec.gaussian_profile) {
      throw std::runtime_error("simulate: the file carries no profile");
    }
    result = jsccsj::simulate_gaussian(*spec.gaussian, *spec.gaussian_profile,
                                       cfg);
    analytic_distortion = jsccsj::gaussian_mse(*spec.gaussian, *spec.gaussian_profile);
    analytic_user = jsccsj::encoder_power(*spec.gaussian, *spec.gaussian_profile);
    analytic_jammer = jsccsj::jammer_power(*spec.gaussian, *spec.gaussian_profile);
  }
  std::printf("simulation (n=%zu, blocks=%zu, seed=%llu)\n", n, blocks,
              static_cast<unsigned long long>(seed));
  std::printf("  distortion:  %s +/- %s  (analytic %s)\n",
              format_number(result.distortion_mean).c_str(),
              format_number(result.distortion_stderr).c_str(),
              format_number(analytic_distortion).c_str());
  std::printf("  user cost:   %s +/- %s  (analytic %s)\n",
              format_number(result.user_cost_mean).c_str(),
              format_number(result.user_cost_stderr).c_str(),
              format_number(analytic_user).c_str());
  std::printf("  jammer cost: %s +/- %s  (analytic %s)\n",
              format_number(result.jammer_cost_mean).c_str(),
              format_number(result.jammer_cost_stderr).c_str(),
              format_number(analytic_jammer).c_str());
  std::printf("[machine]\n");
  std::printf("n=%zu\nblocks=%zu\nseed=%llu\n", n, blocks,
              static_cast<unsigned long long>(seed));
  std::printf("empirical_distortion=%s\n",
              format_number(result.distortion_mean).c_str());
  std::printf("distortion_stderr=%s\n",
              format_number(result.distortion_stderr).c_str());
  std::printf("empirical_user_cost=%s\n",
              format_number(result.user_cost_mean).c_str());
  std::printf("user_cost_stderr=%s\n",
              format_number(result.user_cost_stderr).c_str());
  std::printf("empirical_jammer_cost=%s\n",
              format_number(result.jammer_cost_mean).c_str());
  std::printf("jammer_cost_stderr=%s\n",
              format_number(result.jammer_cost_stderr).c_str());
  std::printf("analytic_distortion=%s\n",
              format_number(analytic_distortion).c_str());
  std::printf("analytic_user_cost=%s\n", format_number(analytic_user).c_str());
  std::printf("analytic_jammer_cost=%s\n",
              format_number(analytic_jammer).c_str());
  return 0;
}

int cmd_example(const std::string& name, double p, double p_j, std::size_t l,
                double p_u, double sigma2, std::optional<double> alpha,
                std::optional<double> sigma_r2, std::optional<double> kappa,
                const std::string& out_path) {
  if (name == "binary" || name == "lary") {
    const std::size_t arity = (name == "binary") ? 2 : l;
    auto [sys, prof] = jsccsj::lary_example(arity, p, p_j);
    jsccsj::Alphabets alph;
    alph.s = jsccsj::default_symbols(arity);
    alph.x = alph.j = alph.y = alph.shat = alph.s;
    const jsccsj::Json doc = jsccsj::spec_to_json(sys, &prof, alph);
    write_output(out_path, jsccsj::dump_spec(doc));
    return 0;
  }
  if (name == "gaussian") {
    jsccsj::GaussianSystem sys;
    sys.user_budget = p_u;
    sys.noise_var = sigma2;
    sys.jammer_budget = p_j;
    sys.validate();
    jsccsj::LinearGaussianProfile prof = jsccsj::reference_profile(sys);
    if (alpha.has_value() || sigma_r2.has_value()) {
      prof.jammer_alpha = alpha.value_or(0.0);
      prof.jammer_noise_var = sigma_r2.value_or(0.0);
    } else {
      const jsccsj::LinearJammerResponse br = jsccsj::jammer_best_linear_response(
          sys, prof.encoder_gain, prof.decoder_gain);
      prof.jammer_alpha = br.alpha;
      prof.jammer_noise_var = br.noise_var;
    }
    if (kappa.has_value()) prof.decoder_gain = *kappa;
    jsccsj::check_gaussian_profile_feasible(sys, prof);
    const jsccsj::Json doc = jsccsj::gaussian_spec_to_json(sys, &prof);
    write_output(out_path, jsccsj::dump_spec(doc));
    return 0;
  }
  throw std::runtime_error("example: unknown name '" + name +
                           "' (expected binary, gaussian, or lary)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jsccsj: uncoded communication against a correlated jammer as a "
      "zero-sum distortion game"};
  app.require_subcommand(1);

  std::string path = "-";
  std::string out_path;
  std::optional<double> tol;
  std::size_t grid_m = 41;
  double grid_l = 0.0;  // auto: 4 stddevs at m=41, scaled with sqrt(m)
  std::size_t block_n = 1;
  std::string grid_text;
  std::size_t sim_n = 1;
  std::size_t sim_blocks = 100000;
  std::uint64_t seed = 0;
  std::string example_name;
  double ex_p = 0.1, ex_pj = 0.2, ex_pu = 1.0, ex_sigma2 = 1.0;
  std::size_t ex_l = 3;
  std::optional<double> ex_alpha, ex_sigma_r2, ex_kappa;

  CLI::App* validate = app.add_subcommand("validate", "load and validate a system file");
  validate->add_option("path", path, "system file (- for stdin)");

  CLI::App* matched = app.add_subcommand(
      "check-matched", "verify the matched source-jammer-channel conditions");
  matched->add_option("path", path, "system file (- for stdin)");
  matched->add_option("--tol", tol, "residual tolerance (default 1e-9)");
  matched->add_option("--grid-m", grid_m, "grid points for gaussian systems");
  matched->add_option("--grid-l", grid_l,
                      "grid half-width in stddevs (0 = auto schedule)");

  CLI::App* nash = app.add_subcommand(
      "nash-verify", "compute both best responses and the equilibrium gaps");
  nash->add_option("path", path, "system file (- for stdin)");
  nash->add_option("--tol", tol, "gap tolerance (default 1e-9)");
  nash->add_option("--block-n", block_n, "also run the block jammer LP at this n");

  CLI::App* curve = app.add_subcommand(
      "deq-curve", "sample the distortion cost function over a budget grid");
  curve->add_option("path", path, "system file (- for stdin)");
  curve->add_option("--grid", grid_text, "budget grid start:stop:step")
      ->required();
  curve->add_option("--out", out_path, "CSV destination (default stdout)");
  curve->add_option("--tol", tol, "structure-flag tolerance (default 1e-9)");

  CLI::App* sim = app.add_subcommand("simulate",
                                     "Monte Carlo transmission through the chain");
  sim->add_option("path", path, "system file (- for stdin)");
  sim->add_option("--n", sim_n, "block length (default 1)");
  sim->add_option("--blocks", sim_blocks, "number of blocks (default 100000)");
  sim->add_option("--seed", seed, "64-bit seed (default 0)");

  CLI::App* example = app.add_subcommand("example",
                                         "emit a ready-made system file");
  example->add_option("name", example_name, "binary | gaussian | lary")
      ->required();
  example->add_option("--p", ex_p, "channel noise parameter (default 0.1)");
  example->add_option("--pj", ex_pj, "jammer budget P_J (default 0.2)");
  example->add_option("--L", ex_l, "alphabet size for lary (default 3)");
  example->add_option("--pu", ex_pu, "gaussian user budget (default 1)");
  example->add_option("--sigma2", ex_sigma2, "gaussian noise variance (default 1)");
  example->add_option("--alpha", ex_alpha, "gaussian jammer alpha (default: best response)");
  example->add_option("--sigma-r2", ex_sigma_r2, "gaussian jammer noise variance");
  example->add_option("--kappa", ex_kappa, "gaussian decoder gain (default P_U/(P_U+sigma2))");
  example->add_option("--out", out_path, "destination (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (matched->parsed()) return cmd_check_matched(path, tol, grid_m, grid_l);
    if (nash->parsed()) return cmd_nash_verify(path, tol, block_n);
    if (curve->parsed()) return cmd_deq_curve(path, grid_text, out_path, tol);
    if (sim->parsed()) return cmd_simulate(path, sim_n, sim_blocks, seed);
    if (example->parsed()) {
      return cmd_example(example_name, ex_p, ex_pj, ex_l, ex_pu, ex_sigma2,
                         ex_alpha, ex_sigma_r2, ex_kappa, out_path);
    }
  } catch (const jsccsj::SpecError& e) {
    for (const auto& d : e.diagnostics()) {
      std::fprintf(stderr, "error: %s\n", d.c_str());
    }
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
