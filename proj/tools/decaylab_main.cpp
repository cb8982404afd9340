// Command-line front end: condition checks, decay experiments, the moving-
// boundary construction, and norm tables.  Exit codes: 0 success, 1 a run
// violated an asserted invariant, 2 configuration problems.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "decaylab/errors.hpp"
#include "decaylab/field.hpp"
#include "decaylab/harness.hpp"
#include "decaylab/model.hpp"
#include "decaylab/solver.hpp"
#include "decaylab/stefan.hpp"

namespace {

using namespace decaylab;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string out_root() {
  const char* env = std::getenv("DECAYLAB_OUT");
  return env != nullptr && *env != '\0' ? env : "out";
}

int cmd_check_condition(const std::string& preset, double mean, double lo, double hi) {
  const ModelSpec m = preset_model(preset, lo, hi);
  const Report rep = run_condition_report(m, mean);
  std::printf("F = %s\n", rep.f_description.c_str());
  std::printf("nd-condition: %s\n", rep.condition_nd ? "true" : "false");
  std::printf("gn-condition: %s\n", rep.condition_gn ? "true" : "false");
  std::printf("classification: %s\n", decay_class_name(rep.classification));
  return 0;
}

ExperimentConfig scenario_for(const std::string& scenario, const std::string& preset) {
  if (!scenario.empty()) return make_scenario(scenario);
  if (preset == "burgers") return make_scenario("burgers-periodic");
  if (preset == "stefan") return make_scenario("stefan-periodic");
  if (preset == "affine") return make_scenario("affine-drift");
  throw ConfigError("unknown preset: " + preset);
}

Report run_scenario(const ExperimentConfig& cfg) {
  if (cfg.scenario == "burgers-bracketing") return run_bracketing_experiment(cfg, 4, 0.1, -0.1);
  return run_decay_experiment(cfg);
}

void print_summary(const Report& rep) {
  std::printf("scenario:       %s\n", rep.scenario.c_str());
  std::printf("F = %s, nd: %s, gn: %s, classification: %s\n", rep.f_description.c_str(),
              rep.condition_nd ? "true" : "false", rep.condition_gn ? "true" : "false",
              decay_class_name(rep.classification));
  if (!rep.rows.empty())
    std::printf("norm %.6g -> %.6g over t in [%.6g, %.6g]\n", rep.initial_norm, rep.final_norm,
                rep.rows.front().time, rep.rows.back().time);
  std::printf("verdict: %s%s\n", rep.verdict.c_str(), rep.hard_failure ? " (HARD FAILURE)" : "");
  for (const auto& nline : rep.notes) std::printf("note: %s\n", nline.c_str());
}

int cmd_simulate(const std::string& scenario, const std::string& preset, double t_end,
                 const std::string& out_dir) {
  ExperimentConfig cfg = scenario_for(scenario, preset);
  if (t_end > 0.0) cfg.solver.t_end = t_end;
  const Report rep = run_scenario(cfg);
  const std::string dir = out_dir.empty() ? out_root() + "/" + cfg.scenario : out_dir;
  write_report(rep, dir);
  print_summary(rep);
  std::printf("report written to %s\n", dir.c_str());
  return rep.hard_failure ? 1 : 0;
}

int cmd_norms(const std::string& scenario, const std::string& preset) {
  const ExperimentConfig cfg = scenario_for(scenario, preset);
  const Report rep = run_scenario(cfg);
  std::printf("time,l1_cell,stepanov_x,mean,min,max,entropy_margin\n");
  for (const auto& row : rep.rows)
    std::printf("%s,%s,%s,%s,%s,%s,%s\n", fmt(row.time).c_str(), fmt(row.l1_cell).c_str(),
                fmt(row.stepanov_x).c_str(), fmt(row.mean).c_str(), fmt(row.min).c_str(),
                fmt(row.max).c_str(), fmt(row.entropy_margin).c_str());
  return rep.hard_failure ? 1 : 0;
}

int cmd_stefan(double alpha, std::size_t cells, double t_end, double dt_scale, std::size_t n_x,
               const std::string& out_dir) {
  if (!(alpha > 0.0)) throw ConfigError("stefan: alpha must be positive");
  if (t_end <= 0.0) t_end = 80.0 / alpha;
  const std::string dir =
      out_dir.empty() ? out_root() + "/stefan-alpha" + std::to_string(alpha) : out_dir;
  std::filesystem::create_directories(dir);

  std::vector<double> snaps;
  for (double tt = 0.0; tt <= std::min(20.0, t_end); tt += 1.0) snaps.push_back(tt);

  const FixedDomainRun run = solve_fixed_domain(default_bump(cells, 0.5), alpha, t_end, dt_scale,
                                                snaps);
  const PsiTable psi = boundary_flux_to_psi(run, alpha);

  std::vector<double> sample_times;
  for (double tt : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0})
    if (tt <= t_end) sample_times.push_back(tt);
  const StefanSolution sol = assemble_periodic_solution(run, psi, n_x, sample_times);

  const JumpReport jump = verify_jump_conditions(sol);
  const RateReport rates = verify_decay_estimates(run, std::min(200.0, 0.5 * t_end));
  const MassBalance mass = mass_balance(run, psi);

  {  // fixed-domain series, thinned to keep the file small
    std::ofstream f(dir + "/fixed_domain.csv");
    f << "t,w_left,w_right,sup,energy,w_integral\n";
    const std::size_t stride = std::max<std::size_t>(1, run.t.size() / 20000);
    for (std::size_t j = 0; j < run.t.size(); j += stride)
      f << fmt(run.t[j]) << ',' << fmt(run.w_left[j]) << ',' << fmt(run.w_right[j]) << ','
        << fmt(run.sup[j]) << ',' << fmt(run.energy[j]) << ',' << fmt(run.w_integral[j]) << '\n';
  }
  {
    std::ofstream f(dir + "/psi.csv");
    f << "x,t,psi,w\n";
    for (std::size_t j = 0; j < psi.x.size(); ++j)
      f << fmt(psi.x[j]) << ',' << fmt(psi.t[j]) << ',' << fmt(psi.psi[j]) << ','
        << fmt(psi.w[j]) << '\n';
  }
  for (std::size_t j = 0; j < sol.times.size(); ++j) {
    char name[64];
    std::snprintf(name, sizeof name, "/assembled_t%g.csv", sol.times[j]);
    std::ofstream f(dir + name);
    f << sol.states[j].to_csv();
  }
  const bool mass_ok = mass.relative <= 0.02;
  {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["rates"] = {
        {"energy",
         {{"rate", rates.energy.rate}, {"rms", rates.energy.rms}, {"points", rates.energy.points},
          {"window", {rates.energy.t_lo, rates.energy.t_hi}}, {"pass", rates.pass_energy}}},
        {"boundary",
         {{"rate", rates.boundary.rate}, {"rms", rates.boundary.rms},
          {"points", rates.boundary.points}, {"pass", rates.pass_boundary}}},
        {"supremum",
         {{"rate", rates.supremum.rate}, {"rms", rates.supremum.rms},
          {"points", rates.supremum.points}, {"pass", rates.pass_supremum}}}};
    j["jump"] = {{"max_jump_A", jump.max_jump_A},
                 {"max_rh_residual", jump.max_rh_residual},
                 {"rh_tolerance", jump.rh_tolerance},
                 {"worst_inner_slope", jump.worst_inner_slope},
                 {"max_outer_slope", jump.max_outer_slope},
                 {"ok", jump.ok}};
    j["mass"] = {{"integral_initial", mass.integral_phi0},
                 {"integral_psi", mass.integral_psi},
                 {"relative_residual", mass.relative},
                 {"ok", mass_ok}};
    j["max_psi"] = psi.max_psi;
    std::ofstream f(dir + "/rates.txt");
    f << j.dump(2) << '\n';
  }
  {
    const std::string config = "stefan|alpha=" + fmt(alpha) + "|cells=" + std::to_string(cells) +
                               "|t_end=" + fmt(t_end) + "|dt_scale=" + fmt(dt_scale) +
                               "|n_x=" + std::to_string(n_x);
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(config)));
    nlohmann::json j;
    j["config"] = config;
    j["config_hash"] = std::string(hex);
    j["version"] = "1.0.0";
    j["tolerances"] = {{"rh_rel", 5e-3}, {"mass_rel", 0.02}, {"rate_margins", {2.8, 0.9, 1.4}}};
    std::ofstream f(dir + "/manifest.json");
    f << j.dump(2) << '\n';
  }

  std::printf("%s decay rates: E %.4g, boundary %.4g, sup %.4g (alpha = %g)\n",
              rates.ok ? "[ok]" : "[fail]", rates.energy.rate, rates.boundary.rate,
              rates.supremum.rate, alpha);
  std::printf("%s jump conditions: [A] %.3g, RH %.3g (tol %.3g)\n", jump.ok ? "[ok]" : "[fail]",
              jump.max_jump_A, jump.max_rh_residual, jump.rh_tolerance);
  std::printf("%s mass balance: relative residual %.3g\n", mass_ok ? "[ok]" : "[fail]",
              mass.relative);
  std::printf("artifacts under %s\n", dir.c_str());
  return rates.ok && jump.ok && mass_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for long-time decay of degenerate convection-diffusion"};
  app.require_subcommand(1);

  std::string preset = "stefan", scenario;
  double mean = 0.0, u_min = -1.0, u_max = 1.0, t_end = 0.0;
  std::string out_dir;
  double alpha = 0.05, dt_scale = 2.0;
  std::size_t cells = 400, n_x = 800;

  auto* check = app.add_subcommand("check-condition", "F-set and decay conditions for a preset");
  check->add_option("--preset", preset, "model preset: burgers | stefan | affine");
  check->add_option("--mean", mean, "mean state m");
  check->add_option("--u-min", u_min, "state range lower edge");
  check->add_option("--u-max", u_max, "state range upper edge");

  auto* sim = app.add_subcommand("simulate", "run a scenario and write its report");
  sim->add_option("--scenario", scenario, "registered scenario name");
  sim->add_option("--preset", preset, "preset shorthand for the default scenario");
  sim->add_option("--t-end", t_end, "override the horizon");
  sim->add_option("--out", out_dir, "output directory");

  auto* rpt = app.add_subcommand("decay-report", "run a scenario, write and summarize the report");
  rpt->add_option("--scenario", scenario, "registered scenario name")->required();
  rpt->add_option("--out", out_dir, "output directory");

  auto* nrm = app.add_subcommand("norms", "print the norm table of a scenario as CSV");
  nrm->add_option("--scenario", scenario, "registered scenario name");
  nrm->add_option("--preset", preset, "preset shorthand for the default scenario");

  auto* stf = app.add_subcommand("stefan", "moving-boundary construction and its verification");
  stf->add_option("--alpha", alpha, "boundary speed parameter (> 0)");
  stf->add_option("--cells", cells, "fixed-domain resolution");
  stf->add_option("--t-end", t_end, "horizon (default 80/alpha)");
  stf->add_option("--dt-scale", dt_scale, "time step in units of the cell width");
  stf->add_option("--n-x", n_x, "assembled periodic resolution");
  stf->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check_condition(preset, mean, u_min, u_max);
    if (sim->parsed()) return cmd_simulate(scenario, preset, t_end, out_dir);
    if (rpt->parsed()) return cmd_simulate(scenario, "", t_end, out_dir);
    if (nrm->parsed()) return cmd_norms(scenario, preset);
    if (stf->parsed()) return cmd_stefan(alpha, cells, t_end, dt_scale, n_x, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
