#include "decaylab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <string>

#include "decaylab/errors.hpp"
#include "decaylab/field.hpp"
#include "decaylab/lattice.hpp"

namespace decaylab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* flux_name(ConvectionFlux f) {
  return f == ConvectionFlux::EngquistOsher ? "engquist-osher" : "lax-friedrichs";
}

std::string canonical_config(const ExperimentConfig& cfg, const std::string& extra) {
  const GridFn& p = cfg.periodic_part;
  return cfg.scenario + "|model=" + cfg.model.name + "|range=[" + fmt(cfg.model.u_min) + "," +
         fmt(cfg.model.u_max) + "]|n=" + std::to_string(p.n()) + "|x_lo=" + fmt(p.x_lo()) +
         "|len=" + fmt(p.length()) + "|t_end=" + fmt(cfg.solver.t_end) +
         "|cfl=" + fmt(cfg.solver.cfl) + "|flux=" + flux_name(cfg.solver.flux) +
         "|sample=" + fmt(cfg.sample_every) + "|fraction=" + fmt(cfg.decay_fraction) + extra;
}

// condition verdicts come first: they are on record before any evolution
void fill_conditions(Report& rep, const ModelSpec& model, double m) {
  const FSet F = compute_F(model);
  rep.mean = m;
  rep.f_description = F.describe();
  rep.condition_gn = m >= model.u_min && m <= model.u_max && check_gn_condition(F, m);
  rep.condition_nd = m > model.u_min && m < model.u_max && check_nd_condition(F, m);
  rep.classification = classify_decay(F, m);
}

std::vector<double> sample_schedule(double t_end, double every) {
  std::vector<double> out;
  if (every > 0.0)
    for (double tt = every; tt < t_end - 1e-9 * std::max(1.0, t_end); tt += every)
      out.push_back(tt);
  return out;
}

void fill_rows(Report& rep, const Trajectory& tr, double m) {
  double margin = 0.0;
  for (const auto& e : tr.entropy) margin = std::min(margin, e.residual);
  const bool has_e = !tr.entropy.empty();
  for (std::size_t j = 0; j < tr.states.size(); ++j) {
    const GridFn& u = tr.states[j];
    NormRow row;
    row.time = tr.times[j];
    const GridFn d = u + (-m);
    row.l1_cell = d.l1();
    row.stepanov_x = stepanov_norm(d, 1.0);
    row.mean = u.mean();
    row.min = u.min_value();
    row.max = u.max_value();
    row.entropy_margin = margin;
    row.has_entropy = has_e;
    rep.rows.push_back(row);
  }
  rep.initial_norm = rep.rows.front().stepanov_x;
  rep.final_norm = rep.rows.back().stepanov_x;
}

}  // namespace

Report run_decay_experiment(const ExperimentConfig& cfg) {
  if (!cfg.periodic_part.same_grid(cfg.perturbation))
    throw ShapeError("run_decay_experiment: p and v disagree on the grid");
  Report rep;
  rep.scenario = cfg.scenario;
  rep.config_summary = canonical_config(cfg, "");
  fill_conditions(rep, cfg.model,
                  std::isfinite(cfg.stated_mean) ? cfg.stated_mean : cfg.periodic_part.mean());

  SolverConfig sc = cfg.solver;
  if (sc.output_times.empty()) sc.output_times = sample_schedule(sc.t_end, cfg.sample_every);
  const Trajectory tr = evolve(cfg.initial(), cfg.model, sc);
  rep.invariants = tr.invariants;
  fill_rows(rep, tr, rep.mean);

  rep.decayed = rep.final_norm <= cfg.decay_fraction * rep.initial_norm;
  rep.verdict = rep.decayed ? "decay" : "non-decay";
  if (rep.classification == DecayClass::Guaranteed && !rep.decayed) {
    rep.hard_failure = true;
    rep.notes.push_back("guaranteed decay contradicted: final norm " + fmt(rep.final_norm) +
                        " vs initial " + fmt(rep.initial_norm));
  }
  if (rep.decayed != cfg.expect_decay)
    rep.notes.push_back("outcome differs from the scenario expectation");
  return rep;
}

Report run_bracketing_experiment(const ExperimentConfig& cfg, int r, double alpha_plus,
                                 double alpha_minus) {
  if (r < 1) throw ConfigError("run_bracketing_experiment: r must be at least 1");
  if (!cfg.periodic_part.same_grid(cfg.perturbation))
    throw ShapeError("run_bracketing_experiment: p and v disagree on the grid");
  const GridFn& p = cfg.periodic_part;

  Report rep;
  rep.scenario = cfg.scenario;
  rep.alpha_plus = alpha_plus;
  rep.alpha_minus = alpha_minus;
  rep.config_summary = canonical_config(
      cfg, "|r=" + std::to_string(r) + "|alpha+=" + fmt(alpha_plus) + "|alpha-=" + fmt(alpha_minus));
  const double m = std::isfinite(cfg.stated_mean) ? cfg.stated_mean : p.mean();
  fill_conditions(rep, cfg.model, m);

  if (!(alpha_minus < m && m < alpha_plus))
    throw ConfigError("run_bracketing_experiment: need alpha- < mean < alpha+");
  {
    const FSet F = compute_F(cfg.model);
    if (!check_gn_condition(F, alpha_plus) || !check_gn_condition(F, alpha_minus))
      throw ConfigError("run_bracketing_experiment: both alphas must lie in F");
  }

  // the domain must be the r-fold period cell, centered
  const double e = p.length() / static_cast<double>(r);
  const GridFn vbox = GridFn::box(p.x_lo(), p.x_hi(), cfg.perturbation.values());
  const Envelopes env = lattice_envelopes(vbox, Lattice::one_dim(e), r);
  const EnvelopeMeans em = envelope_means(env);
  rep.eps_plus = em.eps_plus;
  rep.eps_minus = em.eps_minus;
  rep.big_m = em.big_m;
  if (!env.upper.values().empty() && env.upper.n() != p.n())
    throw ShapeError("run_bracketing_experiment: envelope grid disagrees with the domain");

  const GridFn u_mid = cfg.initial();
  const GridFn u_up =
      p + GridFn::periodic(p.x_lo(), p.length(), env.upper.values()) + (alpha_plus - m - em.eps_plus);
  const GridFn u_dn = p + GridFn::periodic(p.x_lo(), p.length(), env.lower.values()) +
                      (alpha_minus - m - em.eps_minus);

  SolverConfig sc = cfg.solver;
  if (sc.output_times.empty()) sc.output_times = sample_schedule(sc.t_end, cfg.sample_every);
  // one shared step sequence makes the discrete comparison principle exact
  sc.dt_override = std::min({cfl_dt(cfg.model, u_mid, sc.cfl), cfl_dt(cfg.model, u_up, sc.cfl),
                             cfl_dt(cfg.model, u_dn, sc.cfl)});

  const Trajectory tr_mid = evolve(u_mid, cfg.model, sc);
  const Trajectory tr_up = evolve(u_up, cfg.model, sc);
  const Trajectory tr_dn = evolve(u_dn, cfg.model, sc);
  rep.invariants = tr_mid.invariants;
  fill_rows(rep, tr_mid, m);

  const ComparisonReport below = compare(tr_dn, tr_mid);
  const ComparisonReport above = compare(tr_mid, tr_up);
  rep.ordering_ok = below.initial_ordered && below.order_preserved && above.initial_ordered &&
                    above.order_preserved;
  rep.bracket_bound = 2.0 * (alpha_plus - alpha_minus);
  rep.bracket_final = rep.final_norm;
  rep.decayed = rep.bracket_final <= rep.bracket_bound;
  rep.verdict = rep.decayed ? "within-bound" : "bound-exceeded";
  if (!rep.ordering_ok) {
    rep.hard_failure = true;
    rep.notes.push_back("pointwise ordering violated (worst " +
                        fmt(std::max(below.max_order_violation, above.max_order_violation)) +
                        "); the scheme is not behaving monotonically");
  }
  rep.notes.push_back("eps+ = " + fmt(em.eps_plus) + ", eps- = " + fmt(em.eps_minus) +
                      ", M_r = " + fmt(em.big_m));
  return rep;
}

Report run_condition_report(const ModelSpec& model, double m) {
  Report rep;
  rep.scenario = "condition:" + model.name;
  rep.config_summary = rep.scenario + "|range=[" + fmt(model.u_min) + "," + fmt(model.u_max) +
                       "]|m=" + fmt(m);
  fill_conditions(rep, model, m);
  rep.verdict = decay_class_name(rep.classification);
  return rep;
}

std::vector<std::string> scenario_names() {
  return {"burgers-periodic", "burgers-perturbed", "burgers-bracketing", "stefan-periodic",
          "affine-drift"};
}

ExperimentConfig make_scenario(const std::string& name) {
  if (name == "burgers-periodic") {
    ExperimentConfig cfg(name, preset_model("burgers"),
                         GridFn::sine(true, 0.0, 5.0, 800, 0.0, 0.5, 5.0),
                         GridFn::periodic_fill(0.0, 5.0, 800));
    cfg.solver.t_end = 150.0;
    cfg.sample_every = 15.0;
    cfg.stated_mean = 0.0;
    return cfg;
  }
  if (name == "burgers-perturbed") {
    ExperimentConfig cfg(name, preset_model("burgers"),
                         GridFn::sine(true, -2.0, 30.0, 2560, 0.0, 0.5, 1.0),
                         GridFn::bump(true, -2.0, 30.0, 2560, 0.0, 0.25, 0.3));
    // long horizon: the bump mass disperses like 1/sqrt(t) before the state
    // settles at the (slightly shifted) mean
    cfg.solver.t_end = 800.0;
    cfg.sample_every = 50.0;
    cfg.stated_mean = 0.0;
    return cfg;
  }
  if (name == "burgers-bracketing") {
    ExperimentConfig cfg(name, preset_model("burgers"),
                         GridFn::sine(true, -4.0, 4.0, 640, 0.0, 0.5, 2.0),
                         GridFn::bump(true, -4.0, 4.0, 640, 0.0, 0.25, 0.3));
    cfg.solver.t_end = 400.0;
    cfg.sample_every = 20.0;
    cfg.stated_mean = 0.0;
    return cfg;
  }
  if (name == "stefan-periodic") {
    ExperimentConfig cfg(name, preset_model("stefan"),
                         GridFn::sine(true, 0.0, 5.0, 400, 0.0, 0.5, 5.0),
                         GridFn::periodic_fill(0.0, 5.0, 400));
    cfg.solver.t_end = 150.0;
    cfg.sample_every = 15.0;
    cfg.stated_mean = 0.0;
    return cfg;
  }
  if (name == "affine-drift") {
    ExperimentConfig cfg(name, preset_model("affine"),
                         GridFn::sine(true, 0.0, 4.0, 400, 0.0, 0.5, 4.0),
                         GridFn::periodic_fill(0.0, 4.0, 400));
    cfg.solver.t_end = 20.0;
    cfg.sample_every = 2.0;
    cfg.expect_decay = false;
    cfg.stated_mean = 0.0;
    return cfg;
  }
  throw ConfigError("unknown scenario: " + name);
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_report(const Report& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);

  {
    std::ofstream csv(dir + "/norms.csv");
    if (!csv) throw Error("write_report: cannot open " + dir + "/norms.csv");
    csv << "time,l1_cell,stepanov_x,mean,min,max,entropy_margin\n";
    for (const auto& row : rep.rows)
      csv << fmt(row.time) << ',' << fmt(row.l1_cell) << ',' << fmt(row.stepanov_x) << ','
          << fmt(row.mean) << ',' << fmt(row.min) << ',' << fmt(row.max) << ','
          << fmt(row.entropy_margin) << '\n';
  }

  {
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(rep.config_summary)));
    nlohmann::json j;
    j["scenario"] = rep.scenario;
    j["config"] = rep.config_summary;
    j["config_hash"] = std::string(hex);
    j["version"] = "1.0.0";
    j["mean"] = rep.mean;
    j["f_set"] = rep.f_description;
    j["condition_nd"] = rep.condition_nd;
    j["condition_gn"] = rep.condition_gn;
    j["classification"] = decay_class_name(rep.classification);
    j["initial_norm"] = rep.initial_norm;
    j["final_norm"] = rep.final_norm;
    j["verdict"] = rep.verdict;
    j["hard_failure"] = rep.hard_failure;
    j["notes"] = rep.notes;
    j["tolerances"] = {{"conservation_rel", 1e-10},
                       {"max_principle", 1e-8},
                       {"entropy_floor_per_measure", -1e-6},
                       {"ordering_slack", 1e-12}};
    std::ofstream mf(dir + "/manifest.json");
    if (!mf) throw Error("write_report: cannot open " + dir + "/manifest.json");
    mf << j.dump(2) << '\n';
  }

  {
    std::ofstream txt(dir + "/report.txt");
    if (!txt) throw Error("write_report: cannot open " + dir + "/report.txt");
    txt << "scenario:        " << rep.scenario << '\n';
    txt << "mean:            " << fmt(rep.mean) << '\n';
    txt << "F:               " << rep.f_description << '\n';
    txt << "two-sided cond.: " << (rep.condition_nd ? "true" : "false") << '\n';
    txt << "membership cond: " << (rep.condition_gn ? "true" : "false") << '\n';
    txt << "classification:  " << decay_class_name(rep.classification) << '\n';
    if (!rep.rows.empty()) {
      txt << "initial norm:    " << fmt(rep.initial_norm) << '\n';
      txt << "final norm:      " << fmt(rep.final_norm) << '\n';
      txt << "verdict:         " << rep.verdict << '\n';
      txt << "conservation:    " << fmt(rep.invariants.max_conservation_drift) << '\n';
      txt << "bound escapes:   "
          << fmt(std::max(rep.invariants.worst_min_violation, rep.invariants.worst_max_violation))
          << '\n';
    }
    if (rep.bracket_bound > 0.0) {
      txt << "bracket bound:   " << fmt(rep.bracket_bound) << '\n';
      txt << "bracket final:   " << fmt(rep.bracket_final) << '\n';
      txt << "ordering ok:     " << (rep.ordering_ok ? "true" : "false") << '\n';
      txt << "eps+/eps-/M:     " << fmt(rep.eps_plus) << " / " << fmt(rep.eps_minus) << " / "
          << fmt(rep.big_m) << '\n';
    }
    txt << "hard failure:    " << (rep.hard_failure ? "true" : "false") << '\n';
    for (const auto& nline : rep.notes) txt << "note: " << nline << '\n';
  }
}

}  // namespace decaylab
