#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "decaylab/grid_fn.hpp"
#include "decaylab/model.hpp"
#include "decaylab/solver.hpp"

namespace decaylab {

// one sampled instant of a decay experiment
struct NormRow {
  double time = 0.0;
  double l1_cell = 0.0;     // L1 distance to the reference mean over the period cell
  double stepanov_x = 0.0;  // sliding unit-window norm of u - mean
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double entropy_margin = 0.0;  // most negative probe residual of the run (0 without probes)
  bool has_entropy = false;
};

// A runnable scenario: model, periodic background p, compact perturbation v
// (zero away from its support, same grid), stepping setup, and grading knobs.
struct ExperimentConfig {
  std::string scenario;
  ModelSpec model;
  GridFn periodic_part;  // p, mean-m periodic data covering whole periods
  GridFn perturbation;   // v, same grid; identically zero when absent
  SolverConfig solver;   // cfl / flux / t_end; output_times filled from sample_every
  double sample_every = 10.0;
  double decay_fraction = 0.05;  // "decay" verdict: final norm <= fraction * initial
  bool expect_decay = true;      // scenario expectation; mismatches are notes, not failures
  // When finite, the mean the scenario is built around.  Conditions and norms
  // are referenced to it instead of the data's quadrature mean, whose rounding
  // (~1e-17) can fall on the wrong side of an F-component edge.
  double stated_mean = std::numeric_limits<double>::quiet_NaN();

  ExperimentConfig(std::string name, ModelSpec m, GridFn p, GridFn v)
      : scenario(std::move(name)),
        model(std::move(m)),
        periodic_part(std::move(p)),
        perturbation(std::move(v)) {}

  GridFn initial() const { return periodic_part + perturbation; }
};

struct Report {
  std::string scenario;
  std::string config_summary;  // canonical one-line config, hashed into the manifest

  // condition check, recorded before any evolution
  double mean = 0.0;
  std::string f_description;
  bool condition_nd = false;
  bool condition_gn = false;
  DecayClass classification = DecayClass::NoGuarantee;

  std::vector<NormRow> rows;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  bool decayed = false;
  std::string verdict;  // "decay" or "non-decay"

  // a run that contradicts a guaranteed-decay classification fails loudly
  bool hard_failure = false;
  std::vector<std::string> notes;
  InvariantLog invariants;

  // bracketing extras (zero / true for plain decay runs)
  double alpha_plus = 0.0, alpha_minus = 0.0;
  double eps_plus = 0.0, eps_minus = 0.0, big_m = 0.0;
  double bracket_bound = 0.0;  // 2 (alpha+ - alpha-)
  double bracket_final = 0.0;  // final ||u - m||_X of the middle run
  bool ordering_ok = true;     // pointwise order of the three runs at all samples
};

// evolve p + v, recording the norm table and grading decay against the
// condition classification (recorded first)
Report run_decay_experiment(const ExperimentConfig& cfg);

// Sandwich p + v between the envelope data
//   u0^{+-} = p + v_r^{+-} + (alpha^{+-} - m - eps_r^{+-})
// on the r-fold period cell, evolve all three, and check pointwise ordering
// at every sample plus the final-norm bound 2 (alpha+ - alpha-).  Requires
// alpha- < m < alpha+ with both alphas in F.  Ordering violations are hard
// failures (they indict scheme monotonicity).
Report run_bracketing_experiment(const ExperimentConfig& cfg, int r, double alpha_plus,
                                 double alpha_minus);

// condition-only report: F components, both verdicts, classification
Report run_condition_report(const ModelSpec& model, double m);

// registered scenarios
std::vector<std::string> scenario_names();
ExperimentConfig make_scenario(const std::string& name);

// norms.csv + manifest.json + report.txt under dir (created if needed)
void write_report(const Report& rep, const std::string& dir);

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace decaylab
