#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "decaylab/grid_fn.hpp"
#include "decaylab/model.hpp"

namespace decaylab {

// monotone two-point interface fluxes for the convection term
enum class ConvectionFlux { EngquistOsher, LaxFriedrichs };

// One Kruzhkov entropy check: reference state k and a space-time window
// carrying a product bump test function, accumulated while the run advances.
struct EntropyProbe {
  double k = 0.0;
  double t0 = 0.0, t1 = 0.0;  // temporal support (t0, t1)
  double x0 = 0.0, x1 = 0.0;  // spatial support (x0, x1), may wrap
};

struct EntropyResult {
  EntropyProbe probe;
  // discrete form of the double integral of
  //   |u-k| f_t + sign(u-k)(phi(u)-phi(k)) f_x + |A(u)-A(k)| f_xx,
  // which is nonnegative up to rounding for a monotone scheme
  double residual = 0.0;
  double support_measure = 0.0;  // (t1-t0)(x1-x0), the tolerance scale
};

struct DtRun {
  double dt = 0.0;
  std::size_t count = 0;
};

struct InvariantLog {
  double initial_integral = 0.0;
  double initial_min = 0.0;
  double initial_max = 0.0;
  // max |integral(t) - integral(0)| over samples (exact conservation check)
  double max_conservation_drift = 0.0;
  // worst escape beyond [initial_min, initial_max], checked every step
  double worst_min_violation = 0.0;
  double worst_max_violation = 0.0;
  std::vector<double> sample_integrals;
  std::vector<double> sample_mins;
  std::vector<double> sample_maxs;
};

struct SolverConfig {
  double cfl = 0.45;  // in (0, 1]
  // When positive, march with this step instead of the automatic stable step
  // (it must still satisfy the CFL bound).  Comparison runs that share one
  // step sequence preserve discrete ordering exactly.
  double dt_override = 0.0;
  double t_end = 1.0;
  std::vector<double> output_times;  // sorted, within [0, t_end]; 0 and t_end implied
  ConvectionFlux flux = ConvectionFlux::EngquistOsher;
  std::vector<EntropyProbe> probes;
  // keep every step (time and state); needed by the post-hoc entropy_residual
  bool store_all_steps = false;
};

struct Trajectory {
  std::vector<double> times;   // sample instants, strictly increasing, starts at 0
  std::vector<GridFn> states;  // one per sample instant, shared grid
  std::vector<DtRun> dt_runs;  // run-length encoded step sizes
  InvariantLog invariants;
  std::vector<EntropyResult> entropy;  // one per configured probe
  std::vector<double> dense_times;     // every step boundary (store_all_steps only)
  std::vector<GridFn> dense_states;
  ModelSpec model;
  ConvectionFlux flux = ConvectionFlux::EngquistOsher;

  const GridFn& initial() const { return states.front(); }
  const GridFn& final_state() const { return states.back(); }
};

// largest stable explicit step for data u under model m:
//   dt = cfl / (Lip(phi)/dx + 2 max a / dx^2),
// with Lip(phi) and max a taken over the range of u.  Infinite when both
// terms vanish (nothing moves).
double cfl_dt(const ModelSpec& m, const GridFn& u, double cfl);

// one forward-Euler finite-volume update
//   u_i' = u_i - (dt/dx)(F_{i+1/2} - F_{i-1/2})
//              + (dt/dx^2)(A(u_{i+1}) - 2 A(u_i) + A(u_{i-1}))
// on the periodic grid.  Throws CflError when dt exceeds the stable step and
// RangeError when u leaves the model's state range.
GridFn step(const GridFn& u, const ModelSpec& m, double dt,
            ConvectionFlux flux = ConvectionFlux::EngquistOsher);

// march u0 to t_end, sampling at {0} + output_times + {t_end} (steps land on
// sample instants exactly), accumulating probes and the invariant log.
// Escaping the initial bounds by more than 1e-8 raises MonotonicityAlarm.
Trajectory evolve(const GridFn& u0, const ModelSpec& m, const SolverConfig& cfg);

struct EntropyReport {
  std::vector<EntropyResult> results;  // k-major, then test-function order
  double min_residual = 0.0;
};

// post-hoc residuals over a densely recorded trajectory (store_all_steps) for
// arbitrary nonnegative callables f(t, x) vanishing at the first and last
// recorded instants.  Negative samples or a sparse trajectory -> ContractError.
EntropyReport entropy_residual(const Trajectory& tr, const std::vector<double>& k_list,
                               const std::vector<std::function<double(double, double)>>& test_fns);

struct ComparisonReport {
  bool initial_ordered = false;   // a <= b at the first sample
  bool order_preserved = false;   // a <= b at every sample (given initial_ordered)
  double max_order_violation = 0.0;
  std::vector<double> l1_distance;  // ||a(t) - b(t)||_1 per sample
  bool l1_nonincreasing = false;
  double max_l1_growth = 0.0;
};

// ordering and L1-contraction report for two runs on the same grid, model,
// and sample times; mismatches throw ShapeError
ComparisonReport compare(const Trajectory& a, const Trajectory& b);

// (1 - s^2)^3 with s = (x - center)/halfwidth inside the support, else 0;
// the smooth compactly supported profile used for probe test functions
double bump_profile(double x, double center, double halfwidth);

}  // namespace decaylab
