#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "decaylab/grid_fn.hpp"
#include "decaylab/solver.hpp"

namespace decaylab {

// prescribed front x = +-r(t) of the two-phase construction
struct MovingBoundary {
  double alpha = 0.05;
  double r(double t) const { return 2.0 - std::exp(-alpha * t); }
  double rp(double t) const { return alpha * std::exp(-alpha * t); }
};

// the reference initial profile: h (1 - y^2)^3 on (-1, 1), h = 0.5
GridFn default_bump(std::size_t n, double amplitude = 0.5);

// Fixed-domain solve of v_t = (1/r^2) v_yy + (r'/r) y v_y on [-1, 1] with
// v(t, +-1) = 0, where u(t, x) = v(t, x / r(t)) recovers the active phase.
// Values are samples at the cell centers y_i = -1 + (i + 1/2) h.
struct FixedDomainRun {
  explicit FixedDomainRun(GridFn initial) : phi0(std::move(initial)) {}

  double alpha = 0.0;
  double h = 0.0;        // mesh width, 2 / M
  double dt_scale = 0.0; // dt = dt_scale * h away from snapshot instants
  GridFn phi0;

  // per step boundary, t[0] = 0
  std::vector<double> t;
  std::vector<double> w_left;   // v_y(t, -1), one-sided quadratic
  std::vector<double> w_right;  // v_y(t, +1)
  std::vector<double> sup;      // max_y v
  std::vector<double> energy;   // sum v_yy^2 h + r r' (w_left^2 + w_right^2)
  // W(t) = integral_0^t (-w_right / r) dtau, cumulative trapezoid; equals
  // the mass that has crossed the right front by time t
  std::vector<double> w_integral;

  std::vector<double> snap_times;
  std::vector<GridFn> snapshots;

  double max_asymmetry = 0.0;   // max |v(y) - v(-y)| seen
  double worst_negative = 0.0;  // max(0, -min v) seen
  double worst_overshoot = 0.0; // max(0, max v - max phi0) seen

  std::size_t index_of_time(double time) const;  // exact-hit step lookup
  const GridFn& snapshot_at(double time) const;  // CoverageError when absent
};

// march phi0 (even, nonnegative, on the box [-1, 1]) to t_end with a fully
// implicit (L-stable, positivity-preserving) step dt = dt_scale * h;
// snapshots recorded at {0} + snapshot_times + {t_end}
FixedDomainRun solve_fixed_domain(const GridFn& phi0, double alpha, double t_end,
                                  double dt_scale = 2.0,
                                  const std::vector<double>& snapshot_times = {});

// Sampled outer profile psi on (1, 2): psi(r(t)) = -v_y(t, 1) / (r(t) r'(t)).
// The pointwise table keeps samples with t >= 1 (the one-sided boundary
// stencil is polluted by the initial bump before that); averages over x-cells
// come from the W prefix instead, which is artifact-free where it matters and
// exact about the steep rise just past x = 1.
struct PsiTable {
  double alpha = 0.0;
  double t_end = 0.0;
  std::vector<double> t, x, w, r, psi;  // pointwise samples, x increasing
  std::vector<double> series_t;         // full step grid
  std::vector<double> series_w;         // W prefix on that grid
  double integral = 0.0;                // integral of psi over (1, 2) = W(t_end)
  double max_psi = 0.0;

  double time_of_x(double xx) const;          // -ln(2 - x)/alpha, clamped to [0, t_end]
  double w_at_time(double time) const;        // interpolated W
  double cell_avg(double a, double b) const;  // mean of psi over [a, b] in (1, 2)
  double psi_at(double xx) const;             // table interpolation, clamped ends
};

// ContractError when alpha <= 0; Error when a boundary derivative comes out
// positive (the construction needs psi > 0)
PsiTable boundary_flux_to_psi(const FixedDomainRun& run, double alpha);

// The 5-periodic profile on [-5/2, 5/2): v(t, x/r) inside |x| < r(t),
// -psi(|x|) on r(t) < |x| < 2, zero beyond.  Cells crossing a front mix the
// side contributions by exact overlap fractions.
struct StefanSolution {
  double alpha = 0.0;
  double max_psi = 0.0;
  std::vector<double> times;
  std::vector<GridFn> states;      // periodic grid on [-5/2, 5/2)
  std::vector<double> r_front;     // r(t) per sample
  std::vector<double> w_front;     // v_y(t, 1) per sample
  std::vector<double> psi_front;   // psi(r(t)) = -w/(r r') per sample
  std::vector<double> sup_inner;   // max_y v per sample

  const GridFn& initial() const { return states.front(); }
};

// sample_times must be recorded snapshots of the run (CoverageError otherwise);
// the psi table must come from the same run
StefanSolution assemble_periodic_solution(const FixedDomainRun& run, const PsiTable& psi,
                                          std::size_t n_x,
                                          const std::vector<double>& sample_times);

// Front conditions along x = +-r(t) at every sample:
//  - the diffusion primitive is continuous across the front (checked exactly),
//  - speed balance |psi(r) r' + u_x(r-)| <= 5e-3 max psi, with u_x(r-)
//    estimated from the assembled grid by a one-sided quadratic anchored at
//    the front zero,
//  - admissibility signs: u_x(r-) <= 1e-10 inside, zero slope of the
//    diffusion primitive outside (exact).
struct JumpReport {
  double max_jump_A = 0.0;       // worst |[A(u)]| over samples, exact arithmetic
  double max_rh_residual = 0.0;  // worst |psi r' + u_x(r-)| over samples and sides
  double rh_tolerance = 0.0;     // 5e-3 * max_psi
  double worst_inner_slope = 0.0; // max over samples of u_x(r-), want <= 1e-10
  double max_outer_slope = 0.0;   // diffusion primitive slope outside, exact 0
  bool jump_A_ok = false;
  bool rh_ok = false;
  bool entropy_ok = false;
  bool ok = false;
};
JumpReport verify_jump_conditions(const StefanSolution& s);

// Log-least-squares exponential rates over [t_fit_lo, death of the series]
// (a series dies when it drops below `floor`); thresholds 2.8a / 0.9a / 1.4a
// against the predicted 3a / a / 3a/2.
struct RateFit {
  double rate = 0.0;
  double rms = 0.0;  // fit residual, log scale
  double t_lo = 0.0, t_hi = 0.0;
  std::size_t points = 0;
  bool conclusive = false;  // enough points and a tight fit
};
struct RateReport {
  double alpha = 0.0;
  RateFit energy, boundary, supremum;
  bool pass_energy = false;
  bool pass_boundary = false;
  bool pass_supremum = false;
  bool ok = false;
};
RateReport verify_decay_estimates(const FixedDomainRun& run, double t_fit_lo = 200.0,
                                  double floor = 1e-250);

// conservation across the fronts: what left the bump equals twice the psi mass
struct MassBalance {
  double integral_phi0 = 0.0;
  double integral_psi = 0.0;   // over (1, 2)
  double residual = 0.0;       // |integral_phi0 - 2 integral_psi|
  double relative = 0.0;       // residual / integral_phi0 (residual itself when that is 0)
};
MassBalance mass_balance(const FixedDomainRun& run, const PsiTable& psi);

// Evolve the assembled initial profile with and without a nonpositive
// perturbation supported where the profile vanishes (|x| > 2).  The scheme
// freezes the nonpositive region exactly, so the perturbed run must equal
// the unperturbed one plus the perturbation, cell for cell, while its
// Stepanov norm stays bounded away from zero.
struct PerturbReport {
  std::vector<double> times;
  std::vector<double> l1_equiv;    // ||pert(t) - (unpert(t) + v_pert)||_1
  std::vector<double> xnorm_pert;  // ||pert(t)||_X
  double pert_norm = 0.0;          // ||v_pert||_X
  double max_equiv = 0.0;
  double min_xnorm_after_1 = 0.0;  // min over samples with t >= 1
  double unpert_pos_initial = 0.0; // sup of the positive part, unperturbed run
  double unpert_pos_final = 0.0;
  bool pos_monotone_after_1 = false;
  bool equivalence_ok = false;     // max_equiv <= 1e-6
  bool nondecay_ok = false;        // min_xnorm_after_1 >= 0.9 pert_norm
  bool unperturbed_decays = false; // monotone after t >= 1 and final <= 5% initial
  bool ok = false;
};
PerturbReport perturbed_nondecay_experiment(const StefanSolution& s, const GridFn& v_pert,
                                            double t_end = 20.0);

}  // namespace decaylab
