#pragma once

#include <vector>

#include "decaylab/grid_fn.hpp"
#include "decaylab/lattice.hpp"

namespace decaylab {

// Sliding-window L1 norms.  The window slides at cell granularity with an
// exact fractional-cell correction at the trailing edge; for cell-aligned
// window lengths the result is exact, otherwise it is within dx * max|u| of
// the continuum supremum.  Periodic domains scan all cyclic placements; boxes
// scan both the left-aligned and right-aligned placement families.

// sup over placements of a window of length `window_length` of integral |u|
double v_norm(const GridFn& u, double window_length);

// the unit-ball window: v_norm with length 2 * radius
double stepanov_norm(const GridFn& u, double radius = 1.0);

// Periodized envelopes of a compactly supported profile: pointwise sup / inf
// / sup-of-absolute of v over the r-scaled lattice translates, restricted to
// the fundamental cell P_r.  Translates that miss the box contribute the tail
// value 0, which is exact because the support must be inside the box.
struct Envelopes {
  GridFn upper;    // v_r^+ >= max(v, 0) on P_r
  GridFn lower;    // v_r^- <= min(v, 0) on P_r
  GridFn abs_sup;  // V_r = sup of |v| over translates
};

Envelopes lattice_envelopes(const GridFn& v, const Lattice& L, int r);

struct EnvelopeMeans {
  double eps_plus = 0.0;   // mean of v_r^+ over P_r
  double eps_minus = 0.0;  // mean of v_r^- over P_r
  double big_m = 0.0;      // M_r, mean of V_r over P_r
};

// means over the fundamental cell; enforces |eps^+-|, |eps^-| <= M_r
EnvelopeMeans envelope_means(const Envelopes& env);

// Lebesgue measure of the superlevel sets { |v| > lambda }, one row per
// threshold, measured as cell count * dx.
std::vector<std::pair<double, double>> vanishing_profile(const GridFn& v,
                                                         const std::vector<double>& lambdas);

// Mean of |v| over nested centered boxes, with the threshold-split bound
// ||v||_inf * meas{|v| > eps} / width + eps recorded alongside each row.
struct MeanVanishingRow {
  double width = 0.0;
  double mean_abs = 0.0;
  double bound = 0.0;  // the split bound at the chosen eps
};

struct MeanVanishingReport {
  std::vector<MeanVanishingRow> rows;
  double eps = 0.0;
  bool nonincreasing = false;  // rows nonincreasing within a 1e-9 relative slack
  bool final_below = false;    // last row under the requested threshold
};

MeanVanishingReport mean_vanishing_check(const GridFn& v, const std::vector<double>& widths,
                                         double threshold, double eps);

// Periodic initial data m + (delta/2) sin(2 pi x / r_period) on [0, r_period)
// with the resolution of the supplied profile; the profile must obey
// ||v||_inf <= delta/2 and, in one dimension, contributes nothing else (its
// projection onto the directions of constancy is a single point).  xi must be
// a nonzero dual frequency: xi * r_period integral.
GridFn build_exactness_data(double m, double delta, const GridFn& v_profile, double xi,
                            double r_period);

}  // namespace decaylab
