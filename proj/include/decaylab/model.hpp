#pragma once

#include <string>
#include <vector>

#include "decaylab/piecewise_poly.hpp"

namespace decaylab {

// Problem data for u_t + div phi(u) = D^2 A(u): flux components phi_i and the
// diffusion primitive A with diffusivity a = A' >= 0, all on a shared state
// range.  The solver is 1D (dim = 1, one flux component); higher dim is for
// the condition machinery only.
struct ModelSpec {
  std::string name;
  double u_min = -1.0;
  double u_max = 1.0;
  std::vector<PiecewisePoly> flux;  // one component per space dimension
  // A; defaults to no diffusion on the default range
  PiecewisePoly diff_primitive = PiecewisePoly::constant(-1.0, 1.0, 0.0);
  int dim = 1;
};

// throws if shapes disagree or a = A' dips below zero anywhere on the range
void validate_model(const ModelSpec& m);

// named presets: "burgers" (phi = u^2/2, A = 0), "stefan" (phi = 0,
// A = max(u, 0)), "affine" (phi = u, A = 0); default range [-1, 1]
ModelSpec preset_model(const std::string& name);
ModelSpec preset_model(const std::string& name, double u_min, double u_max);

// closed interval of states; lo == hi is a single point
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Finite union of disjoint closed intervals inside the state range.  Touching
// or overlapping components are merged on construction.
class FSet {
 public:
  FSet(double u_min, double u_max, std::vector<Interval> components,
       bool upper_bound_only = false);

  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  const std::vector<Interval>& components() const { return comps_; }
  // true when the set was computed from finitely many directions in several
  // dimensions and may overestimate the true F
  bool upper_bound_only() const { return upper_bound_; }

  bool contains(double m) const;
  // m lies in the open interior of a component
  bool interior_point(double m) const;

  std::string describe() const;  // e.g. "[0, 1]" or "{-1} u [0, 1]" or "empty"

 private:
  double u_min_, u_max_;
  std::vector<Interval> comps_;
  bool upper_bound_;
};

// maximal open intervals on which f is affine, decided exactly on the stored
// coefficients (adjacent affine pieces merge only when slopes and values
// agree exactly)
std::vector<Interval> affine_intervals(const PiecewisePoly& f);

// maximal open intervals where f is identically zero (all coefficients zero)
std::vector<Interval> zero_intervals(const PiecewisePoly& f);

// F = complement of the union over directions xi of the open sets where the
// directional flux phi . xi is affine while the diffusivity a |xi|^2
// vanishes identically.  A degenerate interval that runs into the edge of the
// state range swallows that endpoint: the range is a window onto the state
// space, so nothing beyond the edge can restore two-sidedness there.
FSet compute_F(const ModelSpec& m);  // 1D; any nonzero scalar direction
FSet compute_F(const ModelSpec& m, const std::vector<std::vector<double>>& xi_list);

// both intervals (m - eps, m) and (m, m + eps) meet F for every eps > 0;
// on the merged representation this is exactly "m interior to a component"
bool check_nd_condition(const FSet& F, double m);

// m in F
bool check_gn_condition(const FSet& F, double m);

enum class DecayClass { Guaranteed, PeriodicOnly, NoGuarantee };

// Guaranteed when the two-sided condition holds, PeriodicOnly when only
// membership holds (purely periodic data still decays), NoGuarantee otherwise.
DecayClass classify_decay(const FSet& F, double m);
const char* decay_class_name(DecayClass c);

}  // namespace decaylab
