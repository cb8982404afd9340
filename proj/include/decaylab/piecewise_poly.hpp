#pragma once

#include <string>
#include <vector>

#include "decaylab/polynomial.hpp"

namespace decaylab {

// Piecewise polynomial on [u_min, u_max]: breakpoints b_0 < ... < b_M and one
// polynomial per piece [b_i, b_{i+1}].  Values at interior breakpoints follow
// the left-continuity convention: eval(b_i) is taken from piece i-1.  The
// object may represent a discontinuous function (e.g. a derivative with
// kinks upstream); `continuous()` reports whether adjacent pieces agree at
// the shared breakpoints within arithmetic tolerance.
class PiecewisePoly {
 public:
  PiecewisePoly(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

  static PiecewisePoly constant(double u_min, double u_max, double value);
  static PiecewisePoly single(double u_min, double u_max, Polynomial p);

  double u_min() const { return bp_.front(); }
  double u_max() const { return bp_.back(); }
  std::size_t piece_count() const { return pieces_.size(); }
  const std::vector<double>& breakpoints() const { return bp_; }
  const Polynomial& piece(std::size_t i) const { return pieces_[i]; }
  int max_degree() const;

  bool continuous() const { return continuous_; }
  // largest |left - right| over interior breakpoints (0 for one piece)
  double max_breakpoint_gap() const;

  // left-continuous evaluation; throws RangeError outside [u_min, u_max]
  double eval(double u) const;
  // limit from the right (differs from eval only at discontinuities)
  double eval_right(double u) const;

  PiecewisePoly derivative() const;
  // antiderivative F with F(base) = 0; F is continuous by construction
  PiecewisePoly antiderivative(double base) const;
  double integrate(double a, double b) const;

  PiecewisePoly operator+(const PiecewisePoly& o) const;
  PiecewisePoly operator-(const PiecewisePoly& o) const;
  PiecewisePoly operator*(const PiecewisePoly& o) const;
  PiecewisePoly operator*(double s) const;
  PiecewisePoly operator+(double c) const;

  // a copy with an extra breakpoint at u (values unchanged)
  PiecewisePoly with_breakpoint(double u) const;

  // |f|: inserts breakpoints at the real roots of each piece (closed-form,
  // degree <= 3; roots closer than 1e-12 are merged) and flips the negative
  // parts.  Continuous input gives continuous output.
  PiecewisePoly abs() const;
  // max(f, 0) and min(f, 0), same splitting machinery
  PiecewisePoly positive_part() const;
  PiecewisePoly negative_part() const;

  // extrema over [a, b] (per-piece closures, so one-sided limits count)
  double min_on(double a, double b) const;
  double max_on(double a, double b) const;
  double max_abs_on(double a, double b) const;

  // exact coefficient-level classification of one piece
  bool piece_is_affine(std::size_t i) const { return pieces_[i].is_affine(); }
  bool piece_is_zero(std::size_t i) const { return pieces_[i].is_zero(); }

 private:
  std::size_t piece_index(double u) const;
  PiecewisePoly combine(const PiecewisePoly& o, bool product, double sign) const;
  PiecewisePoly clamped(int keep_sign) const;

  std::vector<double> bp_;
  std::vector<Polynomial> pieces_;
  bool continuous_ = true;
};

// throws ShapeError if any piece exceeds the configured degree bound
void validate_max_degree(const PiecewisePoly& f, int max_degree = 3);

// Serialization: a JSON array of {"breakpoint": b_i, "coeffs": [...]} entries,
// one per piece, closed by a final {"breakpoint": b_M} sentinel.  Doubles are
// printed in shortest round-trip form, so coefficients survive a write/read
// cycle bit-exactly.
std::string to_json_string(const PiecewisePoly& f);
PiecewisePoly piecewise_from_json(const std::string& text);

}  // namespace decaylab
