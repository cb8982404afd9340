#pragma once

#include <vector>

#include "decaylab/piecewise_poly.hpp"

namespace decaylab {

// Function of bounded variation on [u_min, u_max]: a piecewise-polynomial
// smooth part plus finitely many jumps.  We store the left-continuous
// representative: eval(u) = smooth(u) + sum of jump sizes strictly below u,
// so eval(u) coincides with the left limit g(u-) everywhere.
class BVFunction {
 public:
  struct Jump {
    double location;
    double size;
  };

  explicit BVFunction(PiecewisePoly smooth, std::vector<Jump> jumps = {});

  // sign(u - k) on [u_min, u_max]: smooth part -1, one jump of size 2 at k
  static BVFunction sign_about(double k, double u_min, double u_max);

  const PiecewisePoly& smooth() const { return smooth_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  double u_min() const { return smooth_.u_min(); }
  double u_max() const { return smooth_.u_max(); }

  double eval(double u) const;        // left-continuous value g(u-)
  double eval_right(double u) const;  // g(u+)
  double total_variation() const;

 private:
  PiecewisePoly smooth_;
  std::vector<Jump> jumps_;
};

// Oriented Lebesgue-Stieltjes integral of f against dg, anchored at zero:
// returns sign(u) * integral over J(u) of f dg with J(u) = [0,u) for u > 0
// and J(u) = [u,0) for u <= 0.  Half-open from the right, so an atom of g at
// u itself never contributes and an atom at 0 contributes exactly when u > 0.
// Requires 0 and u inside [u_min, u_max].
double stieltjes_integral(const PiecewisePoly& f, const BVFunction& g, double u);

// The transformation f -> g(u-) f(u) - integral_0^u f dg, normalized to
// vanish at u = 0.  f must be continuous; the result is then continuous
// even when g jumps, and satisfies (T f)' = g f' wherever f is C^1.
PiecewisePoly apply_Tg(const BVFunction& g, const PiecewisePoly& f);

// Entropy triple for the level k: eta = |u - k|,
// q = sign(u - k) (phi(u) - phi(k)), Q = |A(u) - A(k)|.
struct KruzhkovTriple {
  PiecewisePoly eta;
  PiecewisePoly q;
  PiecewisePoly Q;
};

KruzhkovTriple kruzhkov_pair(const PiecewisePoly& phi, const PiecewisePoly& A, double k);

}  // namespace decaylab
