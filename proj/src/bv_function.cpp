#include "decaylab/bv_function.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

BVFunction::BVFunction(PiecewisePoly smooth, std::vector<Jump> jumps)
    : smooth_(std::move(smooth)), jumps_(std::move(jumps)) {
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (jumps_[i].location < smooth_.u_min() || jumps_[i].location > smooth_.u_max())
      throw ShapeError("BVFunction: jump outside [u_min, u_max]");
    if (i > 0 && !(jumps_[i - 1].location < jumps_[i].location))
      throw ShapeError("BVFunction: jump locations must be strictly increasing");
  }
}

BVFunction BVFunction::sign_about(double k, double u_min, double u_max) {
  if (k < u_min)
    return BVFunction(PiecewisePoly::constant(u_min, u_max, 1.0));
  if (k >= u_max)
    return BVFunction(PiecewisePoly::constant(u_min, u_max, -1.0));
  return BVFunction(PiecewisePoly::constant(u_min, u_max, -1.0), {{k, 2.0}});
}

double BVFunction::eval(double u) const {
  double v = smooth_.eval(u);
  for (const Jump& j : jumps_) {
    if (j.location >= u) break;
    v += j.size;
  }
  return v;
}

double BVFunction::eval_right(double u) const {
  double v = smooth_.eval_right(u);
  for (const Jump& j : jumps_) {
    if (j.location > u) break;
    v += j.size;
  }
  return v;
}

double BVFunction::total_variation() const {
  const PiecewisePoly d = smooth_.derivative();
  double tv = d.abs().integrate(u_min(), u_max());
  for (const Jump& j : jumps_) tv += std::abs(j.size);
  return tv;
}

namespace {

void require_anchored(const char* who, double u, double lo, double hi) {
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (u < lo - slack || u > hi + slack)
    throw RangeError(std::string(who) + ": argument outside [u_min, u_max]");
  if (0.0 < lo - slack || 0.0 > hi + slack)
    throw RangeError(std::string(who) + ": range must contain the anchor point 0");
}

// atoms of dg inside J(u), with the half-open-right convention baked in
double jump_sum(const PiecewisePoly& f, const std::vector<BVFunction::Jump>& jumps, double u) {
  double s = 0.0;
  if (u > 0.0) {
    for (const auto& j : jumps)
      if (j.location >= 0.0 && j.location < u) s += f.eval(j.location) * j.size;
  } else if (u < 0.0) {
    for (const auto& j : jumps)
      if (j.location >= u && j.location < 0.0) s -= f.eval(j.location) * j.size;
  }
  return s;
}

}  // namespace

double stieltjes_integral(const PiecewisePoly& f, const BVFunction& g, double u) {
  require_anchored("stieltjes_integral", u, g.u_min(), g.u_max());
  if (u == 0.0) return 0.0;
  // smooth part carries no atoms, so orientation handles both signs of u
  const PiecewisePoly integrand = f * g.smooth().derivative();
  return integrand.integrate(0.0, u) + jump_sum(f, g.jumps(), u);
}

PiecewisePoly apply_Tg(const BVFunction& g, const PiecewisePoly& f) {
  if (!f.continuous())
    throw ContractError("apply_Tg: f must be continuous");
  require_anchored("apply_Tg", 0.0, g.u_min(), g.u_max());

  // refine f onto the union of both breakpoint sets plus the jump locations
  PiecewisePoly ff = f;
  for (double b : g.smooth().breakpoints()) ff = ff.with_breakpoint(b);
  for (const auto& j : g.jumps()) ff = ff.with_breakpoint(j.location);
  PiecewisePoly gs = g.smooth();
  for (double b : ff.breakpoints()) gs = gs.with_breakpoint(b);
  if (gs.piece_count() != ff.piece_count())
    throw ShapeError("apply_Tg: refinement failed to align the breakpoint grids");

  // W = antiderivative of f g_s', anchored at 0
  const PiecewisePoly W = (ff * gs.derivative()).antiderivative(0.0);

  const auto& bps = ff.breakpoints();
  std::vector<Polynomial> out;
  out.reserve(ff.piece_count());
  for (std::size_t i = 0; i < ff.piece_count(); ++i) {
    const double l = bps[i], r = bps[i + 1];
    // g(u-) on (l, r]: smooth piece plus all jumps at or left of l
    double jump_carry = 0.0;
    for (const auto& j : g.jumps())
      if (j.location <= l) jump_carry += j.size;
    // atom part of the anchored integral, constant on the open piece
    double atom = 0.0;
    if (l >= 0.0) {
      for (const auto& j : g.jumps())
        if (j.location >= 0.0 && j.location <= l) atom += ff.eval(j.location) * j.size;
    } else if (r <= 0.0) {
      for (const auto& j : g.jumps())
        if (j.location >= r && j.location < 0.0) atom -= ff.eval(j.location) * j.size;
    }
    const Polynomial gf =
        (gs.piece(i) + Polynomial::constant(jump_carry)) * ff.piece(i);
    out.push_back(gf - W.piece(i) - Polynomial::constant(atom));
  }

  PiecewisePoly T(bps, std::move(out));
  T = T + (-T.eval(0.0));
  if (!T.continuous())
    throw ShapeError("apply_Tg: result failed the continuity check");
  return T;
}

KruzhkovTriple kruzhkov_pair(const PiecewisePoly& phi, const PiecewisePoly& A, double k) {
  const double lo = phi.u_min(), hi = phi.u_max();
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (k < lo - slack || k > hi + slack)
    throw RangeError("kruzhkov_pair: level k outside [u_min, u_max]");
  k = std::clamp(k, lo, hi);

  // eta = |u - k|: sign split happens at k only
  const PiecewisePoly u_minus_k =
      PiecewisePoly::single(lo, hi, Polynomial({-k, 1.0})).with_breakpoint(k);
  PiecewisePoly eta = u_minus_k.abs();

  // q = sign(u - k)(phi(u) - phi(k)): flip the pieces left of k
  PiecewisePoly shifted = phi.with_breakpoint(k) + (-phi.eval(k));
  const auto& bps = shifted.breakpoints();
  std::vector<Polynomial> qp;
  qp.reserve(shifted.piece_count());
  for (std::size_t i = 0; i < shifted.piece_count(); ++i) {
    const double mid = 0.5 * (bps[i] + bps[i + 1]);
    qp.push_back(mid < k ? -shifted.piece(i) : shifted.piece(i));
  }
  PiecewisePoly q(bps, std::move(qp));

  // Q = |A(u) - A(k)|: roots can sit anywhere A is flat, so use the splitter
  PiecewisePoly Q = (A.with_breakpoint(k) + (-A.eval(k))).abs();

  return {std::move(eta), std::move(q), std::move(Q)};
}

}  // namespace decaylab
