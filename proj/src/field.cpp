#include "decaylab/field.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

// prefix sums of |u| * dx; P[i] = integral of |u| over the first i cells
std::vector<double> abs_prefix(const std::vector<double>& v, double dx, std::size_t reps) {
  std::vector<double> p(v.size() * reps + 1, 0.0);
  for (std::size_t i = 0; i < v.size() * reps; ++i)
    p[i + 1] = p[i] + std::abs(v[i % v.size()]) * dx;
  return p;
}

}  // namespace

double v_norm(const GridFn& u, double window_length) {
  const double len = u.length();
  const double dx = u.dx();
  if (!(window_length > 0.0)) throw DomainError("v_norm: window length must be positive");
  if (window_length > len * (1.0 + 1e-12))
    throw DomainError("v_norm: window longer than the domain");

  // split the window into whole cells plus a fractional tail in [0, dx)
  const double q = window_length / dx;
  std::size_t w_full = static_cast<std::size_t>(std::floor(q + 1e-9));
  if (w_full > u.n()) w_full = u.n();
  double tail = window_length - static_cast<double>(w_full) * dx;
  if (tail < 0.0) tail = 0.0;

  const auto& v = u.values();
  const std::size_t n = u.n();
  double best = 0.0;

  if (u.is_periodic()) {
    const std::vector<double> p = abs_prefix(v, dx, 2);
    for (std::size_t j = 0; j < n; ++j) {
      double s = p[j + w_full] - p[j];
      if (tail > 0.0) s += tail * std::abs(v[(j + w_full) % n]);
      best = std::max(best, s);
    }
    return best;
  }

  const std::vector<double> p = abs_prefix(v, dx, 1);
  // left-aligned: window starts on a cell boundary
  for (std::size_t j = 0; j + w_full <= n; ++j) {
    double s = p[j + w_full] - p[j];
    if (tail > 0.0) {
      if (j + w_full >= n) continue;  // would poke past the box
      s += tail * std::abs(v[j + w_full]);
    }
    best = std::max(best, s);
  }
  // right-aligned: window ends on a cell boundary
  if (tail > 0.0) {
    for (std::size_t j = w_full; j < n; ++j) {
      double s = p[j + 1] - p[j + 1 - w_full] + tail * std::abs(v[j - w_full]);
      best = std::max(best, s);
    }
  }
  return best;
}

double stepanov_norm(const GridFn& u, double radius) {
  if (!(radius > 0.0)) throw DomainError("stepanov_norm: radius must be positive");
  return v_norm(u, 2.0 * radius);
}

Envelopes lattice_envelopes(const GridFn& v, const Lattice& L, int r) {
  if (v.is_periodic()) throw DomainError("lattice_envelopes: profile must live on a box");
  if (L.dim() != 1) throw DomainError("lattice_envelopes: 1D lattices only");
  if (r < 1) throw ShapeError("lattice_envelopes: r must be >= 1");
  const double e = std::abs(L.basis()(0, 0));
  const double dx = v.dx();
  const double cell_len = static_cast<double>(r) * e;

  // the envelope grid must be the profile grid: r e a whole number of cells,
  // and the cell boundary at -re/2 aligned with the profile's boundaries
  const double cells_f = cell_len / dx;
  const long n_out = std::lround(cells_f);
  if (n_out < 1 || std::abs(cells_f - static_cast<double>(n_out)) > 1e-9 * cells_f)
    throw CommensurabilityError("lattice_envelopes: cell P_r is not a whole number of cells");
  const double off_f = (-0.5 * cell_len - v.x_lo()) / dx;
  const long off = std::lround(off_f);
  if (std::abs(off_f - static_cast<double>(off)) > 1e-9 * std::max(1.0, std::abs(off_f)))
    throw CommensurabilityError("lattice_envelopes: P_r is not aligned with the profile grid");

  // tail value 0 is only exact when the support stays inside the box
  const long n_in = static_cast<long>(v.n());
  if (v[0] != 0.0 || v[static_cast<std::size_t>(n_in - 1)] != 0.0)
    throw CoverageError("lattice_envelopes: profile support reaches the edge of its box");

  std::vector<double> up(static_cast<std::size_t>(n_out));
  std::vector<double> down(static_cast<std::size_t>(n_out));
  std::vector<double> amax(static_cast<std::size_t>(n_out));
  for (long i = 0; i < n_out; ++i) {
    // translate indices i + off + k n_out that land inside the box
    double hi = 0.0, lo = 0.0, ab = 0.0;  // out-of-box translates contribute 0
    long idx = off + i;
    idx -= (idx / n_out + 2) * n_out;  // start safely left of the box
    for (; idx < n_in; idx += n_out) {
      if (idx < 0) continue;
      const double val = v[static_cast<std::size_t>(idx)];
      hi = std::max(hi, val);
      lo = std::min(lo, val);
      ab = std::max(ab, std::abs(val));
    }
    up[static_cast<std::size_t>(i)] = hi;
    down[static_cast<std::size_t>(i)] = lo;
    amax[static_cast<std::size_t>(i)] = ab;
  }

  const double lo_edge = -0.5 * cell_len;
  return Envelopes{GridFn::box(lo_edge, 0.5 * cell_len, std::move(up)),
                   GridFn::box(lo_edge, 0.5 * cell_len, std::move(down)),
                   GridFn::box(lo_edge, 0.5 * cell_len, std::move(amax))};
}

EnvelopeMeans envelope_means(const Envelopes& env) {
  EnvelopeMeans m;
  m.eps_plus = env.upper.mean_over_box();
  m.eps_minus = env.lower.mean_over_box();
  m.big_m = env.abs_sup.mean_over_box();
  const double slack = 1e-12 * std::max(1.0, m.big_m);
  if (std::abs(m.eps_plus) > m.big_m + slack || std::abs(m.eps_minus) > m.big_m + slack)
    throw Error("envelope_means: |eps| <= M failed, envelope construction is broken");
  return m;
}

std::vector<std::pair<double, double>> vanishing_profile(const GridFn& v,
                                                         const std::vector<double>& lambdas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    if (!(lam >= 0.0)) throw DomainError("vanishing_profile: thresholds must be >= 0");
    std::size_t count = 0;
    for (double x : v.values())
      if (std::abs(x) > lam) ++count;
    out.emplace_back(lam, static_cast<double>(count) * v.dx());
  }
  return out;
}

MeanVanishingReport mean_vanishing_check(const GridFn& v, const std::vector<double>& widths,
                                         double threshold, double eps) {
  if (widths.empty()) throw DomainError("mean_vanishing_check: need at least one width");
  if (!(eps > 0.0)) throw DomainError("mean_vanishing_check: eps must be positive");

  // superlevel measure for the split bound
  double super = 0.0;
  for (double x : v.values())
    if (std::abs(x) > eps) super += v.dx();
  const double vmax = v.linf();
  const double center = 0.5 * (v.x_lo() + v.x_hi());

  MeanVanishingReport rep;
  rep.eps = eps;
  rep.nonincreasing = true;
  for (double w : widths) {
    if (!(w > 0.0)) throw DomainError("mean_vanishing_check: widths must be positive");
    const double a = center - 0.5 * w, b = center + 0.5 * w;
    // integral of |v| over [a, b] with exact fractional end cells; v vanishes
    // beyond its box, so clipping the window costs nothing
    double integral = 0.0;
    for (std::size_t i = 0; i < v.n(); ++i) {
      const double clo = v.x_lo() + v.dx() * static_cast<double>(i);
      const double ov = std::max(0.0, std::min(b, clo + v.dx()) - std::max(a, clo));
      if (ov > 0.0) integral += std::abs(v[i]) * ov;
    }
    MeanVanishingRow row;
    row.width = w;
    row.mean_abs = integral / w;
    row.bound = vmax * super / w + eps;
    if (!rep.rows.empty() &&
        row.mean_abs > rep.rows.back().mean_abs * (1.0 + 1e-9) + 1e-15)
      rep.nonincreasing = false;
    rep.rows.push_back(row);
  }
  rep.final_below = rep.rows.back().mean_abs <= threshold;
  return rep;
}

GridFn build_exactness_data(double m, double delta, const GridFn& v_profile, double xi,
                            double r_period) {
  if (!(delta > 0.0)) throw ContractError("build_exactness_data: delta must be positive");
  if (!(r_period > 0.0)) throw ContractError("build_exactness_data: r_period must be positive");
  if (v_profile.linf() > 0.5 * delta * (1.0 + 1e-12))
    throw ContractError("build_exactness_data: profile amplitude exceeds delta/2");
  // xi must pair integrally (and nontrivially) with the period
  const double pairing = xi * r_period;
  const double nearest = std::round(pairing);
  if (std::abs(pairing - nearest) > 1e-9 * std::max(1.0, std::abs(pairing)) || nearest == 0.0)
    throw ContractError("build_exactness_data: xi is not a nonzero dual frequency");
  // in one dimension the profile term collapses to a constant 0; only its
  // amplitude contract and the resolution are taken from v_profile
  return GridFn::sine(true, 0.0, r_period, v_profile.n(), m, 0.5 * delta, r_period);
}

}  // namespace decaylab
