#include "decaylab/stefan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decaylab/errors.hpp"
#include "decaylab/field.hpp"
#include "decaylab/model.hpp"

namespace decaylab {

GridFn default_bump(std::size_t n, double amplitude) {
  if (n < 8) throw ShapeError("default_bump: need at least 8 cells");
  std::vector<double> v(n, 0.0);
  const double h = 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    const double y = -1.0 + (static_cast<double>(i) + 0.5) * h;
    const double s = 1.0 - y * y;
    v[i] = amplitude * s * s * s;
    v[n - 1 - i] = v[i];  // mirrored, so evenness is exact
  }
  return GridFn::box(-1.0, 1.0, std::move(v));
}

std::size_t FixedDomainRun::index_of_time(double time) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(time));
  auto it = std::lower_bound(t.begin(), t.end(), time - tol);
  if (it == t.end() || *it > time + tol)
    throw CoverageError("FixedDomainRun: instant " + std::to_string(time) +
                        " is not on the step grid");
  return static_cast<std::size_t>(it - t.begin());
}

const GridFn& FixedDomainRun::snapshot_at(double time) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(time));
  for (std::size_t j = 0; j < snap_times.size(); ++j)
    if (std::abs(snap_times[j] - time) <= tol) return snapshots[j];
  throw CoverageError("FixedDomainRun: no snapshot at t = " + std::to_string(time));
}

namespace {

void thomas_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                  const std::vector<double>& upper, const std::vector<double>& rhs,
                  std::vector<double>& out, std::vector<double>& cp, std::vector<double>& dp) {
  const std::size_t m = diag.size();
  cp[0] = upper[0] / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < m; ++i) {
    const double w = diag[i] - lower[i] * cp[i - 1];
    cp[i] = upper[i] / w;
    dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / w;
  }
  out[m - 1] = dp[m - 1];
  for (std::size_t i = m - 1; i > 0; --i) out[i - 1] = dp[i - 1] - cp[i - 1] * out[i];
}

}  // namespace

FixedDomainRun solve_fixed_domain(const GridFn& phi0, double alpha, double t_end,
                                  double dt_scale, const std::vector<double>& snapshot_times) {
  if (phi0.is_periodic()) throw DomainError("solve_fixed_domain: phi0 lives on the box [-1, 1]");
  if (std::abs(phi0.x_lo() + 1.0) > 1e-12 || std::abs(phi0.x_hi() - 1.0) > 1e-12)
    throw DomainError("solve_fixed_domain: phi0 must cover exactly [-1, 1]");
  const std::size_t m = phi0.n();
  if (m < 8) throw ShapeError("solve_fixed_domain: need at least 8 cells");
  const auto& p0 = phi0.values();
  for (std::size_t i = 0; i < m; ++i) {
    if (p0[i] < 0.0) throw ContractError("solve_fixed_domain: phi0 must be nonnegative");
    if (std::abs(p0[i] - p0[m - 1 - i]) > 1e-12)
      throw ContractError("solve_fixed_domain: phi0 must be even");
  }
  if (alpha < 0.0) throw ContractError("solve_fixed_domain: alpha must be nonnegative");
  if (!(t_end > 0.0)) throw ConfigError("solve_fixed_domain: t_end must be positive");
  if (!(dt_scale > 0.0)) throw ConfigError("solve_fixed_domain: dt_scale must be positive");

  std::vector<double> snaps = snapshot_times;
  for (double s : snaps)
    if (!(s >= 0.0 && s <= t_end))
      throw ConfigError("solve_fixed_domain: snapshot instants must lie within [0, t_end]");
  snaps.push_back(0.0);
  snaps.push_back(t_end);
  std::sort(snaps.begin(), snaps.end());
  {
    std::vector<double> dedup;
    for (double s : snaps)
      if (dedup.empty() || s > dedup.back() + 1e-12 * std::max(1.0, t_end)) dedup.push_back(s);
    snaps.swap(dedup);
  }

  const MovingBoundary mb{alpha};
  FixedDomainRun run(phi0);
  run.alpha = alpha;
  run.h = phi0.dx();
  run.dt_scale = dt_scale;

  const double h = run.h;
  const double phimax = phi0.max_value();
  std::vector<double> v = p0;
  std::vector<double> vn(m), rhs(m), diag(m), lower(m), upper(m), cp(m), dp(m);

  double f_prev = 0.0;  // previous W-integrand sample, for the trapezoid

  auto record = [&](double tt, bool first) {
    const double wl = (9.0 * v[0] - v[1]) / (3.0 * h);
    const double wr = (v[m - 2] - 9.0 * v[m - 1]) / (3.0 * h);
    double mx = 0.0;
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (v[i] > mx) mx = v[i];
      const double vm = i > 0 ? v[i - 1] : -v[0];
      const double vp = i + 1 < m ? v[i + 1] : -v[m - 1];
      const double d2 = (vp - 2.0 * v[i] + vm) / (h * h);
      e += d2 * d2;
    }
    e = e * h + mb.r(tt) * mb.rp(tt) * (wl * wl + wr * wr);
    // The maximum principle forces outflow (boundary derivative <= 0); the
    // one-sided stencil can report a tiny positive value at the cubic
    // tangency of the initial profile, which the clamp discards so the mass
    // prefix stays nondecreasing.
    const double f = std::max(0.0, -wr / mb.r(tt));
    if (first) {
      run.w_integral.push_back(0.0);
    } else {
      const double dt_loc = tt - run.t.back();
      run.w_integral.push_back(run.w_integral.back() + 0.5 * (f_prev + f) * dt_loc);
    }
    f_prev = f;
    run.t.push_back(tt);
    run.w_left.push_back(wl);
    run.w_right.push_back(wr);
    run.sup.push_back(mx);
    run.energy.push_back(e);
  };

  record(0.0, true);
  run.snap_times.push_back(0.0);
  run.snapshots.push_back(phi0);
  std::size_t si = snaps.front() == 0.0 ? 1 : 0;

  const double dt_base = dt_scale * h;
  double t = 0.0;
  bool dead = false;
  while (si < snaps.size()) {
    const double target = snaps[si];
    const double remaining = target - t;
    const bool hits = dt_base >= remaining;
    const double dt = hits ? remaining : dt_base;
    const double t1 = hits ? target : t + dt;

    if (!dead) {
      // Fully implicit step, with the operator at time t1 and wall ghosts
      // folded into the end rows.  Backward Euler is the right scheme here:
      // it is L-stable, so stiff mesh modes die immediately instead of
      // ringing at the walls, where they would eventually drown the decaying
      // boundary-derivative signal that the construction reads off.  The
      // system is an M-matrix (diffusion dominates the drift for any usable
      // resolution), so the update also preserves positivity.
      {
        const double r1 = mb.r(t1), rp1 = mb.rp(t1);
        const double cd = 1.0 / (r1 * r1 * h * h);
        const double ca = rp1 / (2.0 * h * r1);
        for (std::size_t i = 0; i < m; ++i) {
          const double y = -1.0 + (static_cast<double>(i) + 0.5) * h;
          lower[i] = -dt * (cd - ca * y);
          upper[i] = -dt * (cd + ca * y);
          diag[i] = 1.0 + 2.0 * dt * cd;
          rhs[i] = v[i];
        }
        diag[0] += dt * (cd - ca * (-1.0 + 0.5 * h));
        diag[m - 1] += dt * (cd + ca * (1.0 - 0.5 * h));
      }
      thomas_solve(lower, diag, upper, rhs, vn, cp, dp);
      v.swap(vn);

      double mn = v[0], mx = v[0], asym = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (v[i] < mn) mn = v[i];
        if (v[i] > mx) mx = v[i];
        if (i < m / 2) asym = std::max(asym, std::abs(v[i] - v[m - 1 - i]));
      }
      run.max_asymmetry = std::max(run.max_asymmetry, asym);
      run.worst_negative = std::max(run.worst_negative, -mn);
      run.worst_overshoot = std::max(run.worst_overshoot, mx - phimax);
      if (std::max(mx, -mn) < 1e-280) {
        std::fill(v.begin(), v.end(), 0.0);  // below the floor: the run is over
        dead = true;
      }
    }

    t = t1;
    record(t, false);
    if (hits) {
      run.snap_times.push_back(t);
      run.snapshots.push_back(GridFn::box(-1.0, 1.0, v));
      ++si;
    }
  }
  run.worst_negative = std::max(0.0, run.worst_negative);
  run.worst_overshoot = std::max(0.0, run.worst_overshoot);
  return run;
}

PsiTable boundary_flux_to_psi(const FixedDomainRun& run, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("boundary_flux_to_psi: alpha must be positive");
  if (std::abs(alpha - run.alpha) > 1e-12)
    throw ContractError("boundary_flux_to_psi: alpha disagrees with the run");
  if (run.t.empty()) throw ShapeError("boundary_flux_to_psi: empty run");

  PsiTable tb;
  tb.alpha = alpha;
  tb.t_end = run.t.back();
  tb.series_t = run.t;
  tb.series_w = run.w_integral;
  tb.integral = run.w_integral.back();

  const MovingBoundary mb{alpha};
  for (std::size_t j = 0; j < run.t.size(); ++j) {
    const double tt = run.t[j];
    if (tt < 1.0) continue;  // the one-sided stencil is unreliable this early
    const double w = run.w_right[j];
    if (w > 0.0)
      throw Error("boundary_flux_to_psi: positive boundary flux would make psi negative");
    if (w == 0.0) break;  // the state hit the floor; nothing more to sample
    const double r = mb.r(tt);
    if (!tb.x.empty() && r <= tb.x.back()) break;  // r(t) saturated in floating point
    const double ps = -w / (r * mb.rp(tt));
    tb.t.push_back(tt);
    tb.x.push_back(r);
    tb.w.push_back(w);
    tb.r.push_back(r);
    tb.psi.push_back(ps);
    tb.max_psi = std::max(tb.max_psi, ps);
  }
  return tb;
}

double PsiTable::time_of_x(double xx) const {
  if (xx >= 2.0) return t_end;
  const double tt = -std::log(2.0 - xx) / alpha;
  return std::clamp(tt, 0.0, t_end);
}

double PsiTable::w_at_time(double time) const {
  if (series_t.empty()) return 0.0;
  if (time <= series_t.front()) return series_w.front();
  if (time >= series_t.back()) return series_w.back();
  const auto it = std::upper_bound(series_t.begin(), series_t.end(), time);
  const std::size_t j = static_cast<std::size_t>(it - series_t.begin());
  const double t0 = series_t[j - 1], t1 = series_t[j];
  const double s = (time - t0) / (t1 - t0);
  return series_w[j - 1] + s * (series_w[j] - series_w[j - 1]);
}

double PsiTable::cell_avg(double a, double b) const {
  if (!(b > a)) throw ShapeError("PsiTable::cell_avg: needs a nonempty interval");
  return (w_at_time(time_of_x(b)) - w_at_time(time_of_x(a))) / (b - a);
}

double PsiTable::psi_at(double xx) const {
  if (psi.empty()) return 0.0;
  if (xx <= x.front()) return psi.front();
  if (xx >= x.back()) return psi.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xx);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double s = (xx - x[j - 1]) / (x[j] - x[j - 1]);
  return psi[j - 1] + s * (psi[j] - psi[j - 1]);
}

StefanSolution assemble_periodic_solution(const FixedDomainRun& run, const PsiTable& psi,
                                          std::size_t n_x,
                                          const std::vector<double>& sample_times) {
  if (n_x < 20) throw ShapeError("assemble_periodic_solution: grid too coarse");
  if (sample_times.empty()) throw ShapeError("assemble_periodic_solution: no sample times");

  StefanSolution sol;
  sol.alpha = run.alpha;
  sol.max_psi = psi.max_psi;

  const MovingBoundary mb{run.alpha};
  const double x_lo = -2.5, len = 5.0;
  const double dx = len / static_cast<double>(n_x);
  const double h = run.h;
  const std::size_t m = run.phi0.n();

  for (double ts : sample_times) {
    const GridFn& vslice = run.snapshot_at(ts);
    const auto& vv = vslice.values();
    const double r = mb.r(ts), rp = mb.rp(ts);

    // piecewise-linear read of v at y in (-1, 1), anchored to 0 at the walls
    auto v_at = [&](double y) {
      const double pos = (y + 1.0) / h - 0.5;
      if (pos <= 0.0) {
        const double f = (y + 1.0) / (0.5 * h);
        return f <= 0.0 ? 0.0 : f * vv[0];
      }
      if (pos >= static_cast<double>(m - 1)) {
        const double f = (1.0 - y) / (0.5 * h);
        return f <= 0.0 ? 0.0 : f * vv[m - 1];
      }
      const std::size_t i = static_cast<std::size_t>(pos);
      const double f = pos - static_cast<double>(i);
      return vv[i] * (1.0 - f) + vv[i + 1] * f;
    };

    std::vector<double> u(n_x, 0.0);
    for (std::size_t i = 0; i < n_x; ++i) {
      const double a = x_lo + dx * static_cast<double>(i);
      const double b = a + dx;
      // split the cell at the region boundaries it crosses
      double cuts[6] = {a, 0, 0, 0, 0, b};
      std::size_t nc = 1;
      for (double c : {-2.0, -r, r, 2.0})
        if (c > a && c < b) cuts[nc++] = c;
      cuts[nc++] = b;
      std::sort(cuts, cuts + nc);
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < nc; ++j) {
        const double p = cuts[j], q = cuts[j + 1];
        if (!(q > p)) continue;
        const double mid = 0.5 * (p + q);
        if (std::abs(mid) < r) {
          acc += v_at(mid / r) * (q - p);
        } else if (std::abs(mid) < 2.0) {
          const double lo = std::min(std::abs(p), std::abs(q));
          const double hi = std::max(std::abs(p), std::abs(q));
          acc -= psi.cell_avg(lo, hi) * (q - p);
        }
        // |x| > 2: identically zero
      }
      u[i] = acc / dx;
    }

    const std::size_t j = run.index_of_time(ts);
    const double w = run.w_right[j];
    sol.times.push_back(ts);
    sol.states.push_back(GridFn::periodic(x_lo, len, std::move(u)));
    sol.r_front.push_back(r);
    sol.w_front.push_back(w);
    sol.psi_front.push_back(rp > 0.0 ? std::max(0.0, -w / (r * rp)) : 0.0);
    sol.sup_inner.push_back(run.sup[j]);
  }
  return sol;
}

namespace {

double pos_part(double u) { return u > 0.0 ? u : 0.0; }

// slope at the anchor b of the quadratic through (x1,u1), (x2,u2), (b,0)
double anchored_quadratic_slope(double b, double x1, double u1, double x2, double u2) {
  return u1 * (b - x2) / ((x1 - x2) * (x1 - b)) + u2 * (b - x1) / ((x2 - x1) * (x2 - b));
}

}  // namespace

JumpReport verify_jump_conditions(const StefanSolution& s) {
  if (s.states.empty()) throw ShapeError("verify_jump_conditions: empty solution");
  JumpReport rep;
  rep.rh_tolerance = 5e-3 * s.max_psi;
  rep.worst_inner_slope = -std::numeric_limits<double>::infinity();
  const MovingBoundary mb{s.alpha};

  for (std::size_t j = 0; j < s.states.size(); ++j) {
    const GridFn& u = s.states[j];
    const auto& uv = u.values();
    const double dx = u.dx();
    const double x_lo = u.x_lo();
    const double r = s.r_front[j];
    const double rp = mb.rp(s.times[j]);
    const double psi_f = s.psi_front[j];

    // the diffusion primitive max(u, 0) across each front: inside limit is 0
    // (the fixed-domain walls), outside value is -psi <= 0
    rep.max_jump_A = std::max(rep.max_jump_A, std::abs(pos_part(0.0) - pos_part(-psi_f)));

    // right front: the two nearest cell centers at least one cell inside
    {
      const long i1 = static_cast<long>(std::floor((r - x_lo) / dx - 1.5));
      if (i1 >= 1 && i1 < static_cast<long>(uv.size())) {
        const double x1 = x_lo + (static_cast<double>(i1) + 0.5) * dx;
        const double x2 = x1 - dx;
        const double slope =
            anchored_quadratic_slope(r, x1, uv[i1], x2, uv[i1 - 1]);
        rep.max_rh_residual = std::max(rep.max_rh_residual, std::abs(psi_f * rp + slope));
        // the admissibility sign via the anchored secant: its sign is the
        // sign of -u just inside, which positivity controls directly
        rep.worst_inner_slope = std::max(rep.worst_inner_slope, -uv[i1] / (r - x1));
      }
      // two cells fully outside: the diffusion primitive must be flat there
      const long io = static_cast<long>(std::ceil((r - x_lo) / dx + 0.5));
      if (io + 1 < static_cast<long>(uv.size())) {
        const double co = x_lo + (static_cast<double>(io) + 0.5) * dx;
        if (co + dx < 2.0)
          rep.max_outer_slope = std::max(
              rep.max_outer_slope, std::abs(pos_part(uv[io + 1]) - pos_part(uv[io])) / dx);
      }
    }
    // left front, mirrored
    {
      const long i1 = static_cast<long>(std::ceil((-r - x_lo) / dx + 0.5));
      if (i1 + 1 < static_cast<long>(uv.size())) {
        const double x1 = x_lo + (static_cast<double>(i1) + 0.5) * dx;
        const double x2 = x1 + dx;
        const double slope =
            anchored_quadratic_slope(-r, x1, uv[i1], x2, uv[i1 + 1]);
        rep.max_rh_residual = std::max(rep.max_rh_residual, std::abs(psi_f * rp - slope));
        rep.worst_inner_slope = std::max(rep.worst_inner_slope, -uv[i1] / (x1 + r));
      }
      const long io = static_cast<long>(std::floor((-r - x_lo) / dx - 0.5));
      if (io >= 1) {
        const double co = x_lo + (static_cast<double>(io) + 0.5) * dx;
        if (co - dx > -2.0)
          rep.max_outer_slope = std::max(
              rep.max_outer_slope, std::abs(pos_part(uv[io]) - pos_part(uv[io - 1])) / dx);
      }
    }
  }

  rep.jump_A_ok = rep.max_jump_A == 0.0;
  rep.rh_ok = rep.max_rh_residual <= rep.rh_tolerance;
  rep.entropy_ok = rep.worst_inner_slope <= 1e-10 && rep.max_outer_slope == 0.0;
  rep.ok = rep.jump_A_ok && rep.rh_ok && rep.entropy_ok;
  return rep;
}

namespace {

RateFit fit_exponential(const std::vector<double>& t, const std::vector<double>& s,
                        double t_lo, double floor_value) {
  RateFit f;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] < t_lo) continue;
    if (!(s[j] >= floor_value)) break;  // the series died; the tail is noise
    xs.push_back(t[j]);
    ys.push_back(std::log(s[j]));
  }
  f.points = xs.size();
  if (f.points < 10) return f;
  f.t_lo = xs.front();
  f.t_hi = xs.back();
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mx += xs[j];
    my += ys[j];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - mx) * (xs[j] - mx);
    sxy += (xs[j] - mx) * (ys[j] - my);
  }
  const double slope = sxy / sxx;
  f.rate = -slope;
  double rss = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double e = ys[j] - (my + slope * (xs[j] - mx));
    rss += e * e;
  }
  f.rms = std::sqrt(rss / static_cast<double>(xs.size()));
  f.conclusive = f.rms <= 0.2;
  return f;
}

}  // namespace

RateReport verify_decay_estimates(const FixedDomainRun& run, double t_fit_lo, double floor) {
  RateReport rep;
  rep.alpha = run.alpha;
  std::vector<double> absw(run.w_right.size());
  for (std::size_t j = 0; j < absw.size(); ++j) absw[j] = std::abs(run.w_right[j]);
  rep.energy = fit_exponential(run.t, run.energy, t_fit_lo, floor);
  rep.boundary = fit_exponential(run.t, absw, t_fit_lo, floor);
  rep.supremum = fit_exponential(run.t, run.sup, t_fit_lo, floor);
  rep.pass_energy = rep.energy.conclusive && rep.energy.rate >= 2.8 * run.alpha;
  rep.pass_boundary = rep.boundary.conclusive && rep.boundary.rate >= 0.9 * run.alpha;
  rep.pass_supremum = rep.supremum.conclusive && rep.supremum.rate >= 1.4 * run.alpha;
  rep.ok = rep.pass_energy && rep.pass_boundary && rep.pass_supremum;
  return rep;
}

MassBalance mass_balance(const FixedDomainRun& run, const PsiTable& psi) {
  MassBalance mb;
  mb.integral_phi0 = run.phi0.integral();
  mb.integral_psi = psi.integral;
  mb.residual = std::abs(mb.integral_phi0 - 2.0 * psi.integral);
  mb.relative = mb.integral_phi0 > 0.0 ? mb.residual / mb.integral_phi0 : mb.residual;
  return mb;
}

PerturbReport perturbed_nondecay_experiment(const StefanSolution& s, const GridFn& v_pert,
                                            double t_end) {
  if (s.states.empty()) throw ShapeError("perturbed_nondecay_experiment: empty solution");
  const GridFn& u0 = s.initial();
  if (!v_pert.same_grid(u0))
    throw ShapeError("perturbed_nondecay_experiment: perturbation grid mismatch");
  for (std::size_t i = 0; i < v_pert.n(); ++i) {
    if (v_pert[i] > 0.0)
      throw ContractError("perturbed_nondecay_experiment: perturbation must be nonpositive");
    if (v_pert[i] != 0.0 && std::abs(v_pert.cell_center(i)) <= 2.0)
      throw ContractError(
          "perturbed_nondecay_experiment: perturbation must live where the profile vanishes "
          "(|x| > 2)");
  }
  if (!(t_end >= 2.0))
    throw ConfigError("perturbed_nondecay_experiment: t_end must be at least 2");

  const GridFn upert = u0 + v_pert;
  // widen the state range so the outer profile fits; the dynamics ignore it
  const double lo =
      std::min(-16.0, std::floor(std::min(u0.min_value(), upert.min_value())) - 1.0);
  const double hi = std::max(1.0, std::ceil(std::max(u0.max_value(), upert.max_value())));
  const ModelSpec model = preset_model("stefan", lo, hi);

  SolverConfig cfg;
  cfg.t_end = t_end;
  for (double tt = 1.0; tt < t_end - 1e-9; tt += 1.0) cfg.output_times.push_back(tt);

  const Trajectory base = evolve(u0, model, cfg);
  const Trajectory pert = evolve(upert, model, cfg);

  PerturbReport rep;
  rep.pert_norm = stepanov_norm(v_pert, 1.0);
  rep.min_xnorm_after_1 = std::numeric_limits<double>::infinity();
  const double dx = u0.dx();
  for (std::size_t j = 0; j < pert.states.size(); ++j) {
    const double tj = pert.times[j];
    const auto& ua = base.states[j].values();
    const auto& ub = pert.states[j].values();
    double dist = 0.0;
    for (std::size_t i = 0; i < ua.size(); ++i) dist += std::abs(ub[i] - (ua[i] + v_pert[i]));
    dist *= dx;
    const double xn = stepanov_norm(pert.states[j], 1.0);
    rep.times.push_back(tj);
    rep.l1_equiv.push_back(dist);
    rep.xnorm_pert.push_back(xn);
    rep.max_equiv = std::max(rep.max_equiv, dist);
    if (tj >= 1.0 - 1e-12) rep.min_xnorm_after_1 = std::min(rep.min_xnorm_after_1, xn);
  }

  auto pos_sup = [](const GridFn& g) {
    double mx = 0.0;
    for (double x : g.values())
      if (x > mx) mx = x;
    return mx;
  };
  rep.unpert_pos_initial = pos_sup(base.states.front());
  rep.unpert_pos_final = pos_sup(base.states.back());
  rep.pos_monotone_after_1 = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < base.states.size(); ++j) {
    if (base.times[j] < 1.0 - 1e-12) continue;
    const double ps = pos_sup(base.states[j]);
    if (ps > prev * (1.0 + 1e-12)) rep.pos_monotone_after_1 = false;
    prev = ps;
  }
  rep.equivalence_ok = rep.max_equiv <= 1e-6;
  rep.nondecay_ok = rep.min_xnorm_after_1 >= 0.9 * rep.pert_norm;
  rep.unperturbed_decays =
      rep.pos_monotone_after_1 && rep.unpert_pos_final <= 0.05 * rep.unpert_pos_initial;
  rep.ok = rep.equivalence_ok && rep.nondecay_ok && rep.unperturbed_decays;
  return rep;
}

}  // namespace decaylab
