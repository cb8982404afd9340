#include "decaylab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decaylab/errors.hpp"

namespace decaylab {

double bump_profile(double x, double center, double halfwidth) {
  const double s = (x - center) / halfwidth;
  if (!(std::abs(s) < 1.0)) return 0.0;
  const double w = 1.0 - s * s;
  return w * w * w;
}

namespace {

// flattened piecewise-polynomial evaluator for the inner loops; clamps to the
// state range so the 1e-8 monotonicity slack cannot trip a range error
struct FastPW {
  std::vector<double> bp;
  std::vector<double> coef;       // concatenated, ascending powers
  std::vector<std::size_t> off;   // coef span of piece p is [off[p], off[p+1])
  double lo = 0.0, hi = 0.0;

  static FastPW build(const PiecewisePoly& f) {
    FastPW r;
    r.bp = f.breakpoints();
    r.lo = f.u_min();
    r.hi = f.u_max();
    r.off.push_back(0);
    for (std::size_t p = 0; p < f.piece_count(); ++p) {
      const auto& c = f.piece(p).coeffs();
      r.coef.insert(r.coef.end(), c.begin(), c.end());
      r.off.push_back(r.coef.size());
    }
    return r;
  }

  double eval(double u) const {
    if (u <= lo)
      u = lo;
    else if (u >= hi)
      u = hi;
    std::size_t p = 0;
    const std::size_t last = off.size() - 2;
    while (p < last && u > bp[p + 1]) ++p;
    double r = 0.0;
    for (std::size_t j = off[p + 1]; j > off[p];) r = r * u + coef[--j];
    return r;
  }
};

struct Runtime {
  double dx = 0.0;
  double lip_phi = 0.0;  // max |phi'| over the data range
  double max_a = 0.0;    // max A' over the data range
  bool has_flux = false;
  bool has_diff = false;
  ConvectionFlux flux = ConvectionFlux::EngquistOsher;
  FastPW A;
  FastPW fplus, fminus;  // Engquist-Osher split antiderivatives
  FastPW phi;            // Lax-Friedrichs central part

  double face_flux(double ul, double ur) const {
    if (flux == ConvectionFlux::EngquistOsher) return fplus.eval(ul) + fminus.eval(ur);
    return 0.5 * (phi.eval(ul) + phi.eval(ur)) - 0.5 * lip_phi * (ur - ul);
  }

  double stable_dt(double cfl) const {
    const double denom = lip_phi / dx + 2.0 * max_a / (dx * dx);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return cfl / denom;
  }
};

Runtime make_runtime(const ModelSpec& m, const GridFn& u0, ConvectionFlux flux) {
  validate_model(m);
  if (m.dim != 1) throw ConfigError("solver: one space dimension only");
  if (!u0.is_periodic()) throw DomainError("solver: periodic domains only");
  const double scale = std::max({1.0, std::abs(m.u_min), std::abs(m.u_max)});
  const double lo = u0.min_value(), hi = u0.max_value();
  if (lo < m.u_min - 1e-12 * scale || hi > m.u_max + 1e-12 * scale)
    throw RangeError("solver: initial data leaves the model's state range");

  Runtime r;
  r.dx = u0.dx();
  r.flux = flux;
  const double clo = std::max(lo, m.u_min), chi = std::min(hi, m.u_max);
  const PiecewisePoly dphi = m.flux[0].derivative();
  r.lip_phi = dphi.max_abs_on(clo, chi);
  r.max_a = std::max(0.0, m.diff_primitive.derivative().max_on(clo, chi));
  r.has_flux = r.lip_phi > 0.0;
  r.has_diff = r.max_a > 0.0;
  r.A = FastPW::build(m.diff_primitive);
  if (r.has_flux) {
    if (flux == ConvectionFlux::EngquistOsher) {
      const double phi_lo = m.flux[0].eval(m.u_min);
      r.fplus = FastPW::build(dphi.positive_part().antiderivative(m.u_min) + phi_lo);
      r.fminus = FastPW::build(dphi.negative_part().antiderivative(m.u_min));
    } else {
      r.phi = FastPW::build(m.flux[0]);
    }
  }
  return r;
}

// one explicit update; `faces` and `av` are scratch of size n
void update_cells(const Runtime& r, const std::vector<double>& u, double dt,
                  std::vector<double>& faces, std::vector<double>& av,
                  std::vector<double>& out, double& mn, double& mx) {
  const std::size_t n = u.size();
  const double lam = dt / r.dx;
  const double mu = dt / (r.dx * r.dx);
  if (r.has_flux) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = i + 1 < n ? i + 1 : 0;
      faces[i] = r.face_flux(u[i], u[ip]);  // face between cells i and i+1
    }
  }
  if (r.has_diff)
    for (std::size_t i = 0; i < n; ++i) av[i] = r.A.eval(u[i]);

  mn = std::numeric_limits<double>::infinity();
  mx = -mn;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = i > 0 ? i - 1 : n - 1;
    const std::size_t ip = i + 1 < n ? i + 1 : 0;
    double v = u[i];
    if (r.has_flux) v -= lam * (faces[i] - faces[im]);
    if (r.has_diff) v += mu * (av[ip] - 2.0 * av[i] + av[im]);
    out[i] = v;
    if (v < mn) mn = v;
    if (v > mx) mx = v;
  }
}

// per-probe accumulation state: sparse test-function stencils plus the bump
// weight at the previous step boundary
struct ProbeState {
  EntropyProbe p;
  double ak = 0.0;                                  // A(k)
  std::vector<std::pair<std::size_t, double>> sx;   // (i, X_i), X_i != 0
  std::vector<std::pair<std::size_t, double>> sdx;  // (i, X_{i+1} - X_i)
  std::vector<std::pair<std::size_t, double>> sddx; // (i, X_{i+1} - 2X_i + X_{i-1})
  double t_prev = 0.0;  // bump weight at the previous step boundary
  double acc = 0.0;

  double time_weight(double t) const {
    return bump_profile(t, 0.5 * (p.t0 + p.t1), 0.5 * (p.t1 - p.t0));
  }
};

ProbeState make_probe(const EntropyProbe& p, const GridFn& u0, const Runtime& r,
                      const ModelSpec& m, double t_end) {
  if (!(p.t0 >= 0.0 && p.t1 > p.t0 && p.t1 <= t_end))
    throw ConfigError("entropy probe: time window must satisfy 0 <= t0 < t1 <= t_end");
  if (!(p.x1 > p.x0 && p.x1 - p.x0 <= u0.length()))
    throw ConfigError("entropy probe: space window must fit in the domain");
  if (p.k < m.u_min - 1e-12 || p.k > m.u_max + 1e-12)
    throw ConfigError("entropy probe: k outside the state range");

  ProbeState ps;
  ps.p = p;
  ps.ak = r.A.eval(p.k);
  const GridFn X = GridFn::bump(true, u0.x_lo(), u0.x_hi(), u0.n(), 0.5 * (p.x0 + p.x1),
                                0.5 * (p.x1 - p.x0), 1.0);
  const auto& x = X.values();
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = i + 1 < n ? i + 1 : 0;
    const std::size_t im = i > 0 ? i - 1 : n - 1;
    if (x[i] != 0.0) ps.sx.push_back({i, x[i]});
    const double dxv = x[ip] - x[i];
    if (dxv != 0.0) ps.sdx.push_back({i, dxv});
    const double ddxv = x[ip] - 2.0 * x[i] + x[im];
    if (ddxv != 0.0) ps.sddx.push_back({i, ddxv});
  }
  return ps;
}

// contribution of the step taken from time t with size dt (dt = 0 flushes the
// final boundary term): the time-difference term uses the state at t; the
// flux and diffusion terms use the scheme's own interface flux, so the
// accumulated total is a sum of pointwise monotonicity residuals
void probe_feed(ProbeState& ps, const Runtime& r, const std::vector<double>& u, double t,
                double dt) {
  const double tw = ps.time_weight(t);
  if (tw != 0.0 || ps.t_prev != 0.0) {
    double s = 0.0;
    for (const auto& [i, w] : ps.sx) s += std::abs(u[i] - ps.p.k) * w;
    ps.acc += (tw - ps.t_prev) * s * r.dx;
  }
  ps.t_prev = tw;
  if (tw == 0.0 || dt == 0.0) return;

  const std::size_t n = u.size();
  double conv = 0.0;
  if (r.has_flux) {
    const double k = ps.p.k;
    for (const auto& [i, w] : ps.sdx) {
      const std::size_t ip = i + 1 < n ? i + 1 : 0;
      const double gi = r.face_flux(std::max(u[i], k), std::max(u[ip], k)) -
                        r.face_flux(std::min(u[i], k), std::min(u[ip], k));
      conv += gi * w;
    }
  }
  double diff = 0.0;
  if (r.has_diff) {
    for (const auto& [i, w] : ps.sddx) diff += std::abs(r.A.eval(u[i]) - ps.ak) * w;
  }
  ps.acc += dt * tw * (conv / r.dx + diff / (r.dx * r.dx)) * r.dx;
}

std::vector<double> sample_instants(const SolverConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw ConfigError("solver: t_end must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ConfigError("solver: cfl must lie in (0, 1]");
  std::vector<double> ts = cfg.output_times;
  for (double t : ts)
    if (!(t >= 0.0 && t <= cfg.t_end))
      throw ConfigError("solver: output times must lie within [0, t_end]");
  ts.push_back(0.0);
  ts.push_back(cfg.t_end);
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t > out.back() + 1e-12 * std::max(1.0, cfg.t_end)) out.push_back(t);
  return out;
}

}  // namespace

double cfl_dt(const ModelSpec& m, const GridFn& u, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl_dt: cfl must lie in (0, 1]");
  return make_runtime(m, u, ConvectionFlux::EngquistOsher).stable_dt(cfl);
}

GridFn step(const GridFn& u, const ModelSpec& m, double dt, ConvectionFlux flux) {
  const Runtime r = make_runtime(m, u, flux);
  if (!(dt > 0.0)) throw CflError("step: dt must be positive");
  if (dt > r.stable_dt(1.0) * (1.0 + 1e-12))
    throw CflError("step: dt exceeds the stable explicit step");
  const std::size_t n = u.n();
  std::vector<double> faces(n), av(n), out(n);
  double mn, mx;
  update_cells(r, u.values(), dt, faces, av, out, mn, mx);
  return GridFn::periodic(u.x_lo(), u.length(), std::move(out));
}

Trajectory evolve(const GridFn& u0, const ModelSpec& m, const SolverConfig& cfg) {
  const Runtime r = make_runtime(m, u0, cfg.flux);
  const std::vector<double> samples = sample_instants(cfg);

  Trajectory tr;
  tr.model = m;
  tr.flux = cfg.flux;

  const std::size_t n = u0.n();
  std::vector<double> u = u0.values();
  std::vector<double> unew(n), faces(n), av(n);

  InvariantLog& log = tr.invariants;
  log.initial_min = u0.min_value();
  log.initial_max = u0.max_value();
  log.initial_integral = u0.integral();

  std::vector<ProbeState> probes;
  probes.reserve(cfg.probes.size());
  for (const auto& p : cfg.probes) probes.push_back(make_probe(p, u0, r, m, cfg.t_end));

  auto record_sample = [&](double t, const std::vector<double>& vals) {
    GridFn g = GridFn::periodic(u0.x_lo(), u0.length(), vals);
    const double integ = g.integral();
    log.sample_integrals.push_back(integ);
    log.sample_mins.push_back(g.min_value());
    log.sample_maxs.push_back(g.max_value());
    log.max_conservation_drift =
        std::max(log.max_conservation_drift, std::abs(integ - log.initial_integral));
    tr.times.push_back(t);
    tr.states.push_back(std::move(g));
  };
  auto record_dense = [&](double t, const std::vector<double>& vals) {
    if (!cfg.store_all_steps) return;
    tr.dense_times.push_back(t);
    tr.dense_states.push_back(GridFn::periodic(u0.x_lo(), u0.length(), vals));
  };

  record_sample(0.0, u);
  record_dense(0.0, u);

  double dt_stable = r.stable_dt(cfg.cfl);
  if (cfg.dt_override > 0.0) {
    if (cfg.dt_override > r.stable_dt(1.0) * (1.0 + 1e-12))
      throw CflError("evolve: dt_override exceeds the stable step");
    dt_stable = cfg.dt_override;
  }
  double t = 0.0;
  std::size_t si = 1;  // next sample instant
  std::size_t steps = 0;
  while (si < samples.size()) {
    const double target = samples[si];
    const double remaining = target - t;
    double dt;
    bool hits_target;
    if (dt_stable >= remaining) {
      dt = remaining;
      hits_target = true;
    } else {
      dt = dt_stable;
      hits_target = false;
    }

    for (auto& ps : probes) probe_feed(ps, r, u, t, dt);

    double mn, mx;
    update_cells(r, u, dt, faces, av, unew, mn, mx);
    u.swap(unew);
    ++steps;
    if (!tr.dt_runs.empty() && tr.dt_runs.back().dt == dt)
      ++tr.dt_runs.back().count;
    else
      tr.dt_runs.push_back({dt, 1});

    const double under = log.initial_min - mn, over = mx - log.initial_max;
    if (under > log.worst_min_violation) log.worst_min_violation = under;
    if (over > log.worst_max_violation) log.worst_max_violation = over;
    if (under > 1e-8 || over > 1e-8)
      throw MonotonicityAlarm("evolve: state escaped the initial bounds by " +
                              std::to_string(std::max(under, over)) + " at step " +
                              std::to_string(steps));

    t = hits_target ? target : t + dt;
    record_dense(t, u);
    if (hits_target) {
      record_sample(t, u);
      ++si;
    }
  }

  for (auto& ps : probes) probe_feed(ps, r, u, cfg.t_end, 0.0);  // closing boundary term
  for (const auto& ps : probes)
    tr.entropy.push_back(
        {ps.p, ps.acc, (ps.p.t1 - ps.p.t0) * (ps.p.x1 - ps.p.x0)});
  return tr;
}

EntropyReport entropy_residual(const Trajectory& tr, const std::vector<double>& k_list,
                               const std::vector<std::function<double(double, double)>>& fns) {
  if (tr.dense_times.size() < 2)
    throw ContractError("entropy_residual: needs a trajectory recorded with store_all_steps");
  const GridFn& g0 = tr.dense_states.front();
  const Runtime r = make_runtime(tr.model, g0, tr.flux);
  const std::size_t n = g0.n();
  const std::size_t nt = tr.dense_times.size();
  const double dx = g0.dx();

  std::vector<double> centers(n);
  for (std::size_t i = 0; i < n; ++i) centers[i] = g0.cell_center(i);

  EntropyReport rep;
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (double k : k_list) {
    if (k < tr.model.u_min - 1e-12 || k > tr.model.u_max + 1e-12)
      throw RangeError("entropy_residual: k outside the state range");
    const double ak = r.A.eval(k);
    for (std::size_t fi = 0; fi < fns.size(); ++fi) {
      const auto& f = fns[fi];
      double acc = 0.0;
      std::vector<double> prev(n, 0.0), row(n);
      for (std::size_t m2 = 0; m2 < nt; ++m2) {
        const double tm = tr.dense_times[m2];
        const auto& u = tr.dense_states[m2].values();
        for (std::size_t i = 0; i < n; ++i) {
          row[i] = f(tm, centers[i]);
          if (row[i] < 0.0)
            throw ContractError("entropy_residual: test function must be nonnegative");
        }
        if (m2 + 1 == nt) {
          for (std::size_t i = 0; i < n; ++i)
            if (row[i] != 0.0)
              throw ContractError(
                  "entropy_residual: test function must vanish by the last recorded instant");
        }
        double s_eta = 0.0;
        for (std::size_t i = 0; i < n; ++i) s_eta += std::abs(u[i] - k) * (row[i] - prev[i]);
        acc += s_eta * dx;
        if (m2 + 1 < nt) {
          const double dt = tr.dense_times[m2 + 1] - tm;
          double conv = 0.0, diff = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ip = i + 1 < n ? i + 1 : 0;
            const double dfx = row[ip] - row[i];
            if (r.has_flux && dfx != 0.0) {
              conv += (r.face_flux(std::max(u[i], k), std::max(u[ip], k)) -
                       r.face_flux(std::min(u[i], k), std::min(u[ip], k))) *
                      dfx;
            }
            if (r.has_diff) {
              const std::size_t im = i > 0 ? i - 1 : n - 1;
              const double ddf = row[ip] - 2.0 * row[i] + row[im];
              if (ddf != 0.0) diff += std::abs(r.A.eval(u[i]) - ak) * ddf;
            }
          }
          acc += dt * (conv / dx + diff / (dx * dx)) * dx;
        }
        prev.swap(row);
      }
      EntropyResult res;
      res.probe.k = k;
      res.probe.t0 = tr.dense_times.front();
      res.probe.t1 = tr.dense_times.back();
      res.probe.x0 = g0.x_lo();
      res.probe.x1 = g0.x_hi();
      res.residual = acc;
      res.support_measure = (res.probe.t1 - res.probe.t0) * g0.length();
      rep.results.push_back(res);
      rep.min_residual = std::min(rep.min_residual, acc);
    }
  }
  if (rep.results.empty()) rep.min_residual = 0.0;
  return rep;
}

ComparisonReport compare(const Trajectory& a, const Trajectory& b) {
  if (a.states.empty() || b.states.empty()) throw ShapeError("compare: empty trajectory");
  if (!a.states.front().same_grid(b.states.front()))
    throw ShapeError("compare: trajectories live on different grids");
  if (a.times.size() != b.times.size()) throw ShapeError("compare: sample counts differ");
  for (std::size_t j = 0; j < a.times.size(); ++j)
    if (std::abs(a.times[j] - b.times[j]) > 1e-12 * std::max(1.0, std::abs(a.times[j])))
      throw ShapeError("compare: sample instants differ");

  ComparisonReport rep;
  const double dx = a.states.front().dx();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    const auto& ua = a.states[j].values();
    const auto& ub = b.states[j].values();
    double viol = -std::numeric_limits<double>::infinity();
    double dist = 0.0;
    for (std::size_t i = 0; i < ua.size(); ++i) {
      viol = std::max(viol, ua[i] - ub[i]);
      dist += std::abs(ua[i] - ub[i]);
    }
    rep.l1_distance.push_back(dist * dx);
    if (j == 0) rep.initial_ordered = viol <= 1e-12;
    worst = std::max(worst, viol);
  }
  rep.max_order_violation = std::max(0.0, worst);
  rep.order_preserved = rep.initial_ordered && worst <= 1e-12;
  rep.l1_nonincreasing = true;
  for (std::size_t j = 1; j < rep.l1_distance.size(); ++j) {
    const double growth = rep.l1_distance[j] - rep.l1_distance[j - 1];
    rep.max_l1_growth = std::max(rep.max_l1_growth, growth);
    if (rep.l1_distance[j] > rep.l1_distance[j - 1] * (1.0 + 1e-12) + 1e-15)
      rep.l1_nonincreasing = false;
  }
  return rep;
}

}  // namespace decaylab
