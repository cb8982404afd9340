#include "decaylab/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

void validate_model(const ModelSpec& m) {
  if (m.dim < 1) throw ShapeError("ModelSpec: dimension must be >= 1");
  if (m.flux.size() != static_cast<std::size_t>(m.dim))
    throw ShapeError("ModelSpec: need one flux component per dimension");
  if (!(m.u_min < m.u_max)) throw ShapeError("ModelSpec: empty state range");
  const double tol = 1e-12 * std::max({1.0, std::abs(m.u_min), std::abs(m.u_max)});
  auto check_range = [&](const PiecewisePoly& f, const char* what) {
    if (std::abs(f.u_min() - m.u_min) > tol || std::abs(f.u_max() - m.u_max) > tol)
      throw ShapeError(std::string("ModelSpec: ") + what + " not defined on the state range");
  };
  for (const auto& f : m.flux) {
    check_range(f, "flux component");
    if (!f.continuous()) throw ShapeError("ModelSpec: flux must be continuous");
  }
  check_range(m.diff_primitive, "diffusion primitive");
  if (!m.diff_primitive.continuous())
    throw ShapeError("ModelSpec: diffusion primitive A must be continuous");

  const PiecewisePoly a = m.diff_primitive.derivative();
  for (std::size_t i = 0; i < a.piece_count(); ++i) {
    const double lo = a.breakpoints()[i], hi = a.breakpoints()[i + 1];
    if (min_on(a.piece(i), lo, hi) < -1e-12)
      throw ShapeError("ModelSpec: diffusivity a = A' must be nonnegative");
  }
}

namespace {

PiecewisePoly positive_part_of_u(double lo, double hi) {
  // max(u, 0) spelled out so the kink is an exact breakpoint
  if (hi <= 0.0) return PiecewisePoly::constant(lo, hi, 0.0);
  if (lo >= 0.0) return PiecewisePoly::single(lo, hi, Polynomial({0.0, 1.0}));
  return PiecewisePoly({lo, 0.0, hi}, {Polynomial(), Polynomial({0.0, 1.0})});
}

}  // namespace

ModelSpec preset_model(const std::string& name, double u_min, double u_max) {
  ModelSpec m;
  m.name = name;
  m.u_min = u_min;
  m.u_max = u_max;
  m.dim = 1;
  if (name == "burgers") {
    m.flux = {PiecewisePoly::single(u_min, u_max, Polynomial({0.0, 0.0, 0.5}))};
    m.diff_primitive = PiecewisePoly::constant(u_min, u_max, 0.0);
  } else if (name == "stefan") {
    m.flux = {PiecewisePoly::constant(u_min, u_max, 0.0)};
    m.diff_primitive = positive_part_of_u(u_min, u_max);
  } else if (name == "affine") {
    m.flux = {PiecewisePoly::single(u_min, u_max, Polynomial({0.0, 1.0}))};
    m.diff_primitive = PiecewisePoly::constant(u_min, u_max, 0.0);
  } else {
    throw ConfigError("preset_model: unknown preset '" + name + "'");
  }
  validate_model(m);
  return m;
}

ModelSpec preset_model(const std::string& name) { return preset_model(name, -1.0, 1.0); }

FSet::FSet(double u_min, double u_max, std::vector<Interval> components, bool upper_bound_only)
    : u_min_(u_min), u_max_(u_max), upper_bound_(upper_bound_only) {
  if (!(u_min_ < u_max_)) throw ShapeError("FSet: empty state range");
  for (auto& c : components) {
    if (!(c.lo <= c.hi)) throw ShapeError("FSet: component with lo > hi");
    if (c.lo < u_min_ - 1e-12 || c.hi > u_max_ + 1e-12)
      throw ShapeError("FSet: component outside the state range");
  }
  std::sort(components.begin(), components.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& c : components) {
    if (!comps_.empty() && c.lo <= comps_.back().hi) {
      comps_.back().hi = std::max(comps_.back().hi, c.hi);  // touching closed sets merge
    } else {
      comps_.push_back(c);
    }
  }
}

bool FSet::contains(double m) const {
  for (const auto& c : comps_)
    if (c.lo <= m && m <= c.hi) return true;
  return false;
}

bool FSet::interior_point(double m) const {
  for (const auto& c : comps_)
    if (c.lo < m && m < c.hi) return true;
  return false;
}

std::string FSet::describe() const {
  if (comps_.empty()) return "empty";
  auto num = [](double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
  };
  std::string out;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (i) out += " u ";
    if (comps_[i].lo == comps_[i].hi)
      out += "{" + num(comps_[i].lo) + "}";
    else
      out += "[" + num(comps_[i].lo) + ", " + num(comps_[i].hi) + "]";
  }
  return out;
}

namespace {

// collect maximal runs of pieces selected by `pick`, merging neighbors only
// when `joins` says the shared breakpoint does not interrupt the run
template <class Pick, class Joins>
std::vector<Interval> piece_runs(const PiecewisePoly& f, Pick pick, Joins joins) {
  std::vector<Interval> out;
  const auto& bp = f.breakpoints();
  std::size_t i = 0;
  while (i < f.piece_count()) {
    if (!pick(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < f.piece_count() && pick(j + 1) && joins(j)) ++j;
    out.push_back({bp[i], bp[j + 1]});
    i = j + 1;
  }
  return out;
}

}  // namespace

std::vector<Interval> affine_intervals(const PiecewisePoly& f) {
  auto slope = [&](std::size_t i) {
    const auto& c = f.piece(i).coeffs();
    return c.size() >= 2 ? c[1] : 0.0;
  };
  return piece_runs(
      f, [&](std::size_t i) { return f.piece_is_affine(i); },
      [&](std::size_t i) {
        // identical slope and an exactly matching value across the breakpoint
        const double b = f.breakpoints()[i + 1];
        return slope(i) == slope(i + 1) && f.piece(i).eval(b) == f.piece(i + 1).eval(b);
      });
}

std::vector<Interval> zero_intervals(const PiecewisePoly& f) {
  return piece_runs(
      f, [&](std::size_t i) { return f.piece_is_zero(i); }, [](std::size_t) { return true; });
}

namespace {

// open intervals where the directional flux is affine and the diffusivity
// vanishes identically: pairwise intersections of the two families
void degenerate_intervals(const PiecewisePoly& directional_flux, const PiecewisePoly& a,
                          std::vector<Interval>& out) {
  const auto aff = affine_intervals(directional_flux);
  const auto zer = zero_intervals(a);
  for (const auto& x : aff)
    for (const auto& y : zer) {
      const double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
}

// complement of a union of open intervals in [u_min, u_max].  Open intervals
// that merely touch do not merge, so the shared endpoint survives in the
// complement as a singleton.  An interval reaching a range edge absorbs that
// edge: the range is a window onto state space, not a wall.
FSet complement_of_open(double u_min, double u_max, std::vector<Interval> open,
                        bool upper_bound) {
  std::sort(open.begin(), open.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (const auto& c : open) {
    if (!(c.lo < c.hi)) continue;
    if (!merged.empty() && c.lo < merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, c.hi);
    else
      merged.push_back(c);
  }
  std::vector<Interval> comps;
  double cursor = u_min;
  for (const auto& c : merged) {
    if (cursor < c.lo)
      comps.push_back({cursor, c.lo});
    else if (cursor == c.lo && cursor != u_min)
      comps.push_back({cursor, cursor});  // interior junction of touching intervals
    // cursor == c.lo == u_min: the interval starts at the range edge and swallows it
    cursor = c.hi;
  }
  if (cursor < u_max) comps.push_back({cursor, u_max});
  // cursor == u_max: the last interval ran into the range edge and swallowed it
  return FSet(u_min, u_max, std::move(comps), upper_bound);
}

}  // namespace

FSet compute_F(const ModelSpec& m) {
  validate_model(m);
  if (m.dim != 1) throw ConfigError("compute_F: the direction-free form is 1D only");
  // any nonzero scalar direction gives the same set: affinity survives
  // scaling and a xi^2 = 0 iff a = 0
  std::vector<Interval> degen;
  degenerate_intervals(m.flux[0], m.diff_primitive.derivative(), degen);
  return complement_of_open(m.u_min, m.u_max, std::move(degen), false);
}

FSet compute_F(const ModelSpec& m, const std::vector<std::vector<double>>& xi_list) {
  validate_model(m);
  if (xi_list.empty())
    throw ConfigError("compute_F: a nonempty direction list is required in several dimensions");
  std::vector<Interval> degen;
  const PiecewisePoly a = m.diff_primitive.derivative();
  for (const auto& xi : xi_list) {
    if (xi.size() != static_cast<std::size_t>(m.dim))
      throw ConfigError("compute_F: direction dimension mismatch");
    double norm2 = 0.0;
    for (double c : xi) norm2 += c * c;
    if (norm2 == 0.0) throw ConfigError("compute_F: zero direction");
    PiecewisePoly dir = m.flux[0] * xi[0];
    for (std::size_t j = 1; j < xi.size(); ++j) dir = dir + m.flux[j] * xi[j];
    degenerate_intervals(dir, a, degen);
  }
  // finitely many directions can only overestimate F
  return complement_of_open(m.u_min, m.u_max, std::move(degen), m.dim > 1);
}

bool check_nd_condition(const FSet& F, double m) {
  if (!(F.u_min() < m && m < F.u_max()))
    throw RangeError("check_nd_condition: m must be interior to the state range");
  return F.interior_point(m);
}

bool check_gn_condition(const FSet& F, double m) {
  if (m < F.u_min() || m > F.u_max())
    throw RangeError("check_gn_condition: m outside the state range");
  return F.contains(m);
}

DecayClass classify_decay(const FSet& F, double m) {
  if (check_nd_condition(F, m)) return DecayClass::Guaranteed;
  if (check_gn_condition(F, m)) return DecayClass::PeriodicOnly;
  return DecayClass::NoGuarantee;
}

const char* decay_class_name(DecayClass c) {
  switch (c) {
    case DecayClass::Guaranteed: return "decay guaranteed";
    case DecayClass::PeriodicOnly: return "periodic-only decay";
    default: return "no guarantee";
  }
}

}  // namespace decaylab
