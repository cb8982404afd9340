#include "decaylab/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

double range_scale(double lo, double hi) {
  return std::max({1.0, std::abs(lo), std::abs(hi)});
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : bp_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (bp_.size() < 2 || pieces_.size() + 1 != bp_.size())
    throw ShapeError("PiecewisePoly: need M+1 breakpoints for M >= 1 pieces");
  for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
    if (!(bp_[i] < bp_[i + 1]))
      throw ShapeError("PiecewisePoly: breakpoints must be strictly increasing");

  double scale = 1.0, gap = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double l = pieces_[i].eval(bp_[i + 1]);
    const double r = pieces_[i + 1].eval(bp_[i + 1]);
    gap = std::max(gap, std::abs(l - r));
    scale = std::max({scale, std::abs(l), std::abs(r)});
  }
  continuous_ = gap <= 1e-9 * scale;
}

PiecewisePoly PiecewisePoly::constant(double u_min, double u_max, double value) {
  return single(u_min, u_max, Polynomial::constant(value));
}

PiecewisePoly PiecewisePoly::single(double u_min, double u_max, Polynomial p) {
  return PiecewisePoly({u_min, u_max}, {std::move(p)});
}

int PiecewisePoly::max_degree() const {
  int d = -1;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return d;
}

double PiecewisePoly::max_breakpoint_gap() const {
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    gap = std::max(gap,
                   std::abs(pieces_[i].eval(bp_[i + 1]) - pieces_[i + 1].eval(bp_[i + 1])));
  return gap;
}

std::size_t PiecewisePoly::piece_index(double u) const {
  // piece i covers (b_i, b_{i+1}]; u == u_min falls into piece 0
  const auto it = std::lower_bound(bp_.begin(), bp_.end(), u);
  if (it == bp_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - bp_.begin());
  if (it == bp_.end() || *it != u) --i;        // strictly inside piece i-1..: index of left bp
  else if (i > 0) --i;                          // exactly at a breakpoint: left piece
  return std::min(i, pieces_.size() - 1);
}

double PiecewisePoly::eval(double u) const {
  const double slack = 1e-12 * range_scale(u_min(), u_max());
  if (u < u_min() - slack || u > u_max() + slack)
    throw RangeError("PiecewisePoly::eval: argument outside [u_min, u_max]");
  return pieces_[piece_index(std::clamp(u, u_min(), u_max()))].eval(u);
}

double PiecewisePoly::eval_right(double u) const {
  const double slack = 1e-12 * range_scale(u_min(), u_max());
  if (u < u_min() - slack || u > u_max() + slack)
    throw RangeError("PiecewisePoly::eval_right: argument outside [u_min, u_max]");
  u = std::clamp(u, u_min(), u_max());
  const auto it = std::lower_bound(bp_.begin(), bp_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - bp_.begin());
  if (it == bp_.end() || *it != u) i = (i == 0) ? 0 : i - 1;
  return pieces_[std::min(i, pieces_.size() - 1)].eval(u);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<Polynomial> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) d.push_back(p.derivative());
  return PiecewisePoly(bp_, std::move(d));
}

PiecewisePoly PiecewisePoly::antiderivative(double base) const {
  // raw piece antiderivatives, then chain constants left to right
  std::vector<Polynomial> acc;
  acc.reserve(pieces_.size());
  double carry = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    Polynomial a = pieces_[i].antiderivative();
    const double c = carry - a.eval(bp_[i]);
    acc.push_back(a + Polynomial::constant(c));
    carry = acc.back().eval(bp_[i + 1]);
  }
  PiecewisePoly F(bp_, std::move(acc));
  const double at_base = F.eval(base);
  return at_base == 0.0 ? F : F + (-at_base);
}

double PiecewisePoly::integrate(double a, double b) const {
  if (a == b) return 0.0;
  const PiecewisePoly F = antiderivative(u_min());
  return F.eval(b) - F.eval(a);
}

PiecewisePoly PiecewisePoly::combine(const PiecewisePoly& o, bool product, double sign) const {
  const double tol = 1e-12 * range_scale(u_min(), u_max());
  if (std::abs(u_min() - o.u_min()) > tol || std::abs(u_max() - o.u_max()) > tol)
    throw ShapeError("PiecewisePoly: operands live on different ranges");

  std::vector<double> merged;
  merged.reserve(bp_.size() + o.bp_.size());
  std::merge(bp_.begin(), bp_.end(), o.bp_.begin(), o.bp_.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end(),
                           [tol](double a, double b) { return std::abs(a - b) <= tol; }),
               merged.end());
  merged.front() = u_min();
  merged.back() = u_max();

  std::vector<Polynomial> out;
  out.reserve(merged.size() - 1);
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double mid = 0.5 * (merged[i] + merged[i + 1]);
    const Polynomial& a = pieces_[piece_index(mid)];
    const Polynomial& b = o.pieces_[o.piece_index(std::clamp(mid, o.u_min(), o.u_max()))];
    out.push_back(product ? a * b : a + b * sign);
  }
  return PiecewisePoly(std::move(merged), std::move(out));
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
  return combine(o, false, 1.0);
}
PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const {
  return combine(o, false, -1.0);
}
PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& o) const {
  return combine(o, true, 1.0);
}

PiecewisePoly PiecewisePoly::operator*(double s) const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p * s);
  return PiecewisePoly(bp_, std::move(out));
}

PiecewisePoly PiecewisePoly::operator+(double c) const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p + Polynomial::constant(c));
  return PiecewisePoly(bp_, std::move(out));
}

PiecewisePoly PiecewisePoly::with_breakpoint(double u) const {
  const double tol = 1e-12 * range_scale(u_min(), u_max());
  if (u <= u_min() + tol || u >= u_max() - tol) return *this;
  for (double b : bp_)
    if (std::abs(b - u) <= tol) return *this;
  std::vector<double> nb;
  std::vector<Polynomial> np;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    nb.push_back(bp_[i]);
    np.push_back(pieces_[i]);
    if (bp_[i] < u && u < bp_[i + 1]) {
      nb.push_back(u);
      np.push_back(pieces_[i]);
    }
  }
  nb.push_back(bp_.back());
  return PiecewisePoly(std::move(nb), std::move(np));
}

// keep_sign: 0 -> |f|, +1 -> max(f,0), -1 -> min(f,0)
PiecewisePoly PiecewisePoly::clamped(int keep_sign) const {
  const double tol = 1e-12 * range_scale(u_min(), u_max());
  std::vector<double> nb{bp_.front()};
  std::vector<Polynomial> np;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double l = bp_[i], r = bp_[i + 1];
    std::vector<double> cuts;
    if (!pieces_[i].is_zero() && pieces_[i].degree() >= 1)
      for (double root : real_roots_in(pieces_[i], l, r))
        if (root > l + tol && root < r - tol) cuts.push_back(root);
    cuts.push_back(r);
    double left = l;
    for (double cut : cuts) {
      const double mid = 0.5 * (left + cut);
      const double s = pieces_[i].is_zero() ? 0.0 : pieces_[i].eval(mid);
      Polynomial q;
      if (keep_sign == 0)
        q = (s < 0.0) ? -pieces_[i] : pieces_[i];
      else if (keep_sign > 0)
        q = (s > 0.0) ? pieces_[i] : Polynomial();
      else
        q = (s < 0.0) ? pieces_[i] : Polynomial();
      nb.push_back(cut);
      np.push_back(std::move(q));
      left = cut;
    }
  }
  return PiecewisePoly(std::move(nb), std::move(np));
}

PiecewisePoly PiecewisePoly::abs() const { return clamped(0); }
PiecewisePoly PiecewisePoly::positive_part() const { return clamped(+1); }
PiecewisePoly PiecewisePoly::negative_part() const { return clamped(-1); }

double PiecewisePoly::min_on(double a, double b) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double l = std::max(a, bp_[i]), r = std::min(b, bp_[i + 1]);
    if (l > r) continue;
    best = std::min(best, decaylab::min_on(pieces_[i], l, r));
  }
  if (!std::isfinite(best)) throw DomainError("min_on: empty interval");
  return best;
}

double PiecewisePoly::max_on(double a, double b) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double l = std::max(a, bp_[i]), r = std::min(b, bp_[i + 1]);
    if (l > r) continue;
    best = std::max(best, decaylab::max_on(pieces_[i], l, r));
  }
  if (!std::isfinite(best)) throw DomainError("max_on: empty interval");
  return best;
}

double PiecewisePoly::max_abs_on(double a, double b) const {
  return std::max(std::abs(min_on(a, b)), std::abs(max_on(a, b)));
}

void validate_max_degree(const PiecewisePoly& f, int max_degree) {
  if (f.max_degree() > max_degree)
    throw ShapeError("piecewise polynomial exceeds the configured degree bound");
}

std::string to_json_string(const PiecewisePoly& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    nlohmann::json e;
    e["breakpoint"] = f.breakpoints()[i];
    e["coeffs"] = f.piece(i).coeffs();
    entries.push_back(std::move(e));
  }
  entries.push_back({{"breakpoint", f.breakpoints().back()}});
  return entries.dump();
}

PiecewisePoly piecewise_from_json(const std::string& text) {
  nlohmann::json entries;
  try {
    entries = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("piecewise_from_json: ") + e.what());
  }
  if (!entries.is_array() || entries.size() < 2)
    throw ConfigError("piecewise_from_json: expected an array with at least two entries");
  std::vector<double> bps;
  std::vector<Polynomial> polys;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!e.contains("breakpoint"))
      throw ConfigError("piecewise_from_json: entry without breakpoint");
    bps.push_back(e["breakpoint"].get<double>());
    if (i + 1 < entries.size()) {
      if (!e.contains("coeffs"))
        throw ConfigError("piecewise_from_json: interior entry without coeffs");
      polys.emplace_back(e["coeffs"].get<std::vector<double>>());
    }
  }
  return PiecewisePoly(std::move(bps), std::move(polys));
}

}  // namespace decaylab
