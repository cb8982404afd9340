#include "decaylab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decaylab/errors.hpp"

namespace decaylab {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

double Polynomial::eval(double u) const {
  double acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * u + c_[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return Polynomial();
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (o * -1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial();
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r = c_;
  for (double& x : r) x *= s;
  return Polynomial(std::move(r));
}

namespace {

// One Newton polish step; keeps the root inside [lo, hi].
double polish(const Polynomial& p, const Polynomial& dp, double x, double lo, double hi) {
  for (int it = 0; it < 2; ++it) {
    const double d = dp.eval(x);
    if (d == 0.0) break;
    const double nx = x - p.eval(x) / d;
    if (!(nx >= lo && nx <= hi)) break;
    x = nx;
  }
  return x;
}

void roots_quadratic(double a, double b, double c, std::vector<double>& out) {
  // a u^2 + b u + c, a != 0; numerically stable splitting
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  if (q != 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(0.0);  // b == 0 and disc == 0 -> double root at 0
    out.push_back(0.0);
  }
}

void roots_cubic(double a, double b, double c, double d, std::vector<double>& out) {
  // normalize to u^3 + B u^2 + C u + D, substitute u = t - B/3
  const double B = b / a, C = c / a, D = d / a;
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const double shift = -B / 3.0;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  if (disc >= 0.0) {
    // three real roots (possibly repeated): trigonometric form
    if (p >= 0.0) {
      // p >= 0 with disc >= 0 forces p == q == 0: triple root
      out.push_back(shift);
      return;
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      out.push_back(shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    // one real root: Cardano
    const double h = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double t = std::cbrt(-q / 2.0 + h) + std::cbrt(-q / 2.0 - h);
    out.push_back(shift + t);
  }
}

}  // namespace

std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi, double merge_tol) {
  if (p.is_zero())
    throw DomainError("real_roots_in: polynomial is identically zero on the interval");
  const auto& c = p.coeffs();
  std::vector<double> raw;
  switch (p.degree()) {
    case 0:
      break;
    case 1:
      raw.push_back(-c[0] / c[1]);
      break;
    case 2:
      roots_quadratic(c[2], c[1], c[0], raw);
      break;
    case 3:
      roots_cubic(c[3], c[2], c[1], c[0], raw);
      break;
    default:
      throw DomainError("real_roots_in: closed-form root solving is limited to degree 3");
  }
  const Polynomial dp = p.derivative();
  const double span = hi - lo;
  const double edge = merge_tol * std::max(1.0, std::abs(lo) + std::abs(hi));
  std::vector<double> out;
  for (double r : raw) {
    if (r < lo - edge || r > hi + edge) continue;
    r = std::clamp(polish(p, dp, r, lo - edge, hi + edge), lo, hi);
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  const double merge = merge_tol * std::max(1.0, span);
  std::vector<double> dedup;
  for (double r : out)
    if (dedup.empty() || r - dedup.back() > merge) dedup.push_back(r);
  return dedup;
}

double min_on(const Polynomial& p, double lo, double hi) {
  double best = std::min(p.eval(lo), p.eval(hi));
  const Polynomial dp = p.derivative();
  if (!dp.is_zero() && dp.degree() >= 1)
    for (double r : real_roots_in(dp, lo, hi)) best = std::min(best, p.eval(r));
  return best;
}

double max_on(const Polynomial& p, double lo, double hi) {
  double best = std::max(p.eval(lo), p.eval(hi));
  const Polynomial dp = p.derivative();
  if (!dp.is_zero() && dp.degree() >= 1)
    for (double r : real_roots_in(dp, lo, hi)) best = std::max(best, p.eval(r));
  return best;
}

double max_abs_on(const Polynomial& p, double lo, double hi) {
  return std::max(std::abs(min_on(p, lo, hi)), std::abs(max_on(p, lo, hi)));
}

}  // namespace decaylab
