#include "decaylab/grid_fn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

void require_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw ShapeError("GridFn: values must be finite");
}

void append_double(std::string& out, double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

// exact overlap length of [a, b] with [lo, hi]
double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace

GridFn::GridFn(bool periodic, double x_lo, double dx, std::vector<double> values)
    : periodic_(periodic), x_lo_(x_lo), dx_(dx), v_(std::move(values)) {
  if (v_.size() < 2) throw ShapeError("GridFn: need at least 2 cells");
  if (!(dx_ > 0.0) || !std::isfinite(dx_)) throw ShapeError("GridFn: dx must be positive");
  require_finite(v_);
}

GridFn GridFn::periodic(double x_lo, double length, std::vector<double> values) {
  if (!(length > 0.0)) throw ShapeError("GridFn: length must be positive");
  const double dx = length / static_cast<double>(values.size());
  return GridFn(true, x_lo, dx, std::move(values));
}

GridFn GridFn::box(double x_lo, double x_hi, std::vector<double> values) {
  if (!(x_hi > x_lo)) throw ShapeError("GridFn: box must have positive length");
  const double dx = (x_hi - x_lo) / static_cast<double>(values.size());
  return GridFn(false, x_lo, dx, std::move(values));
}

GridFn GridFn::periodic_fill(double x_lo, double length, std::size_t n, double value) {
  return periodic(x_lo, length, std::vector<double>(n, value));
}

GridFn GridFn::box_fill(double x_lo, double x_hi, std::size_t n, double value) {
  return box(x_lo, x_hi, std::vector<double>(n, value));
}

GridFn GridFn::from_function(bool is_periodic, double x_lo, double x_hi, std::size_t n,
                             const std::function<double(double)>& f) {
  const double dx = (x_hi - x_lo) / static_cast<double>(n);
  // Gauss-Legendre 3-point on [-1/2, 1/2]
  const double q = 0.5 * std::sqrt(3.0 / 5.0);
  const double w0 = 4.0 / 9.0, w1 = 5.0 / 18.0;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = x_lo + dx * (static_cast<double>(i) + 0.5);
    v[i] = w0 * f(c) + w1 * (f(c - q * dx) + f(c + q * dx));
  }
  return is_periodic ? periodic(x_lo, x_hi - x_lo, std::move(v))
                     : box(x_lo, x_hi, std::move(v));
}

GridFn GridFn::sine(bool is_periodic, double x_lo, double x_hi, std::size_t n, double mean,
                    double amplitude, double wave_period) {
  if (!(wave_period > 0.0)) throw ShapeError("GridFn::sine: wave_period must be positive");
  const double dx = (x_hi - x_lo) / static_cast<double>(n);
  const double k = 2.0 * M_PI / wave_period;
  // cell average of sin(kx) = (cos(k a) - cos(k b)) / (k dx); boundary cosines
  // are shared between neighbors so the grid sum telescopes
  std::vector<double> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    c[i] = std::cos(k * (x_lo + dx * static_cast<double>(i)));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = mean + amplitude * (c[i] - c[i + 1]) / (k * dx);
  return is_periodic ? periodic(x_lo, x_hi - x_lo, std::move(v))
                     : box(x_lo, x_hi, std::move(v));
}

GridFn GridFn::indicator(bool is_periodic, double x_lo, double x_hi, std::size_t n, double a,
                         double b, double amplitude) {
  if (!(b > a)) throw ShapeError("GridFn::indicator: need a < b");
  const double len = x_hi - x_lo;
  const double dx = len / static_cast<double>(n);
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double clo = x_lo + dx * static_cast<double>(i);
    double frac = overlap(a, b, clo, clo + dx);
    if (is_periodic)  // wrapped copies of [a, b]
      frac += overlap(a - len, b - len, clo, clo + dx) + overlap(a + len, b + len, clo, clo + dx);
    v[i] = amplitude * frac / dx;
  }
  return is_periodic ? periodic(x_lo, len, std::move(v)) : box(x_lo, x_hi, std::move(v));
}

GridFn GridFn::bump(bool is_periodic, double x_lo, double x_hi, std::size_t n, double center,
                    double halfwidth, double amplitude) {
  if (!(halfwidth > 0.0)) throw ShapeError("GridFn::bump: halfwidth must be positive");
  // antiderivative of (1 - s^2)^3: s - s^3 + (3/5) s^5 - s^7 / 7
  auto prim = [](double s) {
    s = std::clamp(s, -1.0, 1.0);
    const double s2 = s * s;
    return s * (1.0 + s2 * (-1.0 + s2 * (0.6 - s2 / 7.0)));
  };
  const double dx = (x_hi - x_lo) / static_cast<double>(n);
  const double len = x_hi - x_lo;
  // on a periodic domain the bump is wrapped: every periodic image of the
  // support that meets the cell contributes
  long k_lo = 0, k_hi = 0;
  if (is_periodic) {
    k_lo = std::lround(std::ceil((x_lo - center - halfwidth) / len));
    k_hi = std::lround(std::floor((x_hi - center + halfwidth) / len));
  }
  std::vector<double> v(n, 0.0);
  for (long k = k_lo; k <= k_hi; ++k) {
    const double c = center + static_cast<double>(k) * len;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = x_lo + dx * static_cast<double>(i);
      const double sa = (a - c) / halfwidth, sb = (a + dx - c) / halfwidth;
      if (sb <= -1.0 || sa >= 1.0) continue;
      v[i] += amplitude * halfwidth * (prim(sb) - prim(sa)) / dx;
    }
  }
  return is_periodic ? periodic(x_lo, len, std::move(v)) : box(x_lo, x_hi, std::move(v));
}

bool GridFn::same_grid(const GridFn& o, double tol) const {
  return periodic_ == o.periodic_ && v_.size() == o.v_.size() &&
         std::abs(x_lo_ - o.x_lo_) <= tol * std::max(1.0, std::abs(x_lo_)) &&
         std::abs(dx_ - o.dx_) <= tol * dx_;
}

double GridFn::mean() const {
  if (!periodic_) throw DomainError("GridFn::mean: periodic domains only; use mean_over_box");
  double s = 0.0;
  for (double x : v_) s += x;
  return s / static_cast<double>(v_.size());
}

double GridFn::mean_over_box() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return s / static_cast<double>(v_.size());
}

double GridFn::integral() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return s * dx_;
}

double GridFn::l1() const {
  double s = 0.0;
  for (double x : v_) s += std::abs(x);
  return s * dx_;
}

double GridFn::linf() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double GridFn::min_value() const { return *std::min_element(v_.begin(), v_.end()); }
double GridFn::max_value() const { return *std::max_element(v_.begin(), v_.end()); }

double GridFn::sample(double x) const {
  const double len = length();
  if (periodic_) {
    double t = std::fmod(x - x_lo_, len);
    if (t < 0.0) t += len;
    std::size_t i = static_cast<std::size_t>(t / dx_);
    if (i >= v_.size()) i = v_.size() - 1;
    return v_[i];
  }
  if (x < x_lo_ - 1e-12 * len || x > x_hi() + 1e-12 * len)
    throw RangeError("GridFn::sample: x outside the box");
  double t = std::clamp(x - x_lo_, 0.0, std::nextafter(len, 0.0));
  std::size_t i = static_cast<std::size_t>(t / dx_);
  if (i >= v_.size()) i = v_.size() - 1;
  return v_[i];
}

GridFn GridFn::shifted_cells(long k) const {
  if (!periodic_) throw DomainError("GridFn::shifted_cells: periodic domains only");
  const long n = static_cast<long>(v_.size());
  std::vector<double> out(v_.size());
  for (long i = 0; i < n; ++i) {
    long j = (i + k) % n;
    if (j < 0) j += n;
    out[static_cast<std::size_t>(i)] = v_[static_cast<std::size_t>(j)];
  }
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

GridFn GridFn::map(const std::function<double(double)>& f) const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = f(v_[i]);
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

GridFn GridFn::operator+(const GridFn& o) const {
  if (!same_grid(o)) throw ShapeError("GridFn: grids do not match");
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] + o.v_[i];
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

GridFn GridFn::operator-(const GridFn& o) const {
  if (!same_grid(o)) throw ShapeError("GridFn: grids do not match");
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] - o.v_[i];
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

GridFn GridFn::operator+(double c) const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] + c;
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

GridFn GridFn::operator*(double s) const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] * s;
  return GridFn(periodic_, x_lo_, dx_, std::move(out));
}

std::string GridFn::to_csv() const {
  std::string out = "x,value\n";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    append_double(out, cell_center(i));
    out.push_back(',');
    append_double(out, v_[i]);
    out.push_back('\n');
  }
  return out;
}

void GridFn::write_binary(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("GridFn::write_binary: cannot open " + path);
  const std::uint64_t n = v_.size();
  const std::uint8_t per = periodic_ ? 1 : 0;
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  f.write(reinterpret_cast<const char*>(&x_lo_), sizeof x_lo_);
  f.write(reinterpret_cast<const char*>(&dx_), sizeof dx_);
  f.write(reinterpret_cast<const char*>(&per), sizeof per);
  f.write(reinterpret_cast<const char*>(v_.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!f) throw ConfigError("GridFn::write_binary: write failed for " + path);
}

GridFn GridFn::read_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("GridFn::read_binary: cannot open " + path);
  std::uint64_t n = 0;
  double x_lo = 0.0, dx = 0.0;
  std::uint8_t per = 0;
  f.read(reinterpret_cast<char*>(&n), sizeof n);
  f.read(reinterpret_cast<char*>(&x_lo), sizeof x_lo);
  f.read(reinterpret_cast<char*>(&dx), sizeof dx);
  f.read(reinterpret_cast<char*>(&per), sizeof per);
  if (!f || n < 2 || n > (1ull << 32))
    throw ConfigError("GridFn::read_binary: malformed header in " + path);
  std::vector<double> v(n);
  f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!f) throw ConfigError("GridFn::read_binary: truncated data in " + path);
  return GridFn(per != 0, x_lo, dx, std::move(v));
}

}  // namespace decaylab
