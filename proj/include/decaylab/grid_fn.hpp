#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace decaylab {

// One-dimensional grid function storing per-cell averages on a uniform grid.
// The domain is either a periodic cell [x_lo, x_lo + length) or a finite box
// [x_lo, x_hi].  Cell i covers [x_lo + i dx, x_lo + (i+1) dx); values are
// averages over that cell, which keeps conservation sums exact in the solver.
class GridFn {
 public:
  static GridFn periodic(double x_lo, double length, std::vector<double> values);
  static GridFn box(double x_lo, double x_hi, std::vector<double> values);
  static GridFn periodic_fill(double x_lo, double length, std::size_t n, double value = 0.0);
  static GridFn box_fill(double x_lo, double x_hi, std::size_t n, double value = 0.0);

  // cell averages of a callable, 3-point Gauss-Legendre per cell
  static GridFn from_function(bool is_periodic, double x_lo, double x_hi, std::size_t n,
                              const std::function<double(double)>& f);
  // mean + amplitude * sin(2 pi x / wave_period) as exact cell averages
  // (antiderivative differences), so the grid mean equals `mean` exactly
  // whenever the domain is a whole number of waves
  static GridFn sine(bool is_periodic, double x_lo, double x_hi, std::size_t n, double mean,
                     double amplitude, double wave_period);
  // amplitude on [a, b], 0 elsewhere, cells weighted by exact overlap; on a
  // periodic domain the interval is wrapped into the cell
  static GridFn indicator(bool is_periodic, double x_lo, double x_hi, std::size_t n, double a,
                          double b, double amplitude);
  // amplitude * (1 - s^2)^3 with s = (x - center)/halfwidth on |s| < 1, else 0,
  // as exact cell averages
  static GridFn bump(bool is_periodic, double x_lo, double x_hi, std::size_t n, double center,
                     double halfwidth, double amplitude);

  std::size_t n() const { return v_.size(); }
  double dx() const { return dx_; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_lo_ + dx_ * static_cast<double>(v_.size()); }
  double length() const { return x_hi() - x_lo_; }
  bool is_periodic() const { return periodic_; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  double& at(std::size_t i) { return v_[i]; }
  double cell_center(std::size_t i) const {
    return x_lo_ + dx_ * (static_cast<double>(i) + 0.5);
  }

  bool same_grid(const GridFn& o, double tol = 1e-12) const;

  // mean over the periodic cell; box domains must use mean_over_box
  double mean() const;
  double mean_over_box() const;
  double integral() const;  // sum * dx
  double l1() const;        // sum |v| * dx
  double linf() const;
  double min_value() const;
  double max_value() const;

  // value of the piecewise-constant representative at x (wraps on periodic
  // domains, throws RangeError outside a box)
  double sample(double x) const;

  GridFn shifted_cells(long k) const;  // cyclic shift, periodic only
  GridFn map(const std::function<double(double)>& f) const;

  GridFn operator+(const GridFn& o) const;
  GridFn operator-(const GridFn& o) const;
  GridFn operator+(double c) const;
  GridFn operator*(double s) const;

  std::string to_csv() const;  // header "x,value", one row per cell center
  // compact layout: u64 cell count, f64 x_lo, f64 dx, u8 periodic flag,
  // then the values as f64, all little-endian
  void write_binary(const std::string& path) const;
  static GridFn read_binary(const std::string& path);

 private:
  GridFn(bool periodic, double x_lo, double dx, std::vector<double> values);

  bool periodic_ = false;
  double x_lo_ = 0.0;
  double dx_ = 0.0;
  std::vector<double> v_;
};

}  // namespace decaylab
