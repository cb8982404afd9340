#pragma once

#include <vector>

namespace decaylab {

// Dense polynomial in the monomial basis: p(u) = c[0] + c[1] u + ... .
// Trailing zero coefficients are trimmed on construction, so degree() is
// exact for inputs with exactly-representable coefficients.  All arithmetic
// is coefficient-level; sums and products of exact zeros stay exact zeros,
// which the interval classifiers (affine / identically zero) rely on.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  static Polynomial constant(double c);

  const std::vector<double>& coeffs() const { return c_; }
  // degree of the zero polynomial is reported as -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_affine() const { return c_.size() <= 2; }

  double eval(double u) const;  // Horner

  Polynomial derivative() const;
  Polynomial antiderivative() const;  // constant term 0

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }

 private:
  std::vector<double> c_;
};

// Real roots of p inside the closed interval [lo, hi], ascending and deduped
// within merge_tol.  Closed-form (degree <= 3 after trimming); higher degree
// throws DomainError.  A polynomial that is identically zero also throws:
// callers must handle the degenerate piece themselves.
std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi,
                                  double merge_tol = 1e-12);

// Extrema of p over [lo, hi] via critical points (needs p' of degree <= 3).
double min_on(const Polynomial& p, double lo, double hi);
double max_on(const Polynomial& p, double lo, double hi);
double max_abs_on(const Polynomial& p, double lo, double hi);

}  // namespace decaylab
