#include "decaylab/lattice.hpp"

#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

void require_square(const Eigen::MatrixXd& b, const char* who) {
  if (b.rows() == 0 || b.rows() != b.cols())
    throw ShapeError(std::string(who) + ": basis must be square and nonempty");
  if (!b.allFinite()) throw ShapeError(std::string(who) + ": basis entries must be finite");
}

// determinant of the basis with unit-normalized columns; the conditioning
// guard that rejects nearly dependent bases before they poison membership
// tests
double scaled_det(const Eigen::MatrixXd& b) {
  Eigen::MatrixXd s = b;
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    const double norm = s.col(j).norm();
    if (norm <= 0.0) return 0.0;
    s.col(j) /= norm;
  }
  return s.determinant();
}

}  // namespace

Parallelepiped::Parallelepiped(Eigen::MatrixXd basis, int r)
    : basis_(std::move(basis)), r_(r) {
  require_square(basis_, "Parallelepiped");
  if (r_ < 1) throw ShapeError("Parallelepiped: scale must be a positive integer");
  lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(basis_);
}

double Parallelepiped::volume() const {
  return std::pow(static_cast<double>(r_), dim()) * std::abs(basis_.determinant());
}

bool Parallelepiped::contains(const Eigen::VectorXd& x) const {
  if (x.size() != basis_.rows()) throw ShapeError("Parallelepiped: dimension mismatch");
  const Eigen::VectorXd c = lu_.solve(x) / static_cast<double>(r_);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c[i] < -0.5 || c[i] >= 0.5) return false;
  return true;
}

double Parallelepiped::interval_lo() const {
  if (dim() != 1) throw DomainError("Parallelepiped: interval accessors are 1D only");
  return -0.5 * static_cast<double>(r_) * std::abs(basis_(0, 0));
}

double Parallelepiped::interval_hi() const { return -interval_lo(); }

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  require_square(basis_, "Lattice");
  if (std::abs(scaled_det(basis_)) <= 1e-12)
    throw DegeneracyError("Lattice: basis is singular or nearly dependent");
  lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(basis_);
  det_ = basis_.determinant();
}

Lattice Lattice::one_dim(double e) {
  Eigen::MatrixXd b(1, 1);
  b(0, 0) = e;
  return Lattice(std::move(b));
}

Lattice Lattice::dual() const {
  const Eigen::MatrixXd d = basis_.inverse().transpose();
  // pairing: every dual basis vector against every primal one must be integral
  const Eigen::MatrixXd pairing = d.transpose() * basis_;
  for (Eigen::Index i = 0; i < pairing.rows(); ++i)
    for (Eigen::Index j = 0; j < pairing.cols(); ++j)
      if (std::abs(pairing(i, j) - std::round(pairing(i, j))) > 1e-9)
        throw DegeneracyError("Lattice::dual: pairing failed the integrality check");
  return Lattice(d);
}

bool Lattice::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != basis_.rows()) throw ShapeError("Lattice::contains: dimension mismatch");
  const Eigen::VectorXd z = lu_.solve(x);
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z[i] - std::round(z[i])) > tol) return false;
  return true;
}

Parallelepiped Lattice::fundamental_cell(int r) const {
  if (r < 1) throw ShapeError("Lattice::fundamental_cell: r must be >= 1");
  return Parallelepiped(basis_, r);
}

double Lattice::cell_volume(int r) const {
  if (r < 1) throw ShapeError("Lattice::cell_volume: r must be >= 1");
  return std::pow(static_cast<double>(r), dim()) * std::abs(det_);
}

namespace {

// cyclic L1 difference between p shifted by `cells` and p itself
double shift_l1_diff(const GridFn& p, long cells) {
  const long n = static_cast<long>(p.n());
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    long j = (i + cells) % n;
    if (j < 0) j += n;
    s += std::abs(p[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(i)]);
  }
  return s * p.dx();
}

}  // namespace

PeriodGroupReport verify_period_group(const GridFn& p, const Lattice& L, double tol,
                                      int max_divisor) {
  if (!p.is_periodic())
    throw DomainError("verify_period_group: grid data must live on a periodic domain");
  if (L.dim() != 1)
    throw DomainError("verify_period_group: grid data is 1D, so the lattice must be too");
  const double e = std::abs(L.basis()(0, 0));
  const double ratio = e / p.dx();
  const long cells = std::lround(ratio);
  if (cells < 1 || std::abs(ratio - static_cast<double>(cells)) > 1e-9 * ratio)
    throw CommensurabilityError(
        "verify_period_group: basis vector is not a whole number of cells");

  PeriodGroupReport rep;
  rep.degenerate_constant = (p.max_value() - p.min_value()) <= tol;

  PeriodCheck base;
  base.shift = e;
  base.cells = cells;
  base.l1_diff = shift_l1_diff(p, cells);
  base.is_period = base.l1_diff <= tol;
  rep.basis_checks.push_back(base);

  bool no_smaller = true;
  for (int k = 2; k <= max_divisor; ++k) {
    if (cells % k != 0) continue;  // candidate must land on whole cells
    PeriodCheck c;
    c.cells = cells / k;
    c.shift = e / static_cast<double>(k);
    c.l1_diff = shift_l1_diff(p, c.cells);
    c.is_period = c.l1_diff <= tol;
    if (c.is_period) no_smaller = false;
    rep.subperiod_checks.push_back(c);
  }
  rep.exact = base.is_period && (no_smaller || rep.degenerate_constant);
  return rep;
}

}  // namespace decaylab
