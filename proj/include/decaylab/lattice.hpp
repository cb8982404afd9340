#pragma once

#include <Eigen/Dense>
#include <vector>

#include "decaylab/grid_fn.hpp"

namespace decaylab {

// Parallelepiped { sum_k c_k e_k : -r/2 <= c_k < r/2 } for edge matrix columns
// e_k scaled by the integer r; centered at the origin, half-open so that the
// r-scaled lattice translates tile space with multiplicity one.
class Parallelepiped {
 public:
  Parallelepiped(Eigen::MatrixXd basis, int r);

  int dim() const { return static_cast<int>(basis_.cols()); }
  int scale() const { return r_; }
  double volume() const;
  bool contains(const Eigen::VectorXd& x) const;

  // 1D convenience: the interval [-r e / 2, r e / 2)
  double interval_lo() const;
  double interval_hi() const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  int r_;
};

// Full-rank lattice spanned by the columns of a square basis matrix.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);
  static Lattice one_dim(double e);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::VectorXd vector(int j) const { return basis_.col(j); }
  double det() const { return det_; }

  // dual lattice { xi : xi . e in Z for all lattice vectors e }, the
  // inverse-transpose basis; every pairwise product of dual and primal basis
  // vectors is validated to be an integer within 1e-9
  Lattice dual() const;

  // x = basis z with z within tol of an integer vector
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

  Parallelepiped fundamental_cell(int r) const;
  double cell_volume(int r) const;  // r^d |det basis|

 private:
  Eigen::MatrixXd basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double det_ = 0.0;
};

// One candidate shift and the discrete L1 mismatch it produces.
struct PeriodCheck {
  double shift = 0.0;
  long cells = 0;
  double l1_diff = 0.0;
  bool is_period = false;
};

struct PeriodGroupReport {
  std::vector<PeriodCheck> basis_checks;      // the claimed periods themselves
  std::vector<PeriodCheck> subperiod_checks;  // proper divisors e/k, k = 2..K
  bool degenerate_constant = false;           // every shift is a period
  // claimed periods hold and no proper divisor is one (trivially true for
  // constants, which the flag calls out)
  bool exact = false;
};

// Checks that the grid data p is invariant under the lattice shifts and under
// none of the proper divisor candidates e/k that land on whole cells,
// certifying that the period group of p on the grid is exactly the lattice.
// p must live on a periodic domain commensurate with the basis vector.
PeriodGroupReport verify_period_group(const GridFn& p, const Lattice& L, double tol,
                                      int max_divisor = 16);

}  // namespace decaylab
