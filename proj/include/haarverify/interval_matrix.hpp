#pragma once

#include <Eigen/Dense>
#include <vector>

#include "haarverify/interval.hpp"

namespace haarverify {

using Index = Eigen::Index;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using IntervalVec = std::vector<Interval>;

IntervalVec to_interval_vec(const Eigen::VectorXd& v);
Eigen::VectorXd midpoints(const IntervalVec& v);
IntervalVec operator+(const IntervalVec& a, const IntervalVec& b);
IntervalVec operator-(const IntervalVec& a, const IntervalVec& b);
IntervalVec operator*(const Interval& s, const IntervalVec& v);
IntervalVec hadamard(const IntervalVec& a, const IntervalVec& b);
Interval vec_norm2(const IntervalVec& v);
Interval vec_norm2(const Eigen::VectorXd& v);
bool contains(const IntervalVec& enclosure, const Eigen::VectorXd& v);

// Dense interval matrix kept in midpoint-radius form. A matrix whose radius
// is all zero stores no radius block at all; products then skip the
// corresponding rounding-error gemm.
class IntervalMat {
 public:
  IntervalMat() = default;
  IntervalMat(Index rows, Index cols);
  explicit IntervalMat(Eigen::MatrixXd mid);
  IntervalMat(Eigen::MatrixXd mid, Eigen::MatrixXd rad);
  static IntervalMat identity(Index n);

  Index rows() const { return mid_.rows(); }
  Index cols() const { return mid_.cols(); }

  Interval operator()(Index i, Index j) const;
  void set(Index i, Index j, const Interval& x);

  const Eigen::MatrixXd& mid() const { return mid_; }
  bool has_radius() const { return rad_.size() != 0; }
  // Radius block; empty when the matrix holds exact points only.
  const Eigen::MatrixXd& rad() const { return rad_; }
  double max_radius() const;

  IntervalMat transpose() const;
  IntervalMat block(Index r, Index c, Index nr, Index nc) const;
  void set_block(Index r, Index c, const IntervalMat& b);

  IntervalMat& operator+=(const IntervalMat& o);
  IntervalMat& operator-=(const IntervalMat& o);
  // this += s * x
  IntervalMat& add_scaled(const Interval& s, const IntervalMat& x);

 private:
  void ensure_radius();
  Eigen::MatrixXd mid_;
  Eigen::MatrixXd rad_;
};

IntervalMat operator+(IntervalMat a, const IntervalMat& b);
IntervalMat operator-(IntervalMat a, const IntervalMat& b);
IntervalMat operator*(const Interval& s, const IntervalMat& a);

// op(A) * op(B) where op transposes when the flag is set. The midpoint
// product is a plain floating-point gemm in any summation order; the radius adds an a-priori bound on its
// rounding error, so the result encloses every product of enclosed matrices.
IntervalMat product(const IntervalMat& a, bool trans_a, const IntervalMat& b, bool trans_b);
IntervalMat operator*(const IntervalMat& a, const IntervalMat& b);
IntervalVec apply(const IntervalMat& a, const IntervalVec& x, bool transpose = false);
IntervalVec operator*(const IntervalMat& a, const IntervalVec& x);

IntervalMat scale_rows(const IntervalVec& d, const IntervalMat& a);  // diag(d) A
IntervalMat scale_cols(const IntervalMat& a, const IntervalVec& d);  // A diag(d)
// Point matrix of upper bounds on |a_ij|.
IntervalMat magnitude(const IntervalMat& a);

Interval norm1(const IntervalMat& a);
Interval norm_inf(const IntervalMat& a);
// [0, u] with u bounding the spectral norm of every matrix in the enclosure:
// the smaller of sqrt(|A|_1 |A|_inf) and a Cholesky-certified bound on the
// largest eigenvalue of mid^T mid (plus the radius part).
Interval mat_norm2_upper(const IntervalMat& a);
// Euclidean norms of the rows of op(A).
IntervalVec row_norms2(const IntervalMat& a, bool transpose = false);

}  // namespace haarverify
