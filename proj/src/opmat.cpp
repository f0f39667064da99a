#include "haarverify/opmat.hpp"

#include <bit>
#include <stdexcept>

namespace haarverify {

OpMatrixSet build_opmatrices(int J) {
  const std::size_t M = order_for_level(J);
  const Index n = static_cast<Index>(M);
  OpMatrixSet set;
  set.J = J;
  set.M = M;
  set.P = IntervalMat(n, n);
  set.OmegaTilde = IntervalMat(n, n);
  set.Gamma = IntervalMat(n, n);
  set.P.set(0, 0, Interval(0.5));
  set.Gamma.set(0, 0, Interval(1.0));

  // Doubling m -> 2m only fills the two off-diagonal blocks; the leading
  // m x m block already holds the order-m matrix.
  for (std::size_t m = 1; m < M; m *= 2) {
    const Index k = static_cast<Index>(m);
    const int j = std::countr_zero(m);
    IntervalMat h = haar_matrix_of_order(m);
    IntervalMat ht = h.transpose();
    const Interval scale = pow2_half(-4 - 3 * j);  // 1 / (4 m^{3/2})
    set.P.set_block(0, k, (-scale) * h);
    set.P.set_block(k, 0, scale * ht);
    set.OmegaTilde.set_block(0, k, h);
    set.Gamma.set_block(k, 0, ht);
  }
  set.H = haar_matrix_of_order(M);
  return set;
}

DerivedOperators derive_operators(const OpMatrixSet& set) {
  DerivedOperators ops;
  ops.p_omega = product(set.P, false, set.OmegaTilde, false);
  ops.pt_row_norms = row_norms2(set.P, true);
  return ops;
}

IntervalVec apply_PT(const OpMatrixSet& set, const IntervalVec& c) {
  if (c.size() != set.M) throw DimensionMismatch("coefficient length differs from M");
  return apply(set.P, c, true);
}

Eigen::VectorXd apply_PT(const OpMatrixSet& set, const Eigen::VectorXd& c) {
  if (static_cast<std::size_t>(c.size()) != set.M) throw DimensionMismatch("coefficient length differs from M");
  return set.P.mid().transpose() * c;
}

namespace {

Interval four_minus_sqrt2() { return Interval(4.0) - sqrt2(); }

Interval norm_of(const IntervalMat& m) { return mat_norm2_upper(m); }

}  // namespace

QuadTransform quad_transform_finite(const OpMatrixSet& set, const IntervalVec& c, const IntervalVec& d) {
  IntervalVec a = apply_PT(set, c);
  IntervalVec b = apply_PT(set, d);
  IntervalVec oa = apply(set.OmegaTilde, a, true);
  IntervalVec ob = apply(set.OmegaTilde, b, true);
  IntervalVec g = apply(set.Gamma, hadamard(a, b), true);
  QuadTransform out;
  out.finite = hadamard(oa, b) + hadamard(ob, a) + g;
  out.tail = sqrt2() * vec_norm2(c) * vec_norm2(d) / (four_minus_sqrt2() * pow2_half(3 * set.J + 6));
  return out;
}

IntegrationBounds integration_bounds(int J) {
  Interval inv_sqrt3 = Interval(1.0) / sqrt(Interval(3.0));
  IntegrationBounds b;
  b.growth = inv_sqrt3 * sqrt(Interval(4.0) - pow2(-(2 * J + 2)));
  b.tail = inv_sqrt3 / pow2(J + 1);
  return b;
}

FiniteTailBounds finite_tail_bounds(int J, const Interval& cn, const Interval& dn) {
  Interval sqrt3 = sqrt(Interval(3.0));
  FiniteTailBounds b;
  b.integral = cn / (sqrt3 * pow2(J + 2));
  b.omega = cn * dn / (sqrt3 * pow2(2 * J + 4));
  b.theta = cn * dn / (Interval(21.0) * sqrt(Interval(7.0)) * pow2(3 * J + 6));
  return b;
}

PreconditionedProducts precondition(const OpMatrixSet& set, const IntervalMat& A) {
  PreconditionedProducts pre;
  pre.AP = product(A, false, set.P, true);
  pre.AG = product(A, false, set.Gamma, true);
  return pre;
}

MixedBounds mixed_bounds(const OpMatrixSet& set, const DerivedOperators& ops, const IntervalMat& A,
                         const PreconditionedProducts& pre, const Interval& cbar_norm) {
  const int J = set.J;
  const Interval one_plus_sqrt2 = Interval(1.0) + sqrt2();
  const Interval normA = norm_of(A);
  MixedBounds b;

  // A signed sum cannot be bounded by pulling out a bound on one factor, so each
  // weighted term goes through entrywise magnitudes. The plain norm product is
  // also valid where only one factor carries a coordinate bound; take the smaller.
  const IntervalMat absA = magnitude(A);
  const IntervalMat absAG = magnitude(pre.AG);
  const IntervalMat absPO = magnitude(ops.p_omega);
  const IntervalMat absP = magnitude(set.P);
  const Interval normPO = norm_of(ops.p_omega);
  const Interval normP = norm_of(set.P);
  const Interval normAG = norm_of(pre.AG);
  auto smaller = [](const Interval& a, const Interval& b) { return a.hi() <= b.hi() ? a : b; };

  b.k_omega_terms[0] = norm_of(product(scale_cols(absA, ops.pt_row_norms), false, absPO, true));
  b.k_omega_terms[1] = smaller(norm_of(product(absA, false, absPO, true)), normA * normPO) / pow2(J + 2);
  b.k_omega_terms[2] = one_plus_sqrt2 * smaller(norm_of(product(absA, false, absP, true)), normA * normP) /
                       pow2_half(J + 3);
  b.k_omega_terms[3] = one_plus_sqrt2 * normA / pow2_half(3 * J + 7);

  b.k_theta_terms[0] = norm_of(product(scale_cols(absAG, ops.pt_row_norms), false, absP, true));
  b.k_theta_terms[1] = smaller(norm_of(product(absAG, false, absP, true)), normAG * normP) / pow2(J + 1);
  b.k_theta_terms[2] = normAG / pow2(2 * J + 4);
  b.k_theta_terms[3] = sqrt2() * normA / (four_minus_sqrt2() * pow2_half(3 * J + 8));

  b.k_omega = b.k_omega_terms[0] + b.k_omega_terms[1] + b.k_omega_terms[2] + b.k_omega_terms[3];
  b.k_theta = b.k_theta_terms[0] + b.k_theta_terms[1] + b.k_theta_terms[2] + b.k_theta_terms[3];

  b.integral_tail = Interval(1.0) / pow2(J + 2);
  b.omega_tail = one_plus_sqrt2 / pow2_half(J + 3);
  b.theta_tail = sqrt2() * cbar_norm / (four_minus_sqrt2() * pow2_half(3 * J + 6));
  return b;
}

MixedBounds mixed_bounds(const OpMatrixSet& set, const IntervalMat& A, const Interval& cbar_norm) {
  DerivedOperators ops = derive_operators(set);
  PreconditionedProducts pre = precondition(set, A);
  return mixed_bounds(set, ops, A, pre, cbar_norm);
}

Interval infinite_tail_constant_d1() {
  Interval s2 = sqrt2();
  Interval inner = Interval(3.0) + s2 / 4.0 + Interval(4.0) / four_minus_sqrt2();
  return inner / (Interval(8.0) * sqrt(Interval(7.0)));
}

Interval infinite_tail_constant_d2() {
  return (Interval(8.0) + Interval(6.0) * sqrt2()) / (sqrt(Interval(7.0)) * four_minus_sqrt2());
}

InfiniteTailBounds infinite_tail_bounds(int J, const Interval& cbar_norm) {
  InfiniteTailBounds b;
  b.linear = infinite_tail_constant_d1() * cbar_norm / pow2_half(3 * J);
  b.quadratic = infinite_tail_constant_d2() / pow2_half(3 * J + 4);
  return b;
}

}  // namespace haarverify
