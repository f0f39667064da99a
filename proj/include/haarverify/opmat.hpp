#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "haarverify/haar.hpp"
#include "haarverify/interval_matrix.hpp"

namespace haarverify {

// Truncated operational matrices at level J (size M = 2^(J+1)):
//   H      Haar matrix at the collocation points
//   P      integration matrix, P_{i,l} = <w_i, psi_l>
//   OmegaTilde, Gamma   the two pieces of the Haar transform of products of integrals
struct OpMatrixSet {
  int J = 0;
  std::size_t M = 0;
  IntervalMat H;
  IntervalMat P;
  IntervalMat OmegaTilde;
  IntervalMat Gamma;
};

OpMatrixSet build_opmatrices(int J);

// Products reused by every bound computation at a fixed level.
struct DerivedOperators {
  IntervalMat p_omega;       // P * OmegaTilde, i.e. (OmegaTilde^T P^T)^T
  IntervalVec pt_row_norms;  // Euclidean norms of the rows of P^T
};
DerivedOperators derive_operators(const OpMatrixSet& set);

// P^T c
IntervalVec apply_PT(const OpMatrixSet& set, const IntervalVec& c);
Eigen::VectorXd apply_PT(const OpMatrixSet& set, const Eigen::VectorXd& c);

// Haar coefficients (first M) of the product of the integrals of two finite
// expansions, split into the computable part and a bound on the remainder.
struct QuadTransform {
  IntervalVec finite;
  Interval tail;
};
QuadTransform quad_transform_finite(const OpMatrixSet& set, const IntervalVec& c, const IntervalVec& d);

// Bounds for the integration operator on finite vectors:
//   |P_M^T c| <= growth * |c|,   |tail of P^T c| <= tail * |c|.
struct IntegrationBounds {
  Interval growth;
  Interval tail;
};
IntegrationBounds integration_bounds(int J);

// Norms of the parts beyond M for finite c, d (cn, dn are their norms).
struct FiniteTailBounds {
  Interval integral;  // integral of c
  Interval omega;     // one Omega-type product term
  Interval theta;     // the Theta-type product term
};
FiniteTailBounds finite_tail_bounds(int J, const Interval& cn, const Interval& dn);

// Mixed finite/infinite estimates with the preconditioner A applied.
struct MixedBounds {
  Interval k_omega;  // bounds |A Pi_M H(x^T P Omega P^T y)| / (|x||y|)
  Interval k_theta;  // same with Theta
  std::array<Interval, 4> k_omega_terms;
  std::array<Interval, 4> k_theta_terms;
  Interval integral_tail;  // |(P^T)_{M,inf} y_inf| / |y|
  Interval omega_tail;     // |(OmegaTilde^T P^T)_{M,inf} y_inf| / |y|
  Interval theta_tail;     // |Gamma^T_{inf,M}(a_inf . tail(P^T y))| / |y|, includes |cbar|
};

// Products of the preconditioner with the fixed operators; computed once per (A, J).
struct PreconditionedProducts {
  IntervalMat AP;  // A P^T
  IntervalMat AG;  // A Gamma^T
};
PreconditionedProducts precondition(const OpMatrixSet& set, const IntervalMat& A);

MixedBounds mixed_bounds(const OpMatrixSet& set, const DerivedOperators& ops, const IntervalMat& A,
                         const PreconditionedProducts& pre, const Interval& cbar_norm);
MixedBounds mixed_bounds(const OpMatrixSet& set, const IntervalMat& A, const Interval& cbar_norm);

// Infinite-part bounds of the full quadratic term:
//   |Pi_inf H(c^T w w^T y)| <= linear * |y|,  |Pi_inf H(x^T w w^T y)| <= quadratic * |x||y|.
struct InfiniteTailBounds {
  Interval linear;
  Interval quadratic;
};
InfiniteTailBounds infinite_tail_bounds(int J, const Interval& cbar_norm);

Interval infinite_tail_constant_d1();
Interval infinite_tail_constant_d2();

// Binary cache of operator sets, keyed by J and a format version.
constexpr std::uint32_t kOpCacheVersion = 1;
std::filesystem::path opcache_path(const std::filesystem::path& dir, int J);
void save_opmatrices(const OpMatrixSet& set, const std::filesystem::path& file);
std::optional<OpMatrixSet> load_opmatrices(const std::filesystem::path& file, int J);
// Loads from dir when present, otherwise builds and stores.
OpMatrixSet cached_opmatrices(int J, const std::optional<std::filesystem::path>& dir);

}  // namespace haarverify
