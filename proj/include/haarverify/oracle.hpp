#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Dense>

#include "haarverify/haar.hpp"
#include "haarverify/interval.hpp"
#include "haarverify/interval_matrix.hpp"

// Reference values computed independently of the recursive constructions:
// exact integrals of piecewise polynomials with dyadic breakpoints, and
// closed-form Haar coefficients of the logistic solution.
namespace haarverify::oracle {

// Exact number a + b*sqrt(2) with rational a, b.
struct QuadSurd {
  mpq_class rational{0};
  mpq_class surd{0};

  QuadSurd() = default;
  QuadSurd(mpq_class a, mpq_class b = 0) : rational(std::move(a)), surd(std::move(b)) {}

  Interval enclose() const;
  std::string str() const;
};

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y);
QuadSurd operator-(const QuadSurd& x, const QuadSurd& y);
QuadSurd operator*(const QuadSurd& x, const QuadSurd& y);
bool operator==(const QuadSurd& x, const QuadSurd& y);

// Polynomial in t on [lo, hi), coefficients of 1, t, t^2, ...
struct Piece {
  mpq_class lo, hi;
  std::vector<QuadSurd> coeff;
};
using PiecewisePoly = std::vector<Piece>;

PiecewisePoly wavelet_poly(const WaveletIndex& idx);
PiecewisePoly integral_poly(const WaveletIndex& idx);
PiecewisePoly multiply(const PiecewisePoly& f, const PiecewisePoly& g);
// Integral over [0,1]. With split_pieces each piece is halved first, a second
// decomposition of the same integral.
QuadSurd integrate(const PiecewisePoly& f, bool split_pieces = false);

// <w_i, psi_l> and <psi_i^2, psi_l>, one-based indices up to kMaxOracleIndex.
constexpr std::uint64_t kMaxOracleIndex = 1024;
QuadSurd integral_P_entry(std::uint64_t i, std::uint64_t l, bool split_pieces = false);
QuadSurd integral_Gamma_entry(std::uint64_t i, std::uint64_t l, bool split_pieces = false);

IntervalMat oracle_P_matrix(int J);
IntervalMat oracle_Gamma_matrix(int J);

// First 2^(J_ref+1) Haar coefficients of (sum c_i w_i)(sum d_i w_i), by exact
// Simpson quadrature on the cells of width 2^-(J_ref+1).
Eigen::VectorXd quad_product_transform_reference(const Eigen::VectorXd& c, const Eigen::VectorXd& d, int J_ref);

// Haar coefficients of the derivative of the logistic solution
// u = u0 e^{lt} / (1 - u0 + u0 e^{lt}), length 2^(J_ref+1).
Eigen::VectorXd logistic_reference_coeffs(double lambda, double u0, int J_ref);
long double logistic_solution(double lambda, double u0, long double t);

}  // namespace haarverify::oracle
