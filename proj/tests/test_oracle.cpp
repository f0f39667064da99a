#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "haarverify/oracle.hpp"

using namespace haarverify;
using namespace haarverify::oracle;

TEST_CASE("exact P entries") {
  CHECK(integral_P_entry(1, 1) == QuadSurd(mpq_class(1, 2)));
  CHECK(integral_P_entry(1, 2) == QuadSurd(mpq_class(-1, 4)));
  CHECK(integral_P_entry(2, 1) == QuadSurd(mpq_class(1, 4)));
  CHECK(integral_P_entry(2, 2) == QuadSurd(0));
  // <w_3, psi_1> = area of a triangle of height sqrt(2)/4 on [0, 1/2]
  CHECK(integral_P_entry(3, 1) == QuadSurd(0, mpq_class(1, 16)));
  CHECK(integral_P_entry(1, 1).enclose().contains(0.5));
}

TEST_CASE("exact Gamma entries") {
  CHECK(integral_Gamma_entry(1, 1) == QuadSurd(1));
  CHECK(integral_Gamma_entry(2, 1) == QuadSurd(1));
  CHECK(integral_Gamma_entry(2, 3) == QuadSurd(0));
  CHECK(integral_Gamma_entry(3, 2) == QuadSurd(1));
  CHECK(integral_Gamma_entry(3, 3) == QuadSurd(0));
  CHECK(integral_Gamma_entry(5, 3) == QuadSurd(0, 1));
}

TEST_CASE("two piece decompositions agree exactly") {
  for (std::uint64_t i = 1; i <= 32; ++i)
    for (std::uint64_t l = 1; l <= 32; ++l) {
      REQUIRE(integral_P_entry(i, l) == integral_P_entry(i, l, true));
      REQUIRE(integral_Gamma_entry(i, l) == integral_Gamma_entry(i, l, true));
    }
}

TEST_CASE("index guard") {
  CHECK_THROWS(integral_P_entry(0, 1));
  CHECK_THROWS(integral_Gamma_entry(2000, 1));
  CHECK_THROWS(integral_P_entry(1, (1u << 10) + 1));
}

TEST_CASE("surd arithmetic") {
  const QuadSurd r2(0, 1);
  CHECK(r2 * r2 == QuadSurd(2));
  CHECK((QuadSurd(1, 1) - QuadSurd(1)) == r2);
  CHECK(r2.enclose().contains(std::sqrt(2.0)));
  CHECK(QuadSurd(mpq_class(1, 3)).enclose().contains(1.0 / 3.0));
}

TEST_CASE("product transform reference") {
  const int J = 2, Jref = 5;
  const Index M = 8;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(M);
  CHECK(quad_product_transform_reference(zero, zero, Jref).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd e1 = zero;
  e1(0) = 1.0;
  // (sum e1 w)^2 = t^2: <t^2, phi> = 1/3, <t^2, psi_{0,0}> = 1/24 - 7/24
  Eigen::VectorXd t2 = quad_product_transform_reference(e1, e1, Jref);
  CHECK(std::abs(t2(0) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(t2(1) + 0.25) < 1e-15);
  // <t^2, psi_{1,0}> = sqrt2 (int_0^1/4 - int_1/4^1/2) t^2 = sqrt2 (1/192 - 7/192)
  CHECK(std::abs(t2(2) + std::sqrt(2.0) / 32.0) < 1e-15);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(M, [&] { return g(rng); });
  Eigen::VectorXd d = Eigen::VectorXd::NullaryExpr(M, [&] { return g(rng); });
  Eigen::VectorXd cd = quad_product_transform_reference(c, d, Jref);
  CHECK((cd - quad_product_transform_reference(d, c, Jref)).cwiseAbs().maxCoeff() < 1e-14);
  // Refinement only appends coefficients.
  Eigen::VectorXd finer = quad_product_transform_reference(c, d, Jref + 1);
  CHECK((finer.head(cd.size()) - cd).cwiseAbs().maxCoeff() < 1e-12);
  (void)J;
}

TEST_CASE("logistic reference coefficients") {
  CHECK(logistic_reference_coeffs(6.0, 0.0, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(logistic_reference_coeffs(0.0, 0.3, 4).cwiseAbs().maxCoeff() == 0.0);
  const double lambda = 6.0, u0 = 0.2;
  Eigen::VectorXd c = logistic_reference_coeffs(lambda, u0, 6);
  REQUIRE(c.size() == 128);
  // First coefficient is u(1) - u(0).
  CHECK(std::abs(c(0) - static_cast<double>(logistic_solution(lambda, u0, 1.0L) - u0)) < 1e-14);
  Eigen::VectorXd c8 = logistic_reference_coeffs(lambda, u0, 8);
  CHECK((c8.head(128) - c).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(static_cast<double>(logistic_solution(lambda, u0, 0.0L)) - u0) < 1e-18);
}

TEST_CASE("oracle matrices enclose exact entries") {
  const IntervalMat P = oracle_P_matrix(2);
  REQUIRE(P.rows() == 8);
  CHECK(P(0, 0).contains(0.5));
  CHECK(P(0, 1).contains(-0.25));
  const IntervalMat G = oracle_Gamma_matrix(2);
  CHECK(G(1, 0).contains(1.0));
}
