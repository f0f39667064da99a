#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "haarverify/oracle.hpp"
#include "haarverify/problems.hpp"

using namespace haarverify;

namespace {

Eigen::VectorXd randn(std::mt19937_64& rng, Index n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  return Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
}

// Largest entry error of the Jacobian against central differences, relative to the largest entry.
double jacobian_fd_error(const ProblemSpec& spec, int J, std::uint64_t seed) {
  const OpMatrixSet set = build_opmatrices(J);
  CollocationSystem sys(spec, set);
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd c = randn(rng, sys.size(), 0.5);
  const Eigen::MatrixXd Jc = sys.jacobian(c);
  Eigen::MatrixXd fd(sys.size(), sys.size());
  for (Index j = 0; j < sys.size(); ++j) {
    const double step = 1e-7 * (1.0 + std::abs(c(j)));
    Eigen::VectorXd cp = c, cm = c;
    cp(j) += step;
    cm(j) -= step;
    fd.col(j) = (sys.residual(cp) - sys.residual(cm)) / (2.0 * step);
  }
  return (Jc - fd).cwiseAbs().maxCoeff() / Jc.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ProblemSpec(Logistic{NAN, 0.2}), InvalidProblem);
  CHECK_THROWS_AS(ProblemSpec(Lorenz{-1.0}), InvalidProblem);
  CHECK(ProblemSpec(Lorenz{}).channels() == 3);
  CHECK(ProblemSpec(ForcedLogistic{}).name() == "forced-logistic");
}

TEST_CASE("residual at zero and the degenerate rate") {
  const OpMatrixSet set = build_opmatrices(3);
  const Index M = static_cast<Index>(set.M);
  const double lambda = 6.0, u0 = 0.2;
  CollocationSystem sys(ProblemSpec(Logistic{lambda, u0}), set);
  // only the constant term survives; (1/M) H applied to a constant is a multiple of e1
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(M);
  expect(0) = lambda * (u0 * u0 - u0);
  CHECK((sys.residual(Eigen::VectorXd::Zero(M)) - expect).norm() < 1e-15);

  CollocationSystem flat(ProblemSpec(Logistic{0.0, 0.7}), set);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd c = randn(rng, M, 1.0);
  CHECK((flat.residual(c) - c).norm() == 0.0);
  CHECK_THROWS_AS(sys.residual(Eigen::VectorXd::Zero(M + 1)), DimensionMismatch);
}

TEST_CASE("Jacobian at zero") {
  const OpMatrixSet set = build_opmatrices(3);
  const Index M = static_cast<Index>(set.M);
  const double lambda = 6.0, u0 = 0.2;
  CollocationSystem sys(ProblemSpec(Logistic{lambda, u0}), set);
  const Eigen::MatrixXd expect =
      Eigen::MatrixXd::Identity(M, M) + lambda * (2 * u0 - 1) * set.P.mid().transpose();
  CHECK((sys.jacobian(Eigen::VectorXd::Zero(M)) - expect).cwiseAbs().maxCoeff() < 1e-14);

  const Lorenz l;
  CollocationSystem lz(ProblemSpec(l), set);
  const Eigen::MatrixXd D = lz.jacobian(Eigen::VectorXd::Zero(3 * M));
  const Eigen::MatrixXd PT = set.P.mid().transpose(), I = Eigen::MatrixXd::Identity(M, M);
  CHECK((D.block(0, 0, M, M) - (I + l.sigma * PT)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((D.block(0, M, M, M) + l.sigma * PT).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((D.block(M, M, M, M) - (I + PT)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((D.block(2 * M, 2 * M, M, M) - (I + l.beta * PT)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Jacobian against central differences, J = 2..4") {
  for (int J = 2; J <= 4; ++J) {
    CHECK(jacobian_fd_error(ProblemSpec(Logistic{}), J, 10 + J) <= 1e-6);
    CHECK(jacobian_fd_error(ProblemSpec(ForcedLogistic{}), J, 20 + J) <= 1e-6);
    CHECK(jacobian_fd_error(ProblemSpec(Lorenz{}), J, 30 + J) <= 1e-6);
  }
}

TEST_CASE("forcing has coefficients (1/2, 1/2, 0, ...)") {
  for (std::size_t M : {2u, 8u, 64u}) {
    const Eigen::VectorXd g = forcing_coeffs(M);
    CHECK(g(0) == 0.5);
    CHECK(g(1) == 0.5);
    CHECK(g.tail(static_cast<Index>(M) - 2).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Newton on the logistic equation") {
  const double lambda = 6.0, u0 = 0.2;
  const ProblemSpec spec(Logistic{lambda, u0});
  const OpMatrixSet set = build_opmatrices(6);
  const SolveResult sol = newton_solve(spec, set);
  CHECK(sol.residual <= 1e-12);
  CHECK(sol.iterations <= 20);
  const std::vector<double> t = collocation_points(set.M);
  const Eigen::MatrixXd u = reconstruct_solution(spec, sol.cbar, t);
  double err = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q)
    err = std::max(err, std::abs(u(static_cast<Index>(q), 0) -
                                 static_cast<double>(oracle::logistic_solution(lambda, u0, t[q]))));
  CHECK(err <= 2e-2);
  // A is the inverse of the Jacobian at the solution
  CollocationSystem sys(spec, set);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(set.M, set.M);
  CHECK((sol.A * sys.jacobian(sol.cbar) - I).norm() < 1e-10);
  // quadratic convergence near the root, loosely
  const auto& h = sol.residual_history;
  REQUIRE(h.size() >= 3);
  for (std::size_t k = 1; k + 1 < h.size(); ++k)
    if (h[k] < 1e-2 && h[k + 1] > 1e-13) CHECK(h[k + 1] <= 10.0 * h[k] * h[k]);

  const SolveResult flat = newton_solve(ProblemSpec(Logistic{0.0, 0.4}), set);
  CHECK(flat.cbar.norm() == 0.0);
}

TEST_CASE("Newton failure modes") {
  const OpMatrixSet set = build_opmatrices(2);
  NewtonOptions opts;
  opts.max_iter = 0;
  CHECK_THROWS_AS(newton_solve(ProblemSpec(Logistic{}), set, opts), NoConvergence);
  CHECK_THROWS_AS(newton_solve(ProblemSpec(Logistic{}), set, Eigen::VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("block inverse matches the full inverse") {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd m = randn(rng, 36, 1.0).reshaped(6, 6);
  m += 4.0 * Eigen::MatrixXd::Identity(6, 6);
  CHECK((block_inverse(m, 3) - m.inverse()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(block_inverse(m, 0));
  const OpMatrixSet set = build_opmatrices(4);
  NewtonOptions opts;
  opts.inverse = InverseMethod::kBlock;
  const SolveResult a = newton_solve(ProblemSpec(Logistic{}), set, opts);
  const SolveResult b = newton_solve(ProblemSpec(Logistic{}), set);
  CHECK((a.A - b.A).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Lorenz warm start from a coarser level") {
  const Lorenz l;
  const ProblemSpec spec(l);
  const SolveResult coarse = newton_solve(spec, build_opmatrices(6), lorenz_initial_guess(l, 6));
  const Eigen::VectorXd start = prolong(coarse.cbar, 3, 6, 8);
  CHECK(start.size() == 3 * 512);
  CHECK(start.segment(512, 128) == coarse.cbar.segment(128, 128));
  const SolveResult fine = newton_solve(spec, build_opmatrices(8), start);
  CHECK(fine.residual <= 1e-12);
  CHECK_THROWS(prolong(coarse.cbar, 3, 6, 5));
}

TEST_CASE("reconstruction") {
  const ProblemSpec spec(Logistic{6.0, 0.3});
  const std::vector<double> t = {0.0, 0.1, 0.37, 0.5, 1.0};
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(16);
  const Eigen::MatrixXd u0 = reconstruct_solution(spec, zero, t);
  CHECK((u0.array() == 0.3).all());
  Eigen::VectorXd e1 = zero;
  e1(0) = 1.0;
  const Eigen::MatrixXd u1 = reconstruct_solution(spec, e1, t);
  for (std::size_t q = 0; q < t.size(); ++q) CHECK(u1(static_cast<Index>(q), 0) == doctest::Approx(0.3 + t[q]));
  CHECK_THROWS_AS(reconstruct_solution(spec, zero, {1.5}), std::domain_error);

  // Continuity across cell edges for the forced problem.
  const ProblemSpec forced(ForcedLogistic{});
  const SolveResult sol = newton_solve(forced, build_opmatrices(5));
  const double e = 1.0 / 64.0, eps = 1e-9;
  for (int k = 1; k < 64; ++k) {
    const Eigen::MatrixXd v = reconstruct_solution(forced, sol.cbar, {k * e - eps, k * e + eps});
    CHECK(std::abs(v(0, 0) - v(1, 0)) < 1e-6);
  }
  const Eigen::MatrixXd at0 = reconstruct_solution(forced, sol.cbar, {0.0});
  CHECK(at0(0, 0) == 0.2);
}
