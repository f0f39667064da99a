#include <cmath>
#include <sstream>

#include "haarverify/haar.hpp"
#include "haarverify/problems.hpp"

namespace haarverify {

namespace {

constexpr double kMinRcond = 1e-15;

Eigen::MatrixXd invert(const Eigen::MatrixXd& df, InverseMethod method) {
  if (method == InverseMethod::kBlock && df.rows() >= 2) return block_inverse(df, df.rows() / 2);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(df);
  if (!(lu.rcond() > kMinRcond)) throw SingularJacobian("Jacobian is numerically singular");
  return lu.inverse();
}

}  // namespace

Eigen::MatrixXd block_inverse(const Eigen::MatrixXd& m, Index split) {
  if (m.rows() != m.cols() || split <= 0 || split >= m.rows()) throw std::invalid_argument("bad block split");
  const Index n2 = m.rows() - split;
  Eigen::PartialPivLU<Eigen::MatrixXd> luA(m.topLeftCorner(split, split));
  if (!(luA.rcond() > kMinRcond)) throw SingularJacobian("leading block is numerically singular");
  Eigen::MatrixXd Ainv = luA.inverse();
  Eigen::MatrixXd AinvB = Ainv * m.topRightCorner(split, n2);
  Eigen::MatrixXd CAinv = m.bottomLeftCorner(n2, split) * Ainv;
  Eigen::MatrixXd S = m.bottomRightCorner(n2, n2) - m.bottomLeftCorner(n2, split) * AinvB;
  Eigen::PartialPivLU<Eigen::MatrixXd> luS(S);
  if (!(luS.rcond() > kMinRcond)) throw SingularJacobian("Schur complement is numerically singular");
  Eigen::MatrixXd Sinv = luS.inverse();
  Eigen::MatrixXd out(m.rows(), m.cols());
  out.bottomRightCorner(n2, n2) = Sinv;
  out.topRightCorner(split, n2) = -AinvB * Sinv;
  out.bottomLeftCorner(n2, split) = -Sinv * CAinv;
  out.topLeftCorner(split, split) = Ainv - out.topRightCorner(split, n2) * CAinv;
  return out;
}

SolveResult newton_solve(const ProblemSpec& spec, const OpMatrixSet& set, const Eigen::VectorXd& initial,
                         const NewtonOptions& opts) {
  CollocationSystem sys(spec, set);
  if (initial.size() != sys.size()) throw DimensionMismatch("initial guess length differs from system size");
  SolveResult out;
  out.J = set.J;
  Eigen::VectorXd c = initial;
  Eigen::VectorXd f = sys.residual(c);
  double r = f.norm();
  for (int it = 0;; ++it) {
    out.residual_history.push_back(r);
    if (!std::isfinite(r)) break;
    if (r <= opts.tol) {
      out.cbar = c;
      out.residual = r;
      out.iterations = it;
      out.A = invert(sys.jacobian(c), opts.inverse);
      return out;
    }
    if (it >= opts.max_iter) break;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.jacobian(c));
    if (!(lu.rcond() > kMinRcond)) throw SingularJacobian("Jacobian is numerically singular during Newton iteration");
    Eigen::VectorXd step = lu.solve(f);
    // Full steps unless they make the residual grow; then halve.
    double t = 1.0;
    Eigen::VectorXd trial = c - step;
    Eigen::VectorXd ft = sys.residual(trial);
    while (!(ft.norm() < r) && t > 1.0 / 1024) {
      t *= 0.5;
      trial = c - t * step;
      ft = sys.residual(trial);
    }
    if (!(ft.norm() < r) && r > opts.tol) {
      // no descent even for tiny steps: we are at the rounding floor or stuck
      out.residual_history.push_back(ft.norm());
      break;
    }
    c = std::move(trial);
    f = std::move(ft);
    r = f.norm();
  }
  std::ostringstream msg;
  msg << "Newton did not reach residual " << opts.tol << " (last " << r << ") for " << spec.name() << " at J="
      << set.J;
  throw NoConvergence(msg.str(), out.residual_history);
}

SolveResult newton_solve(const ProblemSpec& spec, const OpMatrixSet& set, const NewtonOptions& opts) {
  return newton_solve(spec, set, Eigen::VectorXd::Zero(static_cast<Index>(set.M) * spec.channels()), opts);
}

Eigen::VectorXd lorenz_initial_guess(const Lorenz& p, int J) {
  const std::size_t m = order_for_level(J);
  auto rhs = [&](const Eigen::Vector3d& u) {
    return Eigen::Vector3d(p.sigma * (u(1) - u(0)), u(0) * (p.rho - u(2)) - u(1), u(0) * u(1) - p.beta * u(2));
  };
  // 16 steps per half cell puts every midpoint on the step grid.
  const int sub = 16;
  const double h = 1.0 / (2.0 * static_cast<double>(m) * sub);
  Eigen::Vector3d u(p.x0, p.y0, p.z0);
  Eigen::MatrixXd deriv(static_cast<Index>(m), 3);
  for (std::size_t q = 0; q < m; ++q) {
    for (int s = 0; s < (q == 0 ? sub : 2 * sub); ++s) {
      const Eigen::Vector3d k1 = rhs(u), k2 = rhs(u + 0.5 * h * k1), k3 = rhs(u + 0.5 * h * k2), k4 = rhs(u + h * k3);
      u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    deriv.row(static_cast<Index>(q)) = rhs(u).transpose();
  }
  Eigen::VectorXd guess(3 * static_cast<Index>(m));
  for (Index k = 0; k < 3; ++k)
    guess.segment(k * static_cast<Index>(m), static_cast<Index>(m)) =
        haar_apply(deriv.col(k)) / static_cast<double>(m);
  return guess;
}

}  // namespace haarverify
