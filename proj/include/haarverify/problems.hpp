#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "haarverify/opmat.hpp"

namespace haarverify {

struct Logistic {
  double lambda = 6.0;
  double u0 = 0.2;
};

// Logistic equation plus the forcing g(t) = 1 for t <= 1/2, 0 afterwards.
struct ForcedLogistic {
  double lambda = 6.0;
  double u0 = 0.2;
};

struct Lorenz {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double x0 = 8.0;
  double y0 = 8.0;
  double z0 = 27.0;
};

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ProblemSpec {
 public:
  using Variant = std::variant<Logistic, ForcedLogistic, Lorenz>;

  ProblemSpec(Variant v);  // validates parameters
  const Variant& variant() const { return v_; }
  std::string name() const;  // "logistic", "forced-logistic", "lorenz"
  int channels() const;      // 1 or 3
  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

 private:
  Variant v_;
};

// g at the collocation points; g is constant on every cell of the grid.
Eigen::VectorXd forcing_cells(std::size_t M);
// Haar coefficients of g on the collocation grid: (1/M) H g(t_q).
Eigen::VectorXd forcing_coeffs(std::size_t M);

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point-valued collocation system F_M(c) = 0 for one problem at one level.
class CollocationSystem {
 public:
  CollocationSystem(const ProblemSpec& spec, const OpMatrixSet& set);

  Index size() const { return static_cast<Index>(set_.M) * spec_.channels(); }
  Eigen::VectorXd residual(const Eigen::VectorXd& c) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& c) const;

 private:
  // (1/M) H diag(s) Q, the derivative of the collocated product term
  Eigen::MatrixXd product_derivative(const Eigen::VectorXd& s) const;
  Eigen::VectorXd collocated_product(const Eigen::VectorXd& s1, const Eigen::VectorXd& s2) const;

  ProblemSpec spec_;
  const OpMatrixSet& set_;
  Eigen::MatrixXd PT_;  // P^T
  Eigen::MatrixXd Q_;   // H^T P^T: values of the integrals at the collocation points
  Eigen::VectorXd forcing_;
};

enum class InverseMethod { kFull, kBlock };

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  InverseMethod inverse = InverseMethod::kFull;
};

struct SolveResult {
  int J = 0;
  Eigen::VectorXd cbar;  // M or 3M coefficients (x, y, z blocks for Lorenz)
  Eigen::MatrixXd A;     // approximate inverse of the Jacobian at cbar
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

SolveResult newton_solve(const ProblemSpec& spec, const OpMatrixSet& set, const Eigen::VectorXd& initial,
                         const NewtonOptions& opts = {});
// Zero initial guess.
SolveResult newton_solve(const ProblemSpec& spec, const OpMatrixSet& set, const NewtonOptions& opts = {});

// Starting point from an RK4 integration: Haar coefficients of the derivative
// sampled at the collocation points, x block then y then z.
Eigen::VectorXd lorenz_initial_guess(const Lorenz& p, int J);

// Pads each channel of a level-J coefficient vector with zeros up to level J_to.
Eigen::VectorXd prolong(const Eigen::VectorXd& c, int channels, int J_from, int J_to);

// Inverse of a 2x2 block matrix [[A, B], [C, D]] through the Schur complement of A.
Eigen::MatrixXd block_inverse(const Eigen::MatrixXd& m, Index split);

// Values u0 + sum c_i w_i(t) per channel; one column per channel.
Eigen::MatrixXd reconstruct_solution(const ProblemSpec& spec, const Eigen::VectorXd& cbar,
                                     const std::vector<double>& t);

// Initial values per channel.
std::vector<double> initial_values(const ProblemSpec& spec);

}  // namespace haarverify
