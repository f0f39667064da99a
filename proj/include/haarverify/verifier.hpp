#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarverify/interval.hpp"
#include "haarverify/opmat.hpp"
#include "haarverify/problems.hpp"

namespace haarverify {

// One named contribution to a bound, kept for diagnostics.
struct BoundTerm {
  std::string bound;  // "y_m", "z_m_const", ...
  std::string name;
  Interval value;
};

// Coefficients of the two radii polynomials
//   p_M(r)   = z_m_lin r^2 + (z_m_const - omega) r + y_m
//   p_inf(r) = z_inf_lin r^2 + (z_inf_const - (1 - omega)) r + y_inf
// None of them depends on omega.
struct BoundSet {
  Interval y_m, y_inf;
  Interval z_m_const, z_m_lin;
  Interval z_inf_const, z_inf_lin;
  std::vector<BoundTerm> terms;

  BoundSet inflated(double factor) const;  // every coefficient scaled up
};

// Autonomous quadratic vector field in absolute coordinates,
//   f_k(u) = b_k + sum_l L_kl u_l + sum_{l,m} Q_klm u_l u_m,
// optionally plus a forcing that is constant on every grid cell.
struct QuadraticField {
  int n = 1;
  std::vector<double> u0;  // n
  std::vector<double> b;   // n
  std::vector<double> L;   // n*n, row major
  std::vector<double> Q;   // n*n*n, index (k*n + l)*n + m
  double lin(int k, int l) const { return L[static_cast<std::size_t>(k * n + l)]; }
  double quad(int k, int l, int m) const { return Q[static_cast<std::size_t>((k * n + l) * n + m)]; }
};
QuadraticField field_of(const ProblemSpec& spec);

// max over block rows of the summed block norms: the operator norm under the
// max-over-channels norm, given norms of the blocks.
Interval block_operator_norm(const std::vector<std::vector<Interval>>& blocks);

// Bounds for c - H f(u0 + int c) = 0 preconditioned by A, under the max over
// channels of the l2 norms. forcing: per channel, the cell values of the
// forcing on the level-J grid (empty for none).
BoundSet bounds_quadratic(const OpMatrixSet& set, const QuadraticField& field, const Eigen::VectorXd& cbar,
                          const Eigen::MatrixXd& A, const std::vector<Eigen::VectorXd>& forcing = {});

BoundSet bounds_logistic(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                         double lambda, double u0);
// Same, with forcing coefficients g subtracted in the finite residual.
BoundSet bounds_forced_logistic(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                                double lambda, double u0, const Eigen::VectorXd& g);
BoundSet bounds_lorenz(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                       const Lorenz& params);
BoundSet compute_bounds(const ProblemSpec& spec, const OpMatrixSet& set, const SolveResult& sol);

Interval p_m(const BoundSet& b, double omega, double r);
Interval p_inf(const BoundSet& b, double omega, double r);

constexpr double kRadiusFloor = 1e-15;

// Smallest r found with both polynomials certified negative, or nothing.
std::optional<double> find_radius(const BoundSet& b, double omega);

struct OmegaGrid {
  double start = 0.01;
  double stop = 0.99;
  double step = 0.01;
  std::vector<double> values() const;
};

class AllOmegaFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OmegaChoice {
  double omega = 0.0;
  double r0 = 0.0;
};

// Coarse scan over the grid, then a finer pass of step/10 around the best
// coarse value.
OmegaChoice optimize_omega(const BoundSet& b, const OmegaGrid& grid = {});

struct Certificate {
  std::string problem;
  nlohmann::json params;
  std::vector<double> ics;
  int J = 0;
  double omega = 0.0;
  std::optional<double> r0;
  BoundSet bounds;
  bool verified = false;
  double wall_time_s = 0.0;
  double solver_residual = 0.0;
  std::string dominant_term;  // set when verification fails
  nlohmann::json config;      // flat key/value echo of the run configuration
};

// Builds the certificate for a fixed omega, rechecking both polynomials
// from freshly constructed intervals before declaring success.
Certificate certify(const ProblemSpec& spec, int J, double omega, const BoundSet& bounds, double solver_residual);

std::string dominant_term(const BoundSet& b, double omega);

nlohmann::json to_json(const Certificate& c);
nlohmann::json problem_params(const ProblemSpec& spec);

extern const char* const kCodeVersion;

}  // namespace haarverify
