#include "haarverify/problems.hpp"

#include <cmath>

namespace haarverify {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidProblem(std::string(name) + " must be finite");
}

}  // namespace

ProblemSpec::ProblemSpec(Variant v) : v_(std::move(v)) {
  if (auto* p = std::get_if<Logistic>(&v_)) {
    require_finite(p->lambda, "lambda");
    require_finite(p->u0, "u0");
  } else if (auto* f = std::get_if<ForcedLogistic>(&v_)) {
    require_finite(f->lambda, "lambda");
    require_finite(f->u0, "u0");
  } else if (auto* l = std::get_if<Lorenz>(&v_)) {
    for (auto [v, n] : {std::pair{l->sigma, "sigma"}, {l->rho, "rho"}, {l->beta, "beta"}, {l->x0, "x0"},
                        {l->y0, "y0"}, {l->z0, "z0"}})
      require_finite(v, n);
    if (l->sigma < 0 || l->rho < 0 || l->beta < 0) throw InvalidProblem("Lorenz parameters must be nonnegative");
  }
}

std::string ProblemSpec::name() const {
  switch (v_.index()) {
    case 0: return "logistic";
    case 1: return "forced-logistic";
    default: return "lorenz";
  }
}

int ProblemSpec::channels() const { return std::holds_alternative<Lorenz>(v_) ? 3 : 1; }

std::vector<double> initial_values(const ProblemSpec& spec) {
  if (auto* p = spec.as<Logistic>()) return {p->u0};
  if (auto* f = spec.as<ForcedLogistic>()) return {f->u0};
  const Lorenz& l = *spec.as<Lorenz>();
  return {l.x0, l.y0, l.z0};
}

Eigen::VectorXd forcing_cells(std::size_t M) {
  std::vector<double> t = collocation_points(M);
  Eigen::VectorXd g(static_cast<Index>(M));
  for (std::size_t q = 0; q < M; ++q) g(static_cast<Index>(q)) = t[q] <= 0.5 ? 1.0 : 0.0;
  return g;
}

Eigen::VectorXd forcing_coeffs(std::size_t M) { return haar_apply(forcing_cells(M)) / static_cast<double>(M); }

CollocationSystem::CollocationSystem(const ProblemSpec& spec, const OpMatrixSet& set)
    : spec_(spec), set_(set) {
  PT_ = set.P.mid().transpose();
  Q_.noalias() = set.H.mid().transpose() * PT_;
  if (spec.as<ForcedLogistic>()) forcing_ = forcing_coeffs(set.M);
}

Eigen::VectorXd CollocationSystem::collocated_product(const Eigen::VectorXd& s1, const Eigen::VectorXd& s2) const {
  return haar_apply(s1.cwiseProduct(s2)) / static_cast<double>(set_.M);
}

Eigen::MatrixXd CollocationSystem::product_derivative(const Eigen::VectorXd& s) const {
  const Index n = static_cast<Index>(set_.M);
  Eigen::MatrixXd out(n, n);
  const double inv_m = 1.0 / static_cast<double>(set_.M);
  for (Index j = 0; j < n; ++j) out.col(j) = haar_apply(s.cwiseProduct(Q_.col(j))) * inv_m;
  return out;
}

Eigen::VectorXd CollocationSystem::residual(const Eigen::VectorXd& c) const {
  if (c.size() != size()) throw DimensionMismatch("coefficient length differs from system size");
  const Index n = static_cast<Index>(set_.M);
  if (const Lorenz* l = spec_.as<Lorenz>()) {
    auto cx = c.segment(0, n), cy = c.segment(n, n), cz = c.segment(2 * n, n);
    Eigen::VectorXd ax = PT_ * cx, ay = PT_ * cy, az = PT_ * cz;
    Eigen::VectorXd sx = Q_ * cx, sy = Q_ * cy, sz = Q_ * cz;
    Eigen::VectorXd f(3 * n);
    f.segment(0, n) = cx - l->sigma * ay + l->sigma * ax;
    f(0) -= l->sigma * (l->y0 - l->x0);
    f.segment(n, n) = cy + collocated_product(sx, sz) + l->x0 * az - (l->rho - l->z0) * ax + ay;
    f(n) -= l->x0 * (l->rho - l->z0) - l->y0;
    f.segment(2 * n, n) = cz - collocated_product(sx, sy) - l->y0 * ax - l->x0 * ay + l->beta * az;
    f(2 * n) -= l->x0 * l->y0 - l->beta * l->z0;
    return f;
  }
  double lambda, u0;
  if (auto* p = spec_.as<Logistic>()) lambda = p->lambda, u0 = p->u0;
  else lambda = spec_.as<ForcedLogistic>()->lambda, u0 = spec_.as<ForcedLogistic>()->u0;
  Eigen::VectorXd s = Q_ * c;
  Eigen::VectorXd f = c + lambda * (2 * u0 - 1) * (PT_ * c) + lambda * collocated_product(s, s);
  f(0) += lambda * (u0 * u0 - u0);
  if (forcing_.size()) f -= forcing_;
  return f;
}

Eigen::MatrixXd CollocationSystem::jacobian(const Eigen::VectorXd& c) const {
  if (c.size() != size()) throw DimensionMismatch("coefficient length differs from system size");
  const Index n = static_cast<Index>(set_.M);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  if (const Lorenz* l = spec_.as<Lorenz>()) {
    Eigen::VectorXd sx = Q_ * c.segment(0, n), sy = Q_ * c.segment(n, n), sz = Q_ * c.segment(2 * n, n);
    Eigen::MatrixXd Kx = product_derivative(sx);
    Eigen::MatrixXd df(3 * n, 3 * n);
    df.block(0, 0, n, n) = I + l->sigma * PT_;
    df.block(0, n, n, n) = -l->sigma * PT_;
    df.block(0, 2 * n, n, n).setZero();
    df.block(n, 0, n, n) = product_derivative(sz) - (l->rho - l->z0) * PT_;
    df.block(n, n, n, n) = I + PT_;
    df.block(n, 2 * n, n, n) = Kx + l->x0 * PT_;
    df.block(2 * n, 0, n, n) = -product_derivative(sy) - l->y0 * PT_;
    df.block(2 * n, n, n, n) = -Kx - l->x0 * PT_;
    df.block(2 * n, 2 * n, n, n) = I + l->beta * PT_;
    return df;
  }
  double lambda, u0;
  if (auto* p = spec_.as<Logistic>()) lambda = p->lambda, u0 = p->u0;
  else lambda = spec_.as<ForcedLogistic>()->lambda, u0 = spec_.as<ForcedLogistic>()->u0;
  Eigen::VectorXd s = Q_ * c;
  Eigen::MatrixXd df = product_derivative(s) * (2 * lambda);
  df += I + lambda * (2 * u0 - 1) * PT_;
  return df;
}

Eigen::VectorXd prolong(const Eigen::VectorXd& c, int channels, int J_from, int J_to) {
  const Index from = static_cast<Index>(order_for_level(J_from));
  const Index to = static_cast<Index>(order_for_level(J_to));
  if (J_to < J_from) throw std::invalid_argument("prolongation must not decrease the level");
  if (c.size() != from * channels) throw DimensionMismatch("coefficient length differs from level");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(to * channels);
  for (int ch = 0; ch < channels; ++ch) out.segment(ch * to, from) = c.segment(ch * from, from);
  return out;
}

Eigen::MatrixXd reconstruct_solution(const ProblemSpec& spec, const Eigen::VectorXd& cbar, const std::vector<double>& t) {
  const int channels = spec.channels();
  const Index M = cbar.size() / channels;
  if (M * channels != cbar.size() || M < 2) throw DimensionMismatch("coefficient length does not split into channels");
  const int J = level_for_order(static_cast<std::size_t>(M));
  std::vector<double> u0 = initial_values(spec);
  Eigen::MatrixXd out(static_cast<Index>(t.size()), channels);
  for (std::size_t q = 0; q < t.size(); ++q) {
    const double tq = t[q];
    if (!(tq >= 0.0 && tq <= 1.0)) throw std::domain_error("reconstruction point outside [0,1]");
    for (int ch = 0; ch < channels; ++ch) {
      auto c = cbar.segment(ch * M, M);
      double u = u0[static_cast<std::size_t>(ch)] + c(0) * tq;
      if (tq < 1.0) {
        for (int j = 0; j <= J; ++j) {
          const double scaled = std::ldexp(tq, j);
          const auto k = static_cast<std::uint64_t>(std::floor(scaled));
          const double frac = scaled - static_cast<double>(k);  // position inside the support
          const double tri = std::ldexp(frac < 0.5 ? frac : 1.0 - frac, -j);
          u += c(static_cast<Index>((std::uint64_t{1} << j) + k)) * haar_amplitude_point(j) * tri;
        }
      }
      out(static_cast<Index>(q), ch) = u;
    }
  }
  return out;
}

}  // namespace haarverify
