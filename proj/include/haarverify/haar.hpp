#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "haarverify/interval.hpp"
#include "haarverify/interval_matrix.hpp"

namespace haarverify {

constexpr int kMaxLevel = 12;

// Position of a basis function in the one-based enumeration used throughout:
// index 1 is the scaling function, index 2^j + k + 1 is psi_{j,k} with
// 0 <= k < 2^j.
class WaveletIndex {
 public:
  static WaveletIndex from_one_index(std::uint64_t i);
  static WaveletIndex from_level_shift(int j, std::uint64_t k);
  static WaveletIndex scaling() { return WaveletIndex(); }

  std::uint64_t one_index() const;
  bool is_scaling() const { return scaling_; }
  int level() const { return level_; }
  std::uint64_t shift() const { return shift_; }

  // Support [k/2^j, (k+1)/2^j); the whole unit interval for the scaling function.
  double support_lo() const;
  double support_mid() const;
  double support_hi() const;

 private:
  WaveletIndex() = default;
  bool scaling_ = true;
  int level_ = 0;
  std::uint64_t shift_ = 0;
};

// 2^(j/2), the height of psi_{j,k}.
Interval haar_amplitude(int level);
double haar_amplitude_point(int level);

// psi_i(t) on [0,1]; psi_i(1) = 0 for wavelets and phi(1) = 1.
Interval eval_wavelet(const WaveletIndex& idx, double t);
// Integral of psi_i from 0 to t.
Interval eval_integral(const WaveletIndex& idx, double t);

// Collocation points t_q = (q - 1/2)/m, q = 1..m.
std::vector<double> collocation_points(std::size_t m);

struct HaarMatrix {
  int J = 0;
  std::size_t M = 1;
  IntervalMat H;
};

// Haar matrix of order m (a power of two): entry (p, q) is psi_p(t_q).
IntervalMat haar_matrix_of_order(std::size_t m);
// Order 2^(J+1), 0 <= J <= kMaxLevel.
HaarMatrix build_haar_matrix(int J);

std::size_t order_for_level(int J);
int level_for_order(std::size_t m);

// Point-valued coefficient vector of length 2^(J+1).
struct CoeffVec {
  int J = 0;
  Eigen::VectorXd values;
};

// (1/M) H samples.
CoeffVec forward_transform(const HaarMatrix& h, const Eigen::VectorXd& samples);
IntervalVec forward_transform(const HaarMatrix& h, const IntervalVec& samples);
// H^T c: samples at the collocation points.
Eigen::VectorXd inverse_transform(const HaarMatrix& h, const CoeffVec& c);
IntervalVec inverse_transform(const HaarMatrix& h, const IntervalVec& c);

// O(m log m) point versions of H v and H^T c, used by the solver.
Eigen::VectorXd haar_apply(const Eigen::VectorXd& v);
Eigen::VectorXd haar_apply_transpose(const Eigen::VectorXd& c);

}  // namespace haarverify
