#include "haarverify/haar.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace haarverify {

WaveletIndex WaveletIndex::from_one_index(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("wavelet index is one-based");
  WaveletIndex w;
  if (i == 1) return w;
  w.scaling_ = false;
  // i - 1 = 2^j + k with 0 <= k < 2^j
  w.level_ = static_cast<int>(std::bit_width(i - 1)) - 1;
  w.shift_ = (i - 1) - (std::uint64_t{1} << w.level_);
  return w;
}

WaveletIndex WaveletIndex::from_level_shift(int j, std::uint64_t k) {
  if (j < 0 || j > 62) throw std::invalid_argument("wavelet level out of range");
  if (k >= (std::uint64_t{1} << j)) throw std::invalid_argument("wavelet shift out of range");
  WaveletIndex w;
  w.scaling_ = false;
  w.level_ = j;
  w.shift_ = k;
  return w;
}

std::uint64_t WaveletIndex::one_index() const {
  if (scaling_) return 1;
  return (std::uint64_t{1} << level_) + shift_ + 1;
}

double WaveletIndex::support_lo() const {
  return scaling_ ? 0.0 : std::ldexp(static_cast<double>(shift_), -level_);
}
double WaveletIndex::support_mid() const {
  return scaling_ ? 0.5 : std::ldexp(2.0 * static_cast<double>(shift_) + 1.0, -level_ - 1);
}
double WaveletIndex::support_hi() const {
  return scaling_ ? 1.0 : std::ldexp(static_cast<double>(shift_ + 1), -level_);
}

Interval haar_amplitude(int level) { return pow2_half(level); }

double haar_amplitude_point(int level) {
  double base = std::ldexp(1.0, level / 2);
  return (level % 2 == 0) ? base : base * std::sqrt(2.0);
}

namespace {

void check_unit(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("t outside [0,1]: " + std::to_string(t));
}

}  // namespace

Interval eval_wavelet(const WaveletIndex& idx, double t) {
  check_unit(t);
  if (idx.is_scaling()) return Interval(1.0);
  if (t == 1.0) return Interval(0.0);
  double a = idx.support_lo(), m = idx.support_mid(), b = idx.support_hi();
  if (t < a || t >= b) return Interval(0.0);
  Interval amp = haar_amplitude(idx.level());
  return t < m ? amp : -amp;
}

Interval eval_integral(const WaveletIndex& idx, double t) {
  check_unit(t);
  if (idx.is_scaling()) return Interval(t);
  double a = idx.support_lo(), m = idx.support_mid(), b = idx.support_hi();
  if (t <= a || t >= b) return Interval(0.0);
  Interval amp = haar_amplitude(idx.level());
  if (t <= m) return amp * (Interval(t) - a);
  return amp * (Interval(b) - t);
}

std::vector<double> collocation_points(std::size_t m) {
  std::vector<double> t(m);
  for (std::size_t q = 0; q < m; ++q) t[q] = (static_cast<double>(q) + 0.5) / static_cast<double>(m);
  return t;
}

std::size_t order_for_level(int J) {
  if (J < 0 || J > kMaxLevel)
    throw std::invalid_argument("resolution level must lie in [0, " + std::to_string(kMaxLevel) + "]");
  return std::size_t{1} << (J + 1);
}

int level_for_order(std::size_t m) {
  if (m < 2 || !std::has_single_bit(m)) throw std::invalid_argument("order must be a power of two >= 2");
  return static_cast<int>(std::bit_width(m)) - 2;
}

IntervalMat haar_matrix_of_order(std::size_t m) {
  if (m == 0 || !std::has_single_bit(m)) throw std::invalid_argument("Haar matrix order must be a power of two");
  const Index n = static_cast<Index>(m);
  Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd rad = Eigen::MatrixXd::Zero(n, n);
  mid.row(0).setOnes();
  bool any_rad = false;
  for (Index p = 1; p < n; ++p) {
    WaveletIndex w = WaveletIndex::from_one_index(static_cast<std::uint64_t>(p + 1));
    Interval amp = haar_amplitude(w.level());
    double am = amp.mid(), ar = amp.is_point() ? 0.0 : amp.rad();
    any_rad = any_rad || ar != 0.0;
    const Index width = n >> w.level();
    const Index start = static_cast<Index>(w.shift()) * width;
    for (Index q = start; q < start + width / 2; ++q) {
      mid(p, q) = am;
      rad(p, q) = ar;
    }
    for (Index q = start + width / 2; q < start + width; ++q) {
      mid(p, q) = -am;
      rad(p, q) = ar;
    }
  }
  if (!any_rad) return IntervalMat(std::move(mid));
  return IntervalMat(std::move(mid), std::move(rad));
}

HaarMatrix build_haar_matrix(int J) {
  std::size_t m = order_for_level(J);
  return HaarMatrix{J, m, haar_matrix_of_order(m)};
}

CoeffVec forward_transform(const HaarMatrix& h, const Eigen::VectorXd& samples) {
  if (static_cast<std::size_t>(samples.size()) != h.M) throw DimensionMismatch("sample count differs from M");
  CoeffVec out{h.J, haar_apply(samples) / static_cast<double>(h.M)};
  return out;
}

IntervalVec forward_transform(const HaarMatrix& h, const IntervalVec& samples) {
  if (samples.size() != h.M) throw DimensionMismatch("sample count differs from M");
  IntervalVec y = h.H * samples;
  Interval inv = Interval(1.0) / Interval(static_cast<double>(h.M));
  return inv * y;
}

Eigen::VectorXd inverse_transform(const HaarMatrix& h, const CoeffVec& c) {
  if (static_cast<std::size_t>(c.values.size()) != h.M) throw DimensionMismatch("coefficient count differs from M");
  return haar_apply_transpose(c.values);
}

IntervalVec inverse_transform(const HaarMatrix& h, const IntervalVec& c) {
  if (c.size() != h.M) throw DimensionMismatch("coefficient count differs from M");
  return apply(h.H, c, true);
}

Eigen::VectorXd haar_apply(const Eigen::VectorXd& v) {
  const Index n = v.size();
  if (n == 0 || !std::has_single_bit(static_cast<std::size_t>(n))) throw std::invalid_argument("length must be a power of two");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  // sums[b] holds the sum over block b of the current width
  Eigen::VectorXd sums = v;
  Index width = 1;
  int level = static_cast<int>(std::bit_width(static_cast<std::size_t>(n))) - 1;
  while (width < n) {
    --level;  // wavelets of this level have half-supports of the current width
    const Index blocks = n / (2 * width);
    const double amp = haar_amplitude_point(level);
    Eigen::VectorXd next(blocks);
    for (Index k = 0; k < blocks; ++k) {
      double left = sums(2 * k), right = sums(2 * k + 1);
      out((Index{1} << level) + k) = amp * (left - right);
      next(k) = left + right;
    }
    sums.swap(next);
    width *= 2;
  }
  out(0) = sums(0);
  return out;
}

Eigen::VectorXd haar_apply_transpose(const Eigen::VectorXd& c) {
  const Index n = c.size();
  if (n == 0 || !std::has_single_bit(static_cast<std::size_t>(n))) throw std::invalid_argument("length must be a power of two");
  Eigen::VectorXd out = Eigen::VectorXd::Constant(n, c(0));
  for (Index p = 1; p < n; ++p) {
    if (c(p) == 0.0) continue;
    int j = static_cast<int>(std::bit_width(static_cast<std::size_t>(p))) - 1;
    Index k = p - (Index{1} << j);
    Index width = n >> j;
    double v = haar_amplitude_point(j) * c(p);
    Index start = k * width;
    for (Index q = start; q < start + width / 2; ++q) out(q) += v;
    for (Index q = start + width / 2; q < start + width; ++q) out(q) -= v;
  }
  return out;
}

}  // namespace haarverify
