#include "haarverify/interval_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "haarverify/rounding.hpp"

namespace haarverify {

using namespace rounding;
using Eigen::MatrixXd;

namespace {

constexpr double kEta = std::numeric_limits<double>::denorm_min();
constexpr double kUnit = 0x1p-53;

Interval from_midrad(double m, double r) {
  if (r == 0.0) return Interval(m);
  return Interval(sub_down(m, r), add_up(m, r));
}

void to_midrad(const Interval& x, double& m, double& r) {
  m = x.mid();
  r = x.is_point() ? 0.0 : x.rad();
}

// Midpoint-radius product of two scalars, radius rounded up.
inline void mr_mul(double am, double ar, double bm, double br, double& m, double& r) {
  m = am * bm;
  double e = mul_error_bound(am, bm, m);
  r = e;
  if (br != 0.0) r = add_up(r, mul_up(std::fabs(am), br));
  if (ar != 0.0) r = add_up(r, mul_up(ar, add_up(std::fabs(bm), br)));
}

inline void mr_add(double am, double ar, double bm, double br, double& m, double& r) {
  m = am + bm;
  r = add_up(add_up(ar, br), add_error_bound(am, bm, m));
}

void check_same_shape(const IntervalMat& a, const IntervalMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
}

MatrixXd gemm(const MatrixXd& a, bool ta, const MatrixXd& b, bool tb) {
  MatrixXd c(ta ? a.cols() : a.rows(), tb ? b.rows() : b.cols());
  if (!ta && !tb) c.noalias() = a * b;
  else if (ta && !tb) c.noalias() = a.transpose() * b;
  else if (!ta && tb) c.noalias() = a * b.transpose();
  else c.noalias() = a.transpose() * b.transpose();
  return c;
}

}  // namespace

IntervalVec to_interval_vec(const Eigen::VectorXd& v) {
  IntervalVec out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = Interval(v(i));
  return out;
}

Eigen::VectorXd midpoints(const IntervalVec& v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i].mid();
  return out;
}

IntervalVec operator+(const IntervalVec& a, const IntervalVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
  IntervalVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntervalVec operator-(const IntervalVec& a, const IntervalVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
  IntervalVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntervalVec operator*(const Interval& s, const IntervalVec& v) {
  IntervalVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

IntervalVec hadamard(const IntervalVec& a, const IntervalVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
  IntervalVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Interval vec_norm2(const IntervalVec& v) {
  double lo = 0.0, hi = 0.0;
  for (const auto& x : v) {
    double g = x.mig(), h = x.mag();
    lo = add_down(lo, mul_down(g, g));
    hi = add_up(hi, mul_up(h, h));
  }
  return Interval(sqrt_down(lo), sqrt_up(hi));
}

Interval vec_norm2(const Eigen::VectorXd& v) {
  double lo = 0.0, hi = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    double h = std::fabs(v(i));
    lo = add_down(lo, mul_down(h, h));
    hi = add_up(hi, mul_up(h, h));
  }
  return Interval(sqrt_down(lo), sqrt_up(hi));
}

bool contains(const IntervalVec& enclosure, const Eigen::VectorXd& v) {
  if (static_cast<Index>(enclosure.size()) != v.size()) return false;
  for (Index i = 0; i < v.size(); ++i)
    if (!enclosure[static_cast<std::size_t>(i)].contains(v(i))) return false;
  return true;
}

IntervalMat::IntervalMat(Index rows, Index cols) : mid_(MatrixXd::Zero(rows, cols)) {}

IntervalMat::IntervalMat(MatrixXd mid) : mid_(std::move(mid)) {}

IntervalMat::IntervalMat(MatrixXd mid, MatrixXd rad) : mid_(std::move(mid)), rad_(std::move(rad)) {
  if (rad_.size() != 0 && (rad_.rows() != mid_.rows() || rad_.cols() != mid_.cols()))
    throw DimensionMismatch("radius shape differs from midpoint shape");
  if (rad_.size() != 0 && (rad_.array() < 0).any()) throw InvalidInterval("negative radius");
}

IntervalMat IntervalMat::identity(Index n) { return IntervalMat(MatrixXd::Identity(n, n)); }

Interval IntervalMat::operator()(Index i, Index j) const {
  return from_midrad(mid_(i, j), has_radius() ? rad_(i, j) : 0.0);
}

void IntervalMat::set(Index i, Index j, const Interval& x) {
  double m, r;
  to_midrad(x, m, r);
  if (r != 0.0) ensure_radius();
  mid_(i, j) = m;
  if (has_radius()) rad_(i, j) = r;
}

double IntervalMat::max_radius() const { return has_radius() ? rad_.maxCoeff() : 0.0; }

void IntervalMat::ensure_radius() {
  if (!has_radius()) rad_ = MatrixXd::Zero(mid_.rows(), mid_.cols());
}

IntervalMat IntervalMat::transpose() const {
  if (!has_radius()) return IntervalMat(MatrixXd(mid_.transpose()));
  return IntervalMat(MatrixXd(mid_.transpose()), MatrixXd(rad_.transpose()));
}

IntervalMat IntervalMat::block(Index r, Index c, Index nr, Index nc) const {
  if (!has_radius()) return IntervalMat(MatrixXd(mid_.block(r, c, nr, nc)));
  return IntervalMat(MatrixXd(mid_.block(r, c, nr, nc)), MatrixXd(rad_.block(r, c, nr, nc)));
}

void IntervalMat::set_block(Index r, Index c, const IntervalMat& b) {
  mid_.block(r, c, b.rows(), b.cols()) = b.mid_;
  if (b.has_radius()) {
    ensure_radius();
    rad_.block(r, c, b.rows(), b.cols()) = b.rad_;
  } else if (has_radius()) {
    rad_.block(r, c, b.rows(), b.cols()).setZero();
  }
}

IntervalMat& IntervalMat::operator+=(const IntervalMat& o) { return add_scaled(Interval(1.0), o); }
IntervalMat& IntervalMat::operator-=(const IntervalMat& o) { return add_scaled(Interval(-1.0), o); }

IntervalMat& IntervalMat::add_scaled(const Interval& s, const IntervalMat& x) {
  check_same_shape(*this, x);
  double sm, sr;
  to_midrad(s, sm, sr);
  ensure_radius();
  const bool xr = x.has_radius();
  const Index n = mid_.size();
  double* tm = mid_.data();
  double* tr = rad_.data();
  const double* xm = x.mid_.data();
  const double* xrd = xr ? x.rad_.data() : nullptr;
  const bool exact_unit = (sr == 0.0 && std::fabs(sm) == 1.0);
  for (Index k = 0; k < n; ++k) {
    double pm, pr;
    if (exact_unit) {
      pm = sm * xm[k];
      pr = xr ? xrd[k] : 0.0;
    } else {
      mr_mul(sm, sr, xm[k], xr ? xrd[k] : 0.0, pm, pr);
    }
    double m, r;
    mr_add(tm[k], tr[k], pm, pr, m, r);
    tm[k] = m;
    tr[k] = r;
  }
  return *this;
}

IntervalMat operator+(IntervalMat a, const IntervalMat& b) { return a += b; }
IntervalMat operator-(IntervalMat a, const IntervalMat& b) { return a -= b; }

IntervalMat operator*(const Interval& s, const IntervalMat& a) {
  IntervalMat out(a.rows(), a.cols());
  return out.add_scaled(s, a);
}

IntervalMat product(const IntervalMat& a, bool ta, const IntervalMat& b, bool tb) {
  const Index inner = ta ? a.rows() : a.cols();
  const Index inner_b = tb ? b.cols() : b.rows();
  if (inner != inner_b) throw DimensionMismatch("inner dimensions differ in product");

  MatrixXd mid = gemm(a.mid(), ta, b.mid(), tb);

  // gamma_n = n u / (1 - n u), rounded up
  const double nu = mul_up(static_cast<double>(inner), kUnit);
  const double gamma = div_up(nu, sub_down(1.0, nu));
  const double inv_one_minus_gamma = div_up(1.0, sub_down(1.0, gamma));
  const double underflow_slack = mul_up(5.0 * kEta, static_cast<double>(inner));

  MatrixXd abs_a = a.mid().cwiseAbs();
  MatrixXd abs_b = b.mid().cwiseAbs();
  MatrixXd acc = gemm(abs_a, ta, abs_b, tb);
  {
    double* p = acc.data();
    for (Index k = 0; k < acc.size(); ++k) p[k] = mul_up(gamma, p[k]);
  }
  if (b.has_radius()) {
    MatrixXd g = gemm(abs_a, ta, b.rad(), tb);
    const double* q = g.data();
    double* p = acc.data();
    for (Index k = 0; k < acc.size(); ++k) p[k] = add_up(p[k], q[k]);
  }
  abs_a.resize(0, 0);
  if (a.has_radius()) {
    if (b.has_radius()) {
      double* p = abs_b.data();
      const double* q = b.rad().data();
      for (Index k = 0; k < abs_b.size(); ++k) p[k] = add_up(p[k], q[k]);
    }
    MatrixXd g = gemm(a.rad(), ta, abs_b, tb);
    const double* q = g.data();
    double* p = acc.data();
    for (Index k = 0; k < acc.size(); ++k) p[k] = add_up(p[k], q[k]);
  }
  abs_b.resize(0, 0);
  {
    double* p = acc.data();
    for (Index k = 0; k < acc.size(); ++k)
      p[k] = add_up(mul_up(inv_one_minus_gamma, p[k]), underflow_slack);
  }
  if (!mid.allFinite() || !acc.allFinite()) throw IntervalError("overflow in interval matrix product");
  return IntervalMat(std::move(mid), std::move(acc));
}

IntervalMat operator*(const IntervalMat& a, const IntervalMat& b) { return product(a, false, b, false); }

IntervalVec apply(const IntervalMat& a, const IntervalVec& x, bool transpose) {
  const Index n = static_cast<Index>(x.size());
  MatrixXd xm(n, 1), xr(n, 1);
  bool any_rad = false;
  for (Index i = 0; i < n; ++i) {
    double m, r;
    to_midrad(x[static_cast<std::size_t>(i)], m, r);
    xm(i, 0) = m;
    xr(i, 0) = r;
    any_rad = any_rad || r != 0.0;
  }
  IntervalMat xv = any_rad ? IntervalMat(std::move(xm), std::move(xr)) : IntervalMat(std::move(xm));
  IntervalMat y = product(a, transpose, xv, false);
  IntervalVec out(static_cast<std::size_t>(y.rows()));
  for (Index i = 0; i < y.rows(); ++i) out[static_cast<std::size_t>(i)] = y(i, 0);
  return out;
}

IntervalVec operator*(const IntervalMat& a, const IntervalVec& x) { return apply(a, x, false); }

IntervalMat scale_rows(const IntervalVec& d, const IntervalMat& a) {
  if (static_cast<Index>(d.size()) != a.rows()) throw DimensionMismatch("diagonal length differs from rows");
  MatrixXd mid(a.rows(), a.cols()), rad(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      double dm, dr;
      to_midrad(d[static_cast<std::size_t>(i)], dm, dr);
      mr_mul(dm, dr, a.mid()(i, j), a.has_radius() ? a.rad()(i, j) : 0.0, mid(i, j), rad(i, j));
    }
  return IntervalMat(std::move(mid), std::move(rad));
}

IntervalMat magnitude(const IntervalMat& a) {
  MatrixXd m(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      m(i, j) = a.has_radius() ? (Interval(std::abs(a.mid()(i, j))) + Interval(a.rad()(i, j))).hi()
                               : std::abs(a.mid()(i, j));
  return IntervalMat(std::move(m));
}

IntervalMat scale_cols(const IntervalMat& a, const IntervalVec& d) {
  if (static_cast<Index>(d.size()) != a.cols()) throw DimensionMismatch("diagonal length differs from cols");
  MatrixXd mid(a.rows(), a.cols()), rad(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    double dm, dr;
    to_midrad(d[static_cast<std::size_t>(j)], dm, dr);
    for (Index i = 0; i < a.rows(); ++i)
      mr_mul(a.mid()(i, j), a.has_radius() ? a.rad()(i, j) : 0.0, dm, dr, mid(i, j), rad(i, j));
  }
  return IntervalMat(std::move(mid), std::move(rad));
}

namespace {

// Row (by_rows) or column sums of magnitudes and mignitudes.
void abs_sums(const IntervalMat& a, bool by_rows, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
  const Index n = by_rows ? a.rows() : a.cols();
  lo = Eigen::VectorXd::Zero(n);
  hi = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      double m = std::fabs(a.mid()(i, j));
      double r = a.has_radius() ? a.rad()(i, j) : 0.0;
      double mag = add_up(m, r);
      double mig = r == 0.0 ? m : std::max(0.0, sub_down(m, r));
      Index k = by_rows ? i : j;
      hi(k) = add_up(hi(k), mag);
      lo(k) = add_down(lo(k), mig);
    }
}

}  // namespace

Interval norm1(const IntervalMat& a) {
  Eigen::VectorXd lo, hi;
  abs_sums(a, false, lo, hi);
  if (lo.size() == 0) return Interval(0.0);
  return Interval(lo.maxCoeff(), hi.maxCoeff());
}

Interval norm_inf(const IntervalMat& a) {
  Eigen::VectorXd lo, hi;
  abs_sums(a, true, lo, hi);
  if (lo.size() == 0) return Interval(0.0);
  return Interval(lo.maxCoeff(), hi.maxCoeff());
}

namespace {

double simple_norm2_upper(const IntervalMat& a) { return sqrt_up(mul_up(norm1(a).hi(), norm_inf(a).hi())); }

// Upper bound on the spectral norm of a point matrix B, or infinity.
// mu >= lambda_max(B^T B) is proved by factoring mu I - G - s I = R^T R
// approximately and checking that the enclosed residual has norm below s.
double spectral_norm_upper(const MatrixXd& b) {
  const bool tall = b.rows() >= b.cols();
  const IntervalMat bm(b);
  const IntervalMat g = tall ? product(bm, true, bm, false) : product(bm, false, bm, true);
  const Index n = g.rows();
  const MatrixXd& gm = g.mid();

  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0);
  double est = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXd w = gm * v;
    const double nw = w.norm();
    if (nw == 0.0) return INFINITY;
    const double next = v.dot(w) / v.squaredNorm();
    v = w / nw;
    if (it > 20 && std::fabs(next - est) <= 1e-13 * next) {
      est = next;
      break;
    }
    est = next;
  }
  if (!(est > 0.0) || !std::isfinite(est)) return INFINITY;

  for (double slack : {1e-7, 1e-5, 1e-3, 1e-1}) {
    const double mu = est * (1.0 + slack);
    const double shift = est * slack * 1e-3;
    IntervalMat t = Interval(mu) * IntervalMat::identity(n);
    t -= g;
    MatrixXd shifted = t.mid();
    shifted.diagonal().array() -= shift;
    Eigen::LLT<MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    const IntervalMat r(MatrixXd(llt.matrixU()));
    IntervalMat e = t;
    e -= Interval(shift) * IntervalMat::identity(n);
    e -= product(r, true, r, false);
    if (simple_norm2_upper(e) < shift) return sqrt_up(mu);
  }
  return INFINITY;
}

}  // namespace

Interval mat_norm2_upper(const IntervalMat& a) {
  double best = simple_norm2_upper(a);
  if (a.rows() > 1 && a.cols() > 1 && best > 0.0) {
    double rad = a.has_radius() ? simple_norm2_upper(IntervalMat(a.rad())) : 0.0;
    best = std::min(best, add_up(spectral_norm_upper(a.mid()), rad));
  }
  return Interval(0.0, best);
}

IntervalVec row_norms2(const IntervalMat& a, bool transpose) {
  const Index n = transpose ? a.cols() : a.rows();
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(n), hi = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      double m = std::fabs(a.mid()(i, j));
      double r = a.has_radius() ? a.rad()(i, j) : 0.0;
      double mag = add_up(m, r);
      double mig = r == 0.0 ? m : std::max(0.0, sub_down(m, r));
      Index k = transpose ? j : i;
      hi(k) = add_up(hi(k), mul_up(mag, mag));
      lo(k) = add_down(lo(k), mul_down(mig, mig));
    }
  IntervalVec out(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = Interval(sqrt_down(lo(k)), sqrt_up(hi(k)));
  return out;
}

}  // namespace haarverify
