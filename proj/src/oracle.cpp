#include "haarverify/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "haarverify/rounding.hpp"

namespace haarverify::oracle {

namespace {

Interval enclose_rational(const mpq_class& q) {
  double d = q.get_d();  // truncates toward zero
  if (mpq_class(d) == q) return Interval(d);
  if (q > 0) return Interval(d, rounding::next_up(d));
  return Interval(rounding::next_down(d), d);
}

mpq_class dyadic(std::uint64_t numerator, int exponent) {
  mpz_class den = 1;
  den <<= exponent;
  mpq_class q(mpz_class(static_cast<unsigned long>(numerator)), den);
  q.canonicalize();
  return q;
}

QuadSurd amplitude(int level) {
  mpz_class p = 1;
  p <<= (level / 2);
  if (level % 2 == 0) return QuadSurd(mpq_class(p), 0);
  return QuadSurd(0, mpq_class(p));
}

std::vector<QuadSurd> poly_mul(const std::vector<QuadSurd>& a, const std::vector<QuadSurd>& b) {
  std::vector<QuadSurd> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

const Piece& piece_at(const PiecewisePoly& f, const mpq_class& x) {
  for (const auto& p : f)
    if (p.lo <= x && x < p.hi) return p;
  throw std::logic_error("point outside piecewise support");
}

QuadSurd integrate_piece(const std::vector<QuadSurd>& coeff, const mpq_class& lo, const mpq_class& hi) {
  QuadSurd total;
  mpq_class plo = lo, phi = hi;  // lo^{k+1}, hi^{k+1}
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    mpq_class w = (phi - plo) / mpq_class(static_cast<long>(k + 1));
    total = total + coeff[k] * QuadSurd(w, 0);
    plo *= lo;
    phi *= hi;
  }
  return total;
}

}  // namespace

Interval QuadSurd::enclose() const {
  Interval a = enclose_rational(rational);
  if (surd == 0) return a;
  return a + enclose_rational(surd) * sqrt2();
}

std::string QuadSurd::str() const {
  return rational.get_str() + " + (" + surd.get_str() + ")*sqrt2";
}

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) {
  return QuadSurd(x.rational + y.rational, x.surd + y.surd);
}
QuadSurd operator-(const QuadSurd& x, const QuadSurd& y) {
  return QuadSurd(x.rational - y.rational, x.surd - y.surd);
}
QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
  return QuadSurd(x.rational * y.rational + 2 * x.surd * y.surd, x.rational * y.surd + x.surd * y.rational);
}
bool operator==(const QuadSurd& x, const QuadSurd& y) { return x.rational == y.rational && x.surd == y.surd; }

PiecewisePoly wavelet_poly(const WaveletIndex& idx) {
  if (idx.is_scaling()) return {Piece{0, 1, {QuadSurd(1)}}};
  const int j = idx.level();
  const std::uint64_t k = idx.shift();
  mpq_class a = dyadic(2 * k, j + 1), m = dyadic(2 * k + 1, j + 1), b = dyadic(2 * k + 2, j + 1);
  QuadSurd amp = amplitude(j);
  PiecewisePoly f;
  if (a > 0) f.push_back({0, a, {QuadSurd()}});
  f.push_back({a, m, {amp}});
  f.push_back({m, b, {QuadSurd() - amp}});
  if (b < 1) f.push_back({b, 1, {QuadSurd()}});
  return f;
}

PiecewisePoly integral_poly(const WaveletIndex& idx) {
  if (idx.is_scaling()) return {Piece{0, 1, {QuadSurd(), QuadSurd(1)}}};
  const int j = idx.level();
  const std::uint64_t k = idx.shift();
  mpq_class a = dyadic(2 * k, j + 1), m = dyadic(2 * k + 1, j + 1), b = dyadic(2 * k + 2, j + 1);
  QuadSurd amp = amplitude(j);
  PiecewisePoly f;
  if (a > 0) f.push_back({0, a, {QuadSurd()}});
  f.push_back({a, m, {QuadSurd() - amp * QuadSurd(a), amp}});
  f.push_back({m, b, {amp * QuadSurd(b), QuadSurd() - amp}});
  if (b < 1) f.push_back({b, 1, {QuadSurd()}});
  return f;
}

PiecewisePoly multiply(const PiecewisePoly& f, const PiecewisePoly& g) {
  std::set<mpq_class> cuts;
  for (const auto& p : f) cuts.insert(p.lo), cuts.insert(p.hi);
  for (const auto& p : g) cuts.insert(p.lo), cuts.insert(p.hi);
  std::vector<mpq_class> pts(cuts.begin(), cuts.end());
  PiecewisePoly out;
  for (std::size_t n = 0; n + 1 < pts.size(); ++n) {
    const Piece& pf = piece_at(f, pts[n]);
    const Piece& pg = piece_at(g, pts[n]);
    out.push_back({pts[n], pts[n + 1], poly_mul(pf.coeff, pg.coeff)});
  }
  return out;
}

QuadSurd integrate(const PiecewisePoly& f, bool split_pieces) {
  QuadSurd total;
  for (const auto& p : f) {
    if (split_pieces) {
      mpq_class mid = (p.lo + p.hi) / 2;
      total = total + integrate_piece(p.coeff, p.lo, mid);
      total = total + integrate_piece(p.coeff, mid, p.hi);
    } else {
      total = total + integrate_piece(p.coeff, p.lo, p.hi);
    }
  }
  return total;
}

namespace {

void check_indices(std::uint64_t i, std::uint64_t l) {
  if (i == 0 || l == 0 || i > kMaxOracleIndex || l > kMaxOracleIndex)
    throw std::out_of_range("oracle indices must lie in [1, " + std::to_string(kMaxOracleIndex) + "]");
}

}  // namespace

QuadSurd integral_P_entry(std::uint64_t i, std::uint64_t l, bool split_pieces) {
  check_indices(i, l);
  auto wi = integral_poly(WaveletIndex::from_one_index(i));
  auto pl = wavelet_poly(WaveletIndex::from_one_index(l));
  return integrate(multiply(wi, pl), split_pieces);
}

QuadSurd integral_Gamma_entry(std::uint64_t i, std::uint64_t l, bool split_pieces) {
  check_indices(i, l);
  auto pi = wavelet_poly(WaveletIndex::from_one_index(i));
  auto pl = wavelet_poly(WaveletIndex::from_one_index(l));
  return integrate(multiply(multiply(pi, pi), pl), split_pieces);
}

namespace {

template <class Entry>
IntervalMat oracle_matrix(int J, Entry entry) {
  const std::size_t M = order_for_level(J);
  IntervalMat out(static_cast<Index>(M), static_cast<Index>(M));
  for (std::size_t i = 1; i <= M; ++i)
    for (std::size_t l = 1; l <= M; ++l)
      out.set(static_cast<Index>(i - 1), static_cast<Index>(l - 1), entry(i, l).enclose());
  return out;
}

}  // namespace

IntervalMat oracle_P_matrix(int J) {
  return oracle_matrix(J, [](std::uint64_t i, std::uint64_t l) { return integral_P_entry(i, l); });
}

IntervalMat oracle_Gamma_matrix(int J) {
  return oracle_matrix(J, [](std::uint64_t i, std::uint64_t l) { return integral_Gamma_entry(i, l); });
}

namespace {

// Values of sum c_i w_i at the points k / (2N), k = 0..2N.
std::vector<long double> integral_samples(const Eigen::VectorXd& c, std::size_t N) {
  const std::size_t npts = 2 * N + 1;
  std::vector<long double> u(npts, 0.0L);
  const long double step = 1.0L / static_cast<long double>(2 * N);
  for (std::size_t k = 0; k < npts; ++k) u[k] = c(0) * step * static_cast<long double>(k);
  for (Index p = 1; p < c.size(); ++p) {
    if (c(p) == 0.0) continue;
    WaveletIndex w = WaveletIndex::from_one_index(static_cast<std::uint64_t>(p + 1));
    const int j = w.level();
    const long double amp = (j % 2 == 0) ? std::ldexp(1.0L, j / 2) : std::ldexp(1.0L, j / 2) * std::sqrt(2.0L);
    const std::size_t width = (2 * N) >> j;  // points per support
    const std::size_t start = static_cast<std::size_t>(w.shift()) * width;
    for (std::size_t q = 0; q <= width; ++q) {
      std::size_t dist = std::min(q, width - q);
      u[start + q] += c(p) * amp * step * static_cast<long double>(dist);
    }
  }
  return u;
}

}  // namespace

Eigen::VectorXd quad_product_transform_reference(const Eigen::VectorXd& c, const Eigen::VectorXd& d, int J_ref) {
  const std::size_t N = order_for_level(J_ref);
  if (static_cast<std::size_t>(c.size()) > N || c.size() != d.size() || c.size() == 0)
    throw std::invalid_argument("coefficient vectors must share a length not exceeding 2^(J_ref+1)");
  auto uc = integral_samples(c, N);
  auto ud = integral_samples(d, N);
  // Simpson is exact on each cell since the product is quadratic there.
  std::vector<long double> prefix(N + 1, 0.0L);
  const long double h = 1.0L / static_cast<long double>(N);
  for (std::size_t n = 0; n < N; ++n) {
    long double f0 = uc[2 * n] * ud[2 * n], f1 = uc[2 * n + 1] * ud[2 * n + 1], f2 = uc[2 * n + 2] * ud[2 * n + 2];
    prefix[n + 1] = prefix[n] + h / 6.0L * (f0 + 4.0L * f1 + f2);
  }
  Eigen::VectorXd out(static_cast<Index>(N));
  out(0) = static_cast<double>(prefix[N]);
  for (std::size_t p = 1; p < N; ++p) {
    WaveletIndex w = WaveletIndex::from_one_index(p + 1);
    const int j = w.level();
    const long double amp = (j % 2 == 0) ? std::ldexp(1.0L, j / 2) : std::ldexp(1.0L, j / 2) * std::sqrt(2.0L);
    const std::size_t width = N >> j;
    const std::size_t a = static_cast<std::size_t>(w.shift()) * width, m = a + width / 2, b = a + width;
    out(static_cast<Index>(p)) = static_cast<double>(amp * ((prefix[m] - prefix[a]) - (prefix[b] - prefix[m])));
  }
  return out;
}

long double logistic_solution(double lambda, double u0, long double t) {
  long double e = std::exp(static_cast<long double>(lambda) * t);
  return u0 * e / (1.0L - u0 + u0 * e);
}

Eigen::VectorXd logistic_reference_coeffs(double lambda, double u0, int J_ref) {
  // closed form per coefficient, so levels past the matrix limit are fine
  if (J_ref < 0 || J_ref > 20) throw std::invalid_argument("reference level must lie in [0, 20]");
  const std::size_t N = std::size_t{2} << J_ref;
  Eigen::VectorXd out(static_cast<Index>(N));
  auto u = [&](long double t) { return logistic_solution(lambda, u0, t); };
  out(0) = static_cast<double>(u(1.0L) - u(0.0L));
  for (std::size_t p = 1; p < N; ++p) {
    WaveletIndex w = WaveletIndex::from_one_index(p + 1);
    const int j = w.level();
    const long double amp = (j % 2 == 0) ? std::ldexp(1.0L, j / 2) : std::ldexp(1.0L, j / 2) * std::sqrt(2.0L);
    const long double a = std::ldexp(static_cast<long double>(w.shift()), -j);
    const long double b = std::ldexp(static_cast<long double>(w.shift() + 1), -j);
    const long double m = 0.5L * (a + b);
    // integral of u' psi over the support, by the fundamental theorem
    out(static_cast<Index>(p)) = static_cast<double>(amp * (2.0L * u(m) - u(a) - u(b)));
  }
  return out;
}

}  // namespace haarverify::oracle
