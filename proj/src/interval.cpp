#include "haarverify/interval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "haarverify/rounding.hpp"

namespace haarverify {

using namespace rounding;

Interval::Interval(double x) : lo_(x), hi_(x) {
  if (std::isnan(x)) throw InvalidInterval("NaN endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw InvalidInterval("NaN endpoint");
  if (lo > hi) throw InvalidInterval("lower endpoint exceeds upper endpoint");
}

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::rad() const {
  double m = mid();
  return std::max(sub_up(hi_, m), sub_up(m, lo_));
}

double Interval::width() const { return sub_up(hi_, lo_); }

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval operator-(const Interval& x) { return Interval(-x.hi(), -x.lo()); }

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) {
    return Interval(mul_down(a.lo(), b.lo()), mul_up(a.lo(), b.lo()));
  }
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs)
    for (double y : ys) {
      lo = std::min(lo, mul_down(x, y));
      hi = std::max(hi, mul_up(x, y));
    }
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DivisionByZeroInterval();
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs)
    for (double y : ys) {
      lo = std::min(lo, div_down(x, y));
      hi = std::max(hi, div_up(x, y));
    }
  return Interval(lo, hi);
}

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

Interval operator+(const Interval& a, double b) { return a + Interval(b); }
Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
Interval operator-(const Interval& a, double b) { return a - Interval(b); }
Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
Interval operator*(const Interval& a, double b) { return a * Interval(b); }
Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
Interval operator/(const Interval& a, double b) { return a / Interval(b); }
Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

Interval sqrt(const Interval& x) {
  if (x.hi() < 0) throw InvalidInterval("sqrt of a negative interval");
  double lo = x.lo() <= 0 ? 0.0 : sqrt_down(x.lo());
  return Interval(lo, sqrt_up(x.hi()));
}

Interval sqr(const Interval& x) {
  double lo = x.mig();
  double hi = x.mag();
  return Interval(mul_down(lo, lo), mul_up(hi, hi));
}

Interval abs(const Interval& x) { return Interval(x.mig(), x.mag()); }

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval pow2(int e) { return Interval(std::ldexp(1.0, e)); }

const Interval& sqrt2() {
  static const Interval value = sqrt(Interval(2.0));
  return value;
}

Interval pow2_half(int k) {
  // floor division so that odd negative k works too
  int whole = (k >= 0) ? k / 2 : -((-k + 1) / 2);
  Interval base = pow2(whole);
  if (k - 2 * whole == 0) return base;
  return Interval(std::ldexp(sqrt2().lo(), whole), std::ldexp(sqrt2().hi(), whole));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  std::ostringstream s;
  s << std::setprecision(17) << '[' << x.lo() << ", " << x.hi() << ']';
  return os << s.str();
}

std::string to_string(const Interval& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace haarverify
