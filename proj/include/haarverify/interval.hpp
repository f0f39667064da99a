#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace haarverify {

class IntervalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZeroInterval : public IntervalError {
 public:
  DivisionByZeroInterval() : IntervalError("division by an interval containing zero") {}
};

class InvalidInterval : public IntervalError {
 public:
  using IntervalError::IntervalError;
};

// Closed interval [lo, hi] with outward-rounded arithmetic.
class Interval {
 public:
  Interval() = default;
  explicit Interval(double x);
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double rad() const;  // upper bound on half the width
  double width() const;
  double mag() const;  // max |x|
  double mig() const;  // min |x|

  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return contains(0.0); }
  bool subset_of(const Interval& other) const { return other.lo_ <= lo_ && hi_ <= other.hi_; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator-(const Interval& x);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator+(const Interval& a, double b);
Interval operator+(double a, const Interval& b);
Interval operator-(const Interval& a, double b);
Interval operator-(double a, const Interval& b);
Interval operator*(const Interval& a, double b);
Interval operator*(double a, const Interval& b);
Interval operator/(const Interval& a, double b);
Interval operator/(double a, const Interval& b);

Interval sqrt(const Interval& x);
Interval sqr(const Interval& x);
Interval abs(const Interval& x);
Interval max(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

// 2^e exactly (e in the normal range).
Interval pow2(int e);
// 2^(k/2); exact for even k, tight enclosure of a multiple of sqrt(2) otherwise.
Interval pow2_half(int k);
const Interval& sqrt2();

std::ostream& operator<<(std::ostream& os, const Interval& x);
std::string to_string(const Interval& x);

}  // namespace haarverify
