#include "haarverify/rounding.hpp"

#include <cmath>
#include <limits>

namespace haarverify::rounding {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMax = std::numeric_limits<double>::max();
constexpr double kTiny = std::numeric_limits<double>::denorm_min();
// Below this magnitude FMA residuals may themselves underflow.
constexpr double kSafeLow = 0x1p-960;

double two_sum_error(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

}  // namespace

double next_up(double x) { return std::nextafter(x, kInf); }
double next_down(double x) { return std::nextafter(x, -kInf); }

double add_up(double a, double b) {
  double s = a + b;
  if (std::isnan(s)) return s;
  if (std::isinf(s)) {
    if (s < 0 && std::isfinite(a) && std::isfinite(b)) return -kMax;
    return s;
  }
  return two_sum_error(a, b, s) > 0 ? next_up(s) : s;
}

double add_down(double a, double b) { return -add_up(-a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }
double sub_down(double a, double b) { return -add_up(-a, b); }

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isnan(p)) return p;
  if (std::isinf(p)) {
    if (p < 0 && std::isfinite(a) && std::isfinite(b)) return -kMax;
    return p;
  }
  if (std::fabs(p) < kSafeLow) return next_up(p);
  return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

double mul_down(double a, double b) { return -mul_up(-a, b); }

double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  double q = a / b;
  if (std::isnan(q)) return q;
  if (std::isinf(q)) {
    if (q < 0 && std::isfinite(a) && b != 0.0) return -kMax;
    return q;
  }
  if (std::fabs(q) < kSafeLow || std::fabs(a) < kSafeLow) return next_up(q);
  double r = std::fma(-q, b, a);
  if (r == 0.0) return q;
  // a/b - q == r/b
  return ((r > 0) == (b > 0)) ? next_up(q) : q;
}

double div_down(double a, double b) { return -div_up(-a, b); }

double sqrt_up(double a) {
  if (a <= 0.0) return a == 0.0 ? 0.0 : std::nan("");
  double s = std::sqrt(a);
  if (std::isinf(s)) return s;
  if (a < kSafeLow) return next_up(s);
  return std::fma(-s, s, a) > 0 ? next_up(s) : s;
}

double sqrt_down(double a) {
  if (a <= 0.0) return a == 0.0 ? 0.0 : std::nan("");
  double s = std::sqrt(a);
  if (std::isinf(s)) return kMax;
  if (a < kSafeLow) return next_down(s);
  return std::fma(-s, s, a) < 0 ? next_down(s) : s;
}

double mul_error_bound(double a, double b, double product) {
  if (a == 0.0 || b == 0.0) return 0.0;
  // residual may underflow: fall back to half an ulp, generously
  if (std::fabs(product) < kSafeLow) return std::fabs(product) * 0x1p-52 + kTiny;
  return std::fabs(std::fma(a, b, -product));
}

double add_error_bound(double a, double b, double sum) {
  return std::fabs(two_sum_error(a, b, sum));
}

}  // namespace haarverify::rounding
