#pragma once

// Directed rounding without touching the FPU mode. Each helper computes the
// round-to-nearest result, recovers the exact error with an error-free
// transformation, and steps one ulp only when the result was inexact.
// Near the underflow threshold the error terms are not exact, so those cases
// step unconditionally.

namespace haarverify::rounding {

double next_up(double x);
double next_down(double x);

double add_up(double a, double b);
double add_down(double a, double b);
double sub_up(double a, double b);
double sub_down(double a, double b);
double mul_up(double a, double b);
double mul_down(double a, double b);
double div_up(double a, double b);
double div_down(double a, double b);
double sqrt_up(double a);
double sqrt_down(double a);

// Exact rounding error of fl(a*b) and fl(a+b) (magnitude only, upper bound).
double mul_error_bound(double a, double b, double product);
double add_error_bound(double a, double b, double sum);

}  // namespace haarverify::rounding
