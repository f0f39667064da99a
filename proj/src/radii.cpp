#include <algorithm>
#include <cmath>
#include <limits>

#include "haarverify/verifier.hpp"

namespace haarverify {

namespace {

Interval poly(const Interval& lin, const Interval& cst, double target, const Interval& y, double r) {
  const Interval rr(r);
  return lin * rr * rr + (cst - target) * rr + y;
}

// Negativity window (lo, hi) of a r^2 + b r + c on r > 0, using upper endpoints.
// Empty when lo >= hi.
struct Window {
  double lo = 0.0, hi = 0.0;
};

Window negative_window(const Interval& lin, const Interval& cst, double target, const Interval& y) {
  const double a = std::max(lin.hi(), 0.0);
  const double b = cst.hi() - target;
  const double c = y.hi();
  const double inf = std::numeric_limits<double>::infinity();
  if (!(b < 0.0) || !std::isfinite(c) || !std::isfinite(a)) return {1.0, 0.0};
  if (lin.contains_zero() || a == 0.0) return {c / -b, inf};
  const double disc = b * b - 4.0 * a * c;
  if (!(disc > 0.0)) return {1.0, 0.0};
  const double s = std::sqrt(disc);
  const double lo = 2.0 * c / (-b + s);  // stable form of the smaller root
  const double hi = (-b + s) / (2.0 * a);
  return {lo, hi};
}

}  // namespace

Interval p_m(const BoundSet& b, double omega, double r) { return poly(b.z_m_lin, b.z_m_const, omega, b.y_m, r); }

Interval p_inf(const BoundSet& b, double omega, double r) {
  return poly(b.z_inf_lin, b.z_inf_const, 1.0 - omega, b.y_inf, r);
}

std::optional<double> find_radius(const BoundSet& b, double omega) {
  if (!(omega > 0.0 && omega < 1.0)) return std::nullopt;
  Window wm = negative_window(b.z_m_lin, b.z_m_const, omega, b.y_m);
  Window wi = negative_window(b.z_inf_lin, b.z_inf_const, 1.0 - omega, b.y_inf);
  const double lo = std::max({wm.lo, wi.lo, kRadiusFloor});
  const double hi = std::min(wm.hi, wi.hi);
  if (!(lo < hi)) return std::nullopt;
  // The double roots are only estimates; nudge upward until the rigorous check passes.
  double r = lo;
  for (int k = 0; k < 60 && r < hi; ++k) {
    if (p_m(b, omega, r).hi() < 0.0 && p_inf(b, omega, r).hi() < 0.0) return r;
    const double gap = std::min(hi - lo, lo);
    r = lo + gap * std::ldexp(1.0, k - 50);
  }
  return std::nullopt;
}

std::vector<double> OmegaGrid::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(start <= stop)) return out;
  const long n = std::lround(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    double w = start + static_cast<double>(k) * step;
    if (w > 0.0 && w < 1.0) out.push_back(w);
  }
  return out;
}

OmegaChoice optimize_omega(const BoundSet& b, const OmegaGrid& grid) {
  std::optional<OmegaChoice> best;
  auto consider = [&](double w) {
    if (auto r = find_radius(b, w); r && (!best || *r < best->r0)) best = OmegaChoice{w, *r};
  };
  for (double w : grid.values()) consider(w);
  if (!best) throw AllOmegaFailed("no omega on the grid admits a radius");
  const double fine = grid.step / 10.0;
  const double centre = best->omega;
  for (int k = -9; k <= 9; ++k) {
    if (k == 0) continue;
    consider(centre + k * fine);
  }
  return *best;
}

BoundSet BoundSet::inflated(double factor) const {
  BoundSet out = *this;
  const Interval f(factor);
  for (Interval* v : {&out.y_m, &out.y_inf, &out.z_m_const, &out.z_m_lin, &out.z_inf_const, &out.z_inf_lin})
    *v = *v * f;
  return out;
}

std::string dominant_term(const BoundSet& b, double omega) {
  // Largest single named contribution relative to the slack it consumes.
  const BoundTerm* worst = nullptr;
  double worst_score = -1.0;
  for (const BoundTerm& t : b.terms) {
    double budget = 1.0;
    if (t.bound == "z_m_const") budget = omega;
    else if (t.bound == "z_inf_const") budget = 1.0 - omega;
    const double score = t.value.hi() / budget;
    if (score > worst_score) worst_score = score, worst = &t;
  }
  if (!worst) return "";
  return worst->bound + ": " + worst->name;
}

}  // namespace haarverify
