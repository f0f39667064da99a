#include "haarverify/verifier.hpp"

namespace haarverify {

const char* const kCodeVersion = "haarverify 1.0.0";

Certificate certify(const ProblemSpec& spec, int J, double omega, const BoundSet& bounds, double solver_residual) {
  Certificate c;
  c.problem = spec.name();
  c.params = problem_params(spec);
  c.ics = initial_values(spec);
  c.J = J;
  c.omega = omega;
  c.bounds = bounds;
  c.solver_residual = solver_residual;
  c.r0 = find_radius(bounds, omega);
  if (c.r0) {
    // Independent pass: rebuild every coefficient from its endpoints.
    BoundSet fresh;
    auto copy = [](const Interval& v) { return Interval(v.lo(), v.hi()); };
    fresh.y_m = copy(bounds.y_m);
    fresh.y_inf = copy(bounds.y_inf);
    fresh.z_m_const = copy(bounds.z_m_const);
    fresh.z_m_lin = copy(bounds.z_m_lin);
    fresh.z_inf_const = copy(bounds.z_inf_const);
    fresh.z_inf_lin = copy(bounds.z_inf_lin);
    const double r = *c.r0;
    c.verified = r > 0.0 && p_m(fresh, omega, r).hi() < 0.0 && p_inf(fresh, omega, r).hi() < 0.0;
  }
  if (!c.verified) {
    c.r0.reset();
    c.dominant_term = dominant_term(bounds, omega);
  }
  return c;
}

nlohmann::json problem_params(const ProblemSpec& spec) {
  if (auto* p = spec.as<Logistic>()) return {{"lambda", p->lambda}, {"u0", p->u0}};
  if (auto* f = spec.as<ForcedLogistic>()) return {{"lambda", f->lambda}, {"u0", f->u0}};
  const Lorenz& l = *spec.as<Lorenz>();
  return {{"sigma", l.sigma}, {"rho", l.rho}, {"beta", l.beta}};
}

nlohmann::json to_json(const Certificate& c) {
  auto hi = [](const Interval& v) { return v.hi(); };
  nlohmann::json j;
  j["problem"] = c.problem;
  j["params"] = c.params;
  j["ics"] = c.ics;
  j["J"] = c.J;
  j["omega"] = c.omega;
  j["r0"] = c.r0 ? nlohmann::json(*c.r0) : nlohmann::json(nullptr);
  j["y_m"] = hi(c.bounds.y_m);
  j["y_inf"] = hi(c.bounds.y_inf);
  j["z_m_const"] = hi(c.bounds.z_m_const);
  j["z_m_lin"] = hi(c.bounds.z_m_lin);
  j["z_inf_const"] = hi(c.bounds.z_inf_const);
  j["z_inf_lin"] = hi(c.bounds.z_inf_lin);
  j["verified"] = c.verified;
  j["wall_time_s"] = c.wall_time_s;
  j["solver_residual"] = c.solver_residual;
  j["code_version"] = kCodeVersion;
  nlohmann::json terms = nlohmann::json::array();
  for (const BoundTerm& t : c.bounds.terms) terms.push_back({{"bound", t.bound}, {"name", t.name}, {"upper", t.value.hi()}});
  j["terms"] = terms;
  j["matrix_norm"] = "sqrt(|A|_1 |A|_inf), an upper bound on the spectral norm";
  if (!c.verified) j["dominant_term"] = c.dominant_term;
  if (!c.config.is_null()) j["config"] = c.config;
  return j;
}

}  // namespace haarverify
