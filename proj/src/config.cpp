#include "haarverify/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace haarverify {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(trim(v), &used);
    if (used != trim(v).size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int i = std::stoi(trim(v), &used);
    if (used != trim(v).size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw ConfigError("bad flag for " + key + ": '" + v + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::pair<int, int> parse_J_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw ConfigError("J range must look like a..b, got '" + s + "'");
  return {to_int("J-range", s.substr(0, dots)), to_int("J-range", s.substr(dots + 2))};
}

OmegaGrid parse_omega_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("omega grid must look like a:b:step, got '" + s + "'");
  return {to_double("omega-grid", parts[0]), to_double("omega-grid", parts[1]), to_double("omega-grid", parts[2])};
}

std::array<double, 3> parse_ic(const std::string& s) {
  std::array<double, 3> out{};
  std::stringstream ss(s);
  std::string p;
  std::size_t n = 0;
  while (std::getline(ss, p, ',')) {
    if (n == 3) throw ConfigError("ic takes three values x,y,z");
    out[n++] = to_double("ic", p);
  }
  if (n != 3) throw ConfigError("ic takes three values x,y,z");
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "problem") {
    problem = trim(value);
  } else if (key == "lambda") {
    lambda = to_double(key, value);
  } else if (key == "u0") {
    u0 = to_double(key, value);
  } else if (key == "sigma") {
    sigma = to_double(key, value);
  } else if (key == "rho") {
    rho = to_double(key, value);
  } else if (key == "beta") {
    beta = to_double(key, value);
  } else if (key == "ic") {
    ic = parse_ic(value);
  } else if (key == "J") {
    J = to_int(key, value);
  } else if (key == "J-range") {
    J_range = parse_J_range(value);
  } else if (key == "omega") {
    if (trim(value) == "auto") omega.reset();
    else omega = to_double(key, value);
  } else if (key == "omega-grid") {
    omega_grid = parse_omega_grid(value);
  } else if (key == "tol") {
    tol = to_double(key, value);
  } else if (key == "max-iter") {
    max_iter = to_int(key, value);
  } else if (key == "out") {
    out = trim(value);
  } else if (key == "cache") {
    cache = to_bool(key, value);
  } else if (key == "cache-dir") {
    cache_dir = trim(value);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (problem != "logistic" && problem != "forced-logistic" && problem != "lorenz")
    throw ConfigError("unknown problem '" + problem + "'");
  auto check_J = [](int j) {
    if (j < 0 || j > kMaxLevel) throw ConfigError("J must lie in [0, " + std::to_string(kMaxLevel) + "]");
  };
  check_J(J);
  if (J_range) {
    check_J(J_range->first);
    check_J(J_range->second);
    if (J_range->first > J_range->second) throw ConfigError("empty J range");
  }
  if (omega && !(*omega > 0.0 && *omega < 1.0)) throw ConfigError("omega must lie in (0, 1)");
  const OmegaGrid& g = omega_grid;
  if (!(g.step > 0.0) || !(g.start > 0.0) || !(g.stop < 1.0) || g.values().empty())
    throw ConfigError("omega grid must be a nonempty subset of (0, 1)");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max-iter must be at least 1");
  for (double v : {lambda, u0, sigma, rho, beta, ic[0], ic[1], ic[2]})
    if (!std::isfinite(v)) throw ConfigError("parameters must be finite");
}

ProblemSpec RunConfig::spec() const {
  validate();
  try {
    if (problem == "logistic") return ProblemSpec(Logistic{lambda, u0});
    if (problem == "forced-logistic") return ProblemSpec(ForcedLogistic{lambda, u0});
    return ProblemSpec(Lorenz{sigma, rho, beta, ic[0], ic[1], ic[2]});
  } catch (const InvalidProblem& e) {
    throw ConfigError(e.what());
  }
}

NewtonOptions RunConfig::newton() const {
  NewtonOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

std::optional<std::filesystem::path> RunConfig::resolved_cache_dir() const {
  if (!cache) return std::nullopt;
  if (const char* env = std::getenv("HAARVERIFY_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  if (cache_dir) return cache_dir;
  return out / "cache";
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> m;
  m["problem"] = problem;
  if (problem == "lorenz") {
    m["sigma"] = format_double(sigma);
    m["rho"] = format_double(rho);
    m["beta"] = format_double(beta);
    m["ic"] = format_double(ic[0]) + "," + format_double(ic[1]) + "," + format_double(ic[2]);
  } else {
    m["lambda"] = format_double(lambda);
    m["u0"] = format_double(u0);
  }
  m["J"] = std::to_string(J);
  if (J_range) m["J-range"] = std::to_string(J_range->first) + ".." + std::to_string(J_range->second);
  m["omega"] = omega ? format_double(*omega) : "auto";
  m["omega-grid"] = format_double(omega_grid.start) + ":" + format_double(omega_grid.stop) + ":" +
                    format_double(omega_grid.step);
  m["tol"] = format_double(tol);
  m["max-iter"] = std::to_string(max_iter);
  return m;
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (trim(text).rfind('{', 0) == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(file.string() + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError(file.string() + ": no config object");
    for (auto& [k, v] : j["config"].items()) {
      if (!v.is_string()) throw ConfigError(file.string() + ": config values must be strings");
      cfg.set(k, v.get<std::string>());
    }
    return;
  }
  std::istringstream lines(text);
  int lineno = 0;
  for (std::string line; std::getline(lines, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": expected key=value");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace haarverify
