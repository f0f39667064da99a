#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "haarverify/problems.hpp"
#include "haarverify/verifier.hpp"

namespace haarverify {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a run needs. Keys in config files match the long CLI flag names.
struct RunConfig {
  std::string problem = "logistic";
  double lambda = 6.0;
  double u0 = 0.2;
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  // Near the unstable equilibrium (6 sqrt 2, 6 sqrt 2, 27). From (1,1,1) the
  // derivatives reach the hundreds on [0,1] and the tail defect is still far
  // too large at J=12.
  std::array<double, 3> ic = {8.0, 8.0, 27.0};
  int J = 6;
  std::optional<std::pair<int, int>> J_range;
  std::optional<double> omega;
  OmegaGrid omega_grid;
  double tol = 1e-12;
  int max_iter = 50;
  std::filesystem::path out = ".";
  bool cache = false;
  std::optional<std::filesystem::path> cache_dir;

  // Parses one key=value setting; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  ProblemSpec spec() const;
  NewtonOptions newton() const;
  // Cache location: HAARVERIFY_CACHE_DIR, else cache_dir, else <out>/cache. Empty when caching is off.
  std::optional<std::filesystem::path> resolved_cache_dir() const;

  // Flat key -> string echo, enough to rerun the same computation.
  std::map<std::string, std::string> echo() const;
};

// Reads key=value lines ('#' starts a comment). A JSON certificate is also
// accepted, in which case its echoed "config" object is used.
void load_config_file(RunConfig& cfg, const std::filesystem::path& file);

std::pair<int, int> parse_J_range(const std::string& s);  // "a..b"
OmegaGrid parse_omega_grid(const std::string& s);         // "a:b:step"
std::array<double, 3> parse_ic(const std::string& s);     // "x,y,z"

// 17 significant digits, so the value round-trips.
std::string format_double(double v);

}  // namespace haarverify
