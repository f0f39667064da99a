#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "haarverify/config.hpp"
#include "haarverify/problems.hpp"
#include "haarverify/verifier.hpp"

namespace haarverify {

// Newton at level J. A warm start is padded with zeros; otherwise Lorenz starts
// from an RK4 trajectory and the logistic problems from zero.
SolveResult solve_level(const ProblemSpec& spec, const OpMatrixSet& set, const NewtonOptions& opts,
                        const std::optional<SolveResult>& warm = std::nullopt);

// Bounds, omega choice (fixed or optimized over the grid) and certificate.
Certificate verify_solution(const ProblemSpec& spec, const OpMatrixSet& set, const SolveResult& sol,
                            std::optional<double> omega, const OmegaGrid& grid);

// Full pipeline at one level, timed from operator construction to certificate.
struct LevelRun {
  SolveResult solution;
  Certificate certificate;
};
LevelRun run_level(const RunConfig& cfg, int J, const std::optional<SolveResult>& warm = std::nullopt);

// Exit codes: 0 success/verified, 2 verification failed, 1 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace haarverify
