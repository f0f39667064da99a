#include "haarverify/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "haarverify/oracle.hpp"
#include "haarverify/report.hpp"

namespace haarverify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string tag(const RunConfig& cfg, int J) { return cfg.problem + "_J" + std::to_string(J); }

}  // namespace

SolveResult solve_level(const ProblemSpec& spec, const OpMatrixSet& set, const NewtonOptions& opts,
                        const std::optional<SolveResult>& warm) {
  const int channels = spec.channels();
  if (warm) {
    if (warm->J > set.J) throw std::invalid_argument("warm start comes from a finer level");
    return newton_solve(spec, set, prolong(warm->cbar, channels, warm->J, set.J), opts);
  }
  if (const Lorenz* lz = spec.as<Lorenz>()) return newton_solve(spec, set, lorenz_initial_guess(*lz, set.J), opts);
  return newton_solve(spec, set, opts);
}

Certificate verify_solution(const ProblemSpec& spec, const OpMatrixSet& set, const SolveResult& sol,
                            std::optional<double> omega, const OmegaGrid& grid) {
  BoundSet b = compute_bounds(spec, set, sol);
  double w;
  if (omega) {
    w = *omega;
  } else {
    try {
      w = optimize_omega(b, grid).omega;
    } catch (const AllOmegaFailed&) {
      // Report the grid point with the most slack so the diagnostic is meaningful.
      std::vector<double> ws = grid.values();
      w = ws[ws.size() / 2];
    }
  }
  return certify(spec, set.J, w, b, sol.residual);
}

LevelRun run_level(const RunConfig& cfg, int J, const std::optional<SolveResult>& warm) {
  const auto t0 = Clock::now();
  const ProblemSpec spec = cfg.spec();
  const auto cache_dir = cfg.resolved_cache_dir();
  LevelRun run;
  {
    const OpMatrixSet set = cached_opmatrices(J, cache_dir);
    run.solution = solve_level(spec, set, cfg.newton(), warm);
    run.certificate = verify_solution(spec, set, run.solution, cfg.omega, cfg.omega_grid);
  }
  run.certificate.wall_time_s = seconds_since(t0);
  RunConfig echo_cfg = cfg;
  echo_cfg.J = J;
  echo_cfg.J_range.reset();
  run.certificate.config = echo_cfg.echo();
  return run;
}

namespace {

void print_summary(const Certificate& c, std::ostream& out) {
  out << c.problem << " J=" << c.J << " omega=" << format_double(c.omega) << ": ";
  if (c.verified) {
    out << "verified, r0=" << format_double(*c.r0);
  } else {
    out << "NOT verified; dominant term " << c.dominant_term;
  }
  out << " (" << c.wall_time_s << " s)\n";
  out << "  Y_M=" << c.bounds.y_m.hi() << " Y_inf=" << c.bounds.y_inf.hi() << " Z_M=" << c.bounds.z_m_const.hi()
      << " + " << c.bounds.z_m_lin.hi() << " r, Z_inf=" << c.bounds.z_inf_const.hi() << " + "
      << c.bounds.z_inf_lin.hi() << " r\n";
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ProblemSpec spec = cfg.spec();
  const auto cache_dir = cfg.resolved_cache_dir();
  const OpMatrixSet set = cached_opmatrices(cfg.J, cache_dir);
  SolveResult sol = solve_level(spec, set, cfg.newton());
  const std::vector<double> t = collocation_points(set.M);
  Eigen::MatrixXd u = reconstruct_solution(spec, sol.cbar, t);

  CsvTable table;
  table.header = {"t"};
  std::vector<std::string> names = spec.channels() == 3 ? std::vector<std::string>{"x", "y", "z"}
                                                        : std::vector<std::string>{"u"};
  for (auto& n : names) table.header.push_back(n);
  std::vector<Series> series(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) series[k].label = names[k];
  for (std::size_t q = 0; q < t.size(); ++q) {
    std::vector<std::string> row = {format_double(t[q])};
    for (std::size_t k = 0; k < names.size(); ++k) {
      const double v = u(static_cast<Index>(q), static_cast<Index>(k));
      row.push_back(format_double(v));
      series[k].x.push_back(t[q]);
      series[k].y.push_back(v);
    }
    table.add_row(std::move(row));
  }
  const auto base = cfg.out / ("solution_" + tag(cfg, cfg.J));
  write_csv(table, base.string() + ".csv");
  write_text(svg_plot(series, spec.name() + " solution, J=" + std::to_string(cfg.J), "t", "value"),
             base.string() + ".svg");
  out << spec.name() << " J=" << cfg.J << ": Newton converged in " << sol.iterations << " iterations, residual "
      << sol.residual << "\n  wrote " << base.string() << ".csv\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  LevelRun run = run_level(cfg, cfg.J);
  const auto file = cfg.out / ("certificate_" + tag(cfg, cfg.J) + ".json");
  write_json(to_json(run.certificate), file);
  print_summary(run.certificate, out);
  out << "  wrote " << file.string() << "\n";
  return run.certificate.verified ? 0 : 2;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto [j0, j1] = cfg.J_range.value_or(std::pair{cfg.J, cfg.J});
  CsvTable table;
  table.header = {"J", "omega", "r0", "verified", "time_s"};
  Series radii{cfg.problem, {}, {}};
  bool all = true;
  std::optional<SolveResult> warm;
  for (int J = j0; J <= j1; ++J) {
    LevelRun run = run_level(cfg, J, warm);
    const Certificate& c = run.certificate;
    print_summary(c, out);
    write_json(to_json(c), cfg.out / ("certificate_" + tag(cfg, J) + ".json"));
    table.add_row({std::to_string(J), format_double(c.omega), c.r0 ? format_double(*c.r0) : "nan",
                   c.verified ? "1" : "0", format_double(c.wall_time_s)});
    if (c.verified) {
      radii.x.push_back(J);
      radii.y.push_back(*c.r0);
    }
    all = all && c.verified;
    warm = std::move(run.solution);
  }
  const auto base = cfg.out / ("scan_" + cfg.problem);
  write_csv(table, base.string() + ".csv");
  write_text(svg_plot({radii}, "verification radius", "J", "r0", true), base.string() + ".svg");
  out << "wrote " << base.string() << ".csv\n";
  return all ? 0 : 2;
}

int cmd_oracle(const RunConfig& cfg, const std::string& what, std::ostream& out) {
  const int J = cfg.J;
  const std::uint64_t M = order_for_level(J);
  auto matrix_table = [&](auto entry, const std::string& name) {
    if (J > 6) throw ConfigError("exact operator tables are limited to J <= 6");
    CsvTable t;
    t.header = {"i", "l", "exact", "lo", "hi"};
    for (std::uint64_t i = 1; i <= M; ++i)
      for (std::uint64_t l = 1; l <= M; ++l) {
        oracle::QuadSurd v = entry(i, l);
        Interval e = v.enclose();
        t.add_row({std::to_string(i), std::to_string(l), v.str(), format_double(e.lo()), format_double(e.hi())});
      }
    const auto file = cfg.out / ("oracle_" + name + "_J" + std::to_string(J) + ".csv");
    write_csv(t, file);
    out << "wrote " << file.string() << "\n";
  };
  if (what == "P" || what == "all")
    matrix_table([](auto i, auto l) { return oracle::integral_P_entry(i, l); }, "P");
  if (what == "Gamma" || what == "all")
    matrix_table([](auto i, auto l) { return oracle::integral_Gamma_entry(i, l); }, "Gamma");
  if (what == "logistic" || what == "all") {
    Eigen::VectorXd c = oracle::logistic_reference_coeffs(cfg.lambda, cfg.u0, J);
    CsvTable t;
    t.header = {"i", "coefficient"};
    for (Index i = 0; i < c.size(); ++i) t.add_row({std::to_string(i + 1), format_double(c(i))});
    const auto file = cfg.out / ("oracle_logistic_J" + std::to_string(J) + ".csv");
    write_csv(t, file);
    out << "wrote " << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Haar wavelet collocation with interval-verified error radii"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const std::vector<std::string> keys = {"problem", "lambda", "u0",         "sigma", "rho",      "beta",
                                         "ic",      "J",      "J-range",    "omega", "omega-grid", "tol",
                                         "max-iter", "out",   "cache-dir"};
  std::map<std::string, std::string> given;
  std::string config_file;
  bool cache = false;
  std::string oracle_table = "all";

  auto add_common = [&](CLI::App* sub) {
    for (const std::string& k : keys) sub->add_option("--" + k, given[k]);
    sub->add_flag("--cache", cache, "store and reuse operator matrices on disk");
    sub->add_option("--config", config_file, "key=value file, or a certificate JSON to rerun");
  };
  CLI::App* solve = app.add_subcommand("solve", "Newton solve and write the solution CSV/SVG");
  CLI::App* verify = app.add_subcommand("verify", "solve, bound and certify at one level");
  CLI::App* scan = app.add_subcommand("scan", "verify over a range of levels");
  CLI::App* orc = app.add_subcommand("oracle", "reference tables from exact integrals");
  for (CLI::App* s : {solve, verify, scan, orc}) add_common(s);
  orc->add_option("--table", oracle_table, "P, Gamma, logistic or all")
      ->check(CLI::IsMember({"P", "Gamma", "logistic", "all"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) load_config_file(cfg, config_file);
    for (const std::string& k : keys) {
      CLI::App* sub = app.get_subcommands().front();
      if (sub->count("--" + k)) cfg.set(k, given[k]);
    }
    if (cache) cfg.cache = true;
    cfg.validate();
    std::filesystem::create_directories(cfg.out);
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (scan->parsed()) return cmd_scan(cfg, out);
    return cmd_oracle(cfg, oracle_table, out);
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << "\n  residual history:";
    for (double r : e.residual_history) err << ' ' << r;
    err << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace haarverify
