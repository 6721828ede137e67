#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cmtheta/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verification pipelines for theta bases, eta transforms, Fourier-Jacobi series and boundary charts"};
  app.require_subcommand(1, 1);

  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> quad_n, r_max;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out, "JSON report path");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--tol", tol, "tolerance override");
  app.add_option("--quad-n", quad_n, "quadrature points per lattice direction");
  app.add_option("--r-max", r_max, "largest level");
  app.fallthrough();

  for (const auto& name : cmtheta::harness::subcommand_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string name = app.get_subcommands().front()->get_name();
  cmtheta::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = cmtheta::RunConfig::from_key_values(cmtheta::load_key_values(config_path));
  } catch (const cmtheta::error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (!out.empty()) cfg.out = out;
  if (seed) cfg.seed = *seed;
  if (tol) cfg.tol = *tol;
  if (quad_n) cfg.quad_n = *quad_n;
  if (r_max) cfg.r_max = *r_max;

  cmtheta::RunResult res = cmtheta::run_subcommand(name, cfg);
  if (cfg.out.empty() || res.exit_code == 2)
    std::cout << res.report.dump(2) << '\n';
  else
    std::cout << name << ": " << (res.exit_code == 0 ? "pass" : "FAIL") << " -> " << cfg.out << '\n';
  if (res.exit_code != 0) std::cerr << res.first_failure << '\n';
  return res.exit_code;
}
