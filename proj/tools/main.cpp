#include <iostream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Photon wave-mechanics checks and data products"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  std::string out = "out";
  int threads = 0;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "replaces every seed in the config");
  for (const auto& name : pwm_cli::command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    pwm_cli::Scenario sc = pwm_cli::load_scenario(config, seed);
    const int code = pwm_cli::run_command(command, sc, out);
    std::cout << command << ": " << (code == 0 ? "pass" : "FAIL") << " (" << out << "/" << command << ".json)\n";
    return code;
  } catch (const pwm_cli::ConfigError& e) {
    std::cerr << command << ": config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // library argument checks (grid mismatch, label mismatch, capacity) trace back to the config
    std::cerr << command << ": error: " << e.what() << "\n";
    return 2;
  }
}
