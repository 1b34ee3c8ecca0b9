#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavcool/errors.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kSaturation = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace cavcool;
  CLI::App app{"Cavity-mediated laser cooling: rate equations, reduced models and a master-equation oracle"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", cli::kVersion);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("-s,--set", overrides, "override a key (key=value), repeatable");
  app.add_option("-o,--output", output, "output file (same as --set output=FILE)");

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"derive", "print the moment equations and dropped couplings; output=FILE also writes the matrix"},
      {"simulate", "integrate the selected model and write a trajectory CSV"},
      {"steady", "steady state of the selected model"},
      {"analyze", "cooling rate, transition rates, stationary phonon number and optimal detuning"},
      {"stability", "spectrum of the weak-confinement matrix; output=FILE writes a shifted trajectory"},
      {"sweep", "grid of m_ss and gamma_c over one or two parameters"},
      {"oracle", "master-equation trajectory on a truncated Fock space"},
      {"compare", "25-moment, analytic and optionally oracle m(t) side by side"},
      {"keys", "list configuration keys and defaults"},
  };
  for (const auto& e : entries) app.add_subcommand(e.name, e.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "keys") return cli::cmd_keys(std::cout);

  try {
    cli::RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (!output.empty()) cfg.set("output", output, "--output");

    if (command == "derive") return cli::cmd_derive(cfg);
    if (command == "simulate") return cli::cmd_simulate(cfg);
    if (command == "steady") return cli::cmd_steady(cfg);
    if (command == "analyze") return cli::cmd_analyze(cfg);
    if (command == "stability") return cli::cmd_stability(cfg);
    if (command == "sweep") return cli::cmd_sweep(cfg);
    if (command == "oracle") return cli::cmd_oracle(cfg);
    if (command == "compare") return cli::cmd_compare(cfg);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const CutoffSaturation& e) {
    std::cerr << "cutoff saturation: " << e.what() << '\n';
    return kSaturation;
  } catch (const InvalidParams& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const DivisionByZero& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const CutoffTooSmall& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const DimensionOverflow& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
