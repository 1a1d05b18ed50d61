// sdc: command-line runner for the superdense-coding experiments.
//
//   sdc <command> [--d N] [--d_a N[,N...]] [--epsilon E] [--trials N]
//       [--ensemble_size N] [--seed S] [--state mes|product|haar|file:PATH]
//       [--l N] [--output json|csv|pretty] [--out PATH]
//
// Exit status: 0 completed (protocol failures are data), 2 usage error,
// 3 domain error, 4 input error, 5 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sdc/experiment.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kDomainError = 3;
constexpr int kInputError = 4;
constexpr int kIoError = 5;

}  // namespace

int main(int argc, char** argv) {
  sdc::ExperimentConfig config;
  std::string command;
  std::string output = "json";
  std::string out_path;
  std::vector<long long> d_a{16};

  CLI::App app{"Superdense coding of quantum states: protocol and concentration experiments"};
  app.add_option("command", command,
                 "exact | randomized | share | tail | flat-fraction | bounds | resources")
      ->required();
  app.add_option("--d", config.d, "Reference (B-side) dimension d")->capture_default_str();
  app.add_option("--d_a,--d-a", d_a, "Alice-side output dimension(s); tail sweeps over a list")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--epsilon", config.epsilon, "Flatness parameter in (0, 1]")
      ->capture_default_str();
  app.add_option("--trials", config.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--ensemble_size,--ensemble-size", config.ensemble_size,
                 "Number of shared isometries n")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed (falls back to $SDC_SEED)")
      ->envname("SDC_SEED")
      ->capture_default_str();
  app.add_option("--state", config.state, "mes | product | haar | file:<path>")
      ->capture_default_str();
  app.add_option("--l", config.l, "Half the qubit count of the state (resources)")
      ->capture_default_str();
  app.add_option("--output", output, "json | csv | pretty")->capture_default_str();
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
    config.command = sdc::command_from_string(command);
    config.output = sdc::output_format_from_string(output);
    config.d_a.assign(d_a.begin(), d_a.end());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const sdc::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  std::string text;
  try {
    text = sdc::write_report(sdc::run(config), config.output);
  } catch (const sdc::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const sdc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomainError;
  }

  if (out_path.empty()) {
    std::cout << text;
    return std::cout.good() ? 0 : kIoError;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!(file << text)) {
    std::cerr << "I/O error: cannot write '" << out_path << "'\n";
    return kIoError;
  }
  return 0;
}
