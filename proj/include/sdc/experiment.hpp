#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdc/linalg.hpp"

namespace sdc {

enum class Command { exact, randomized, share, tail, flat_fraction, bounds, resources };
enum class OutputFormat { json, csv, pretty };

// A state file could not be read or parsed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Values outside their documented range. `flag` names the offending option.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string flag, const std::string& message)
      : std::invalid_argument("--" + flag + ": " + message), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

struct ExperimentConfig {
  Command command = Command::exact;
  Index d = 2;
  // Alice-side output dimension(s). tail sweeps over every value; the other
  // commands use the first.
  std::vector<Index> d_a{16};
  double epsilon = 0.5;
  std::size_t trials = 2000;
  std::size_t ensemble_size = 64;
  std::uint64_t seed = 0;
  // mes | product | haar | file:<path>
  std::string state = "product";
  OutputFormat output = OutputFormat::json;
  long long l = 10;  // resources only
};

std::string to_string(Command c);
Command command_from_string(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

// Range checks; throws ConfigError naming the flag.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

struct Report {
  nlohmann::json document;  // {"config": ..., "results": ...}
  std::vector<std::string> csv_header;
  std::vector<nlohmann::json> csv_rows;
};

// Executes the configured experiment. Deterministic in the full config.
Report run(const ExperimentConfig& config);

std::string write_report(const Report& report, OutputFormat format);

}  // namespace sdc
