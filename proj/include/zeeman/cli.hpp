#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeeman/protocols.hpp"

namespace zeeman::cli {

enum class Command { evolve, verify, epr, exchange, transfer, feedback };
enum class Format { csv, json };

enum ExitCode : int {
  kSuccess = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kToleranceFailure = 3,
  kIoError = 4,
};

inline constexpr int kSchemaVersion = 1;
inline constexpr double kVerifyTolerance = 1e-10;

/// Points are start + k (stop - start) / (steps - 1); steps == 1 is the single point start.
struct TimeGrid {
  double start = 0.0;
  double stop = 10.0;
  int steps = 1001;

  std::vector<double> points() const;
};

struct RunConfig {
  Command command = Command::evolve;
  PhysicalParams params;
  TimeGrid grid;
  int n_period = 1;
  cplx c1{1.0 / 1.4142135623730951, 0.0};
  cplx c2{1.0 / 1.4142135623730951, 0.0};
  int cycles = 20;
  double drift = 0.01;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::array<int, 3> initial{0, 1, -1};  ///< photons, m1, m2
  std::string out;                       ///< empty writes to stdout
  Format format = Format::json;
  bool parallel = false;
  std::optional<OperatorMatrix> coupling;  ///< evolve only: replaces the standard coupling
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(Command c);
Command command_from_string(const std::string& s);
std::string to_string(Format f);
Format format_from_string(const std::string& s);

/// Default configuration for a command (evolve starts on the grid 0..10, verify on
/// 1001 points over gt in [0, 10]).
RunConfig default_config(Command c);

/// Overlays the fields present in `j` onto `base`. Errors name the offending field.
RunConfig merge_config(RunConfig base, const nlohmann::json& j);
/// Parses a JSON config file; parse errors carry line and column.
nlohmann::json load_config_file(const std::string& path);
/// Throws ConfigError on an invalid field.
void validate(const RunConfig& config);
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const ProtocolReport& report);
ProtocolReport report_from_json(const nlohmann::json& j);

/// Serialized output of a run, byte-stable for a fixed configuration.
struct RunOutput {
  std::string text;
  int status = kSuccess;
};

/// Executes the configured command and serializes its result.
RunOutput execute(const RunConfig& config);

/// CSV or JSON document for one or more protocol reports.
std::string emit(const std::vector<ProtocolReport>& reports, Format format,
                 const nlohmann::json& config);

/// execute + write to config.out (or stdout); returns the exit status. Error messages
/// go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace zeeman::cli
