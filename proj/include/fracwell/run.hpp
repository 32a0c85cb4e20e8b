#pragma once

// Subcommand orchestration behind the `fracwell` executable.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracwell/config.hpp"
#include "fracwell/io.hpp"

namespace fracwell {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitIo = 3, kExitInvariant = 4 };

struct CliOptions {
  std::string subcommand;  // simulate | wells | groundstate | analyze | verify
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> trace;  // analyze input
  bool deterministic = false;
};

// Runs one subcommand, mapping library exceptions to exit codes.
int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateResult {
  Trajectory trajectory;
  EnergyReport initial;
  WellConstants wells;
  WellClass initial_class = WellClass::W;
  Report report;
};

// Library entry points used by run_cli; they write into `dir` and return what they wrote.
SimulateResult run_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                            const std::filesystem::path& base = {});
Report run_wells(const RunConfig& cfg, const std::filesystem::path& dir);
Report run_groundstate(const RunConfig& cfg, const std::filesystem::path& dir,
                       const std::filesystem::path& base = {});
Report run_analyze(const RunConfig& cfg, const Trace& trace, const std::filesystem::path& dir);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Property suite behind `fracwell verify`, sized to finish in seconds.
std::vector<CheckResult> verify_suite(const RunConfig& cfg);

}  // namespace fracwell
