#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fracwell/evolve.hpp"
#include "fracwell/functionals.hpp"

namespace fracwell {

enum class InitialKind { GaussianBump, Hat, RandomSmooth, FromFile };

struct InitialSpec {
  InitialKind kind = InitialKind::GaussianBump;
  double center = 0.0;
  double width = 0.25;
  double scale = 1.0;
  double phase = 0.0;
  std::uint64_t seed = 1;
  std::string path;
};

struct RunConfig {
  ProblemParams problem;
  InitialSpec initial;
  StepperOptions evolve;
  WellOptions wells;
  int ground_iters = 20000;
  double ground_tol = 1e-6;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  bool deterministic = false;
  std::vector<std::string> warnings;
};

// Flat `key = value` text with `#` comments. Collects every problem before
// throwing ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical key=value lines for every setting (a config echo).
std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& cfg);

// Sobolev critical exponent N q / (N - s q) in one dimension, infinite when s q >= 1.
double sobolev_critical_exponent(double q, double s);

// Builds u0 from the initial-data settings; relative file paths resolve against `base`.
Field make_initial(const RunConfig& cfg, const std::filesystem::path& base = {});

}  // namespace fracwell
