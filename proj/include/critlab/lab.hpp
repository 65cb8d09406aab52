#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "critlab/precision.hpp"

namespace critlab::lab {

struct WindowConfig {
  double center_re = 0.5;
  double center_im = 0.0;
  double width = 1.2;
  double height = 1.2;

  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

struct ExperimentConfig {
  std::string command;
  std::string family = "arnold";
  double c = 0.0;
  std::optional<double> theta;
  std::optional<std::string> target;
  int depth = 12;
  std::optional<int> level;               // domains default 4, cubicfit default 6
  double tol = 1e-10;
  Precision precision = Precision::Double;
  std::string out = ".";
  std::uint64_t seed = 0;

  std::string side = "both";              // tongue: left | right | both
  std::optional<double> reference_c;       // renorm: two-harmonic reference
  std::vector<double> eps{1e-2, 1e-3, 1e-4};  // parabolic phase experiment
  std::int64_t budget = 200;               // julia iterations
  double escape_im = 4.0;
  std::optional<WindowConfig> window;
  int resolution = 400;
  double radius_factor = 4.0;              // domains: R = factor * |I_n|
  std::int64_t k = 0;                      // gamma
  int sign = 1;
  double im_max = 3.0;
  int im_count = 60;
  std::size_t samples = 800;
  bool inject_fault = false;               // check: deliberately failing assertion

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

extern const std::vector<std::string> kCommands;

// Throws ParameterError on unknown fields, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
  ExperimentConfig config;
  Precision precision_used = Precision::Double;
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  std::vector<std::string> files;
  double wall_seconds = 0.0;

  bool passed() const;
  nlohmann::json to_json() const;
};

// 17 significant digits, '.' decimal point, locale independent.
std::string format_number(double x);
void write_csv(std::ostream& os, const Table& t);

// Runs the command and writes its files (CSV tables, PPM grids, report JSON)
// into cfg.out. Library exceptions propagate.
ExperimentReport run(const ExperimentConfig& cfg);

// 0 pass, 1 assertion failure, 2 usage/config error, 3 numerical failure.
enum ExitCode : int { kPass = 0, kAssertionFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

}  // namespace critlab::lab
