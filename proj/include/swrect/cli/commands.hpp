#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swrect/design/design.hpp"
#include "swrect/io/controller_file.hpp"
#include "swrect/io/plant_file.hpp"
#include "swrect/simulate/simulate.hpp"

namespace swrect::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kBadInput = 2,  // parse and compatibility errors
  kInfeasible = 3,
  kRado = 4,
  kSelection = 5,
};

/// Command-line overrides; unset fields fall back to the input file.
struct Flags {
  std::optional<design::Mode> mode;
  std::uint64_t seed = 42;
  double tol = simulate::kShapeTol;
  std::optional<std::vector<int>> partition;
  std::map<std::pair<int, int>, std::vector<exact::BigRational>> eig;
  std::optional<std::vector<int>> pair0;
  std::optional<std::pair<double, double>> dwell;
  std::optional<double> horizon;
  std::optional<std::vector<double>> x0;
  double rk4_step = 1e-4;
  int decay_signals = 100;
};

/// "0,3,3,1"
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
/// "q,k=v1,v2,..." with rational or decimal values.
std::pair<std::pair<int, int>, std::vector<exact::BigRational>> parse_eig_flag(const std::string& text);
/// "periodic:0.3,0.1"
std::pair<double, double> parse_switch_flag(const std::string& text);

struct Outcome {
  int exit_code = kOk;
  std::string diagnostic;  // one line for stderr when exit_code != 0
  nlohmann::json report;
  std::optional<nlohmann::json> controller;
  std::optional<simulate::Trajectory> trajectory;
};

/// Exit code and message for an exception thrown by the library; synthesis
/// failures are classified by their underlying cause.
std::pair<int, std::string> classify(const std::exception_ptr& e);

Outcome cmd_analyze(const io::PlantFile& file, const Flags& flags);
Outcome cmd_synthesize(const io::PlantFile& file, const Flags& flags);
Outcome cmd_verify(const io::ControllerFile& file, const Flags& flags);

/// Reads the file and runs the command, turning every failure into an
/// Outcome with the matching exit code.
Outcome run_analyze(const std::string& plant_path, const Flags& flags);
Outcome run_synthesize(const std::string& plant_path, const Flags& flags);
Outcome run_verify(const std::string& controller_path, const Flags& flags);

/// Stable rendering used for every written report.
std::string dump(const nlohmann::json& j);

}  // namespace swrect::cli
