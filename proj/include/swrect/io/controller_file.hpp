#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "swrect/design/design.hpp"
#include "swrect/io/plant_file.hpp"

namespace swrect::io {

inline constexpr const char* kToolVersion = "swrect 0.3.0";

struct Provenance {
  std::string plant_name;
  std::uint64_t seed = 42;
  int max_retries = 16;
  double max_condition = 1e8;
  double tol = 1e-6;
};

/// Everything needed to re-run verification without the original plant file.
struct ControllerFile {
  design::Controller controller;
  sysmodel::SwitchedPlant plant;
  std::optional<numlin::Vector> x0;
  std::optional<SwitchingSpec> switching;
  Provenance provenance;
};

/// 17 significant digits, so that parsing returns the identical double.
std::string format_double(double v);
double parse_double(const nlohmann::json& j, const std::string& what);

nlohmann::json matrix_to_json(const numlin::Matrix& m);
nlohmann::json vector_to_json(const numlin::Vector& v);

nlohmann::json controller_to_json(const ControllerFile& f);
/// Throws ParseError on malformed or mismatched content.
ControllerFile controller_from_json(const nlohmann::json& j);

}  // namespace swrect::io
