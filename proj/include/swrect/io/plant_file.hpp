#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swrect/sysmodel/plant.hpp"

namespace swrect::io {

inline constexpr int kSchemaVersion = 1;

/// Eigenvalue plan as written in a plant file or on the command line.
struct PlanSpec {
  std::vector<int> partition;
  std::map<std::pair<int, int>, std::vector<exact::BigRational>> eigenvalues;  // (q,k)
  std::optional<std::vector<int>> pair0;  // L_{2,0} index paired with each L_{1,0} entry
};

struct SwitchingSpec {
  double dwell1 = 0.3;
  double dwell2 = 0.1;
  double horizon = 3.0;
};

struct PlantFile {
  std::string name;
  sysmodel::SwitchedPlant plant;
  exact::QMatrix r_exact;  // p x 1
  numlin::Vector r;
  std::optional<numlin::Vector> x0;
  std::optional<PlanSpec> plan;
  std::optional<SwitchingSpec> switching;
};

/// A JSON number or a decimal/fraction string, read exactly.
exact::BigRational parse_scalar(const nlohmann::json& j);
exact::QMatrix parse_matrix(const nlohmann::json& j, const std::string& what);
exact::QMatrix parse_vector(const nlohmann::json& j, const std::string& what);

/// "q,k" keys as used by plant files and --eig flags.
std::pair<int, int> parse_qk(const std::string& key);

PlanSpec parse_plan(const nlohmann::json& j);
SwitchingSpec parse_switching(const nlohmann::json& j);

/// Throws ParseError on malformed input.
PlantFile parse_plant(const nlohmann::json& j);
PlantFile load_plant_file(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

/// Exact rational rendering used in written files ("-44/3", "7").
nlohmann::json exact_to_json(const exact::QMatrix& m);
nlohmann::json plant_to_json(const sysmodel::SwitchedPlant& plant);
sysmodel::SwitchedPlant plant_from_json(const nlohmann::json& j);

}  // namespace swrect::io
