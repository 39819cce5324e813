#include "swrect/io/plant_file.hpp"

#include <fstream>
#include <sstream>

#include "swrect/errors.hpp"

namespace swrect::io {

using exact::BigRational;
using exact::QMatrix;
using nlohmann::json;

BigRational parse_scalar(const json& j) {
  try {
    if (j.is_number_integer()) return BigRational(j.get<long>());
    if (j.is_number_unsigned()) return BigRational(static_cast<long>(j.get<unsigned long>()));
    if (j.is_number_float()) return BigRational::from_double_decimal(j.get<double>());
    if (j.is_string()) return BigRational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad number: ") + e.what());
  }
  throw ParseError("expected a number or numeric string, got " + j.dump());
}

QMatrix parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw ParseError(what + " must be an array of rows");
  const std::size_t cols = j[0].size();
  QMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError(what + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) out(i, c) = parse_scalar(j[i][c]);
  }
  return out;
}

QMatrix parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  QMatrix out(j.size(), 1);
  for (std::size_t i = 0; i < j.size(); ++i) out(i, 0) = parse_scalar(j[i]);
  return out;
}

std::pair<int, int> parse_qk(const std::string& key) {
  int q = 0, k = 0;
  char comma = 0;
  std::istringstream is(key);
  if (!(is >> q >> comma >> k) || comma != ',' || !is.eof() || (q != 1 && q != 2) || k < 0)
    throw ParseError("eigenvalue key must be \"q,k\" with q in {1,2}: '" + key + "'");
  return {q, k};
}

PlanSpec parse_plan(const json& j) {
  PlanSpec plan;
  try {
    plan.partition = j.at("partition").get<std::vector<int>>();
    for (const auto& [key, vals] : j.at("eigenvalues").items()) {
      std::vector<BigRational> list;
      for (const auto& v : vals) list.push_back(parse_scalar(v));
      plan.eigenvalues[parse_qk(key)] = std::move(list);
    }
    if (j.contains("pair0")) plan.pair0 = j.at("pair0").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad plan: ") + e.what());
  }
  return plan;
}

SwitchingSpec parse_switching(const json& j) {
  SwitchingSpec s;
  try {
    if (j.value("type", std::string("periodic")) != "periodic")
      throw ParseError("only periodic switching is supported");
    const auto dwell = j.at("dwell");
    if (!dwell.is_array() || dwell.size() != 2) throw ParseError("dwell needs two durations");
    s.dwell1 = parse_scalar(dwell[0]).to_double();
    s.dwell2 = parse_scalar(dwell[1]).to_double();
    s.horizon = parse_scalar(j.at("horizon")).to_double();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad switching block: ") + e.what());
  }
  return s;
}

sysmodel::SwitchedPlant plant_from_json(const json& j) {
  for (const char* key : {"A1", "B1", "A2", "B2", "C"})
    if (!j.contains(key)) throw ParseError(std::string("missing matrix ") + key);
  try {
    return sysmodel::SwitchedPlant::from_exact(parse_matrix(j["A1"], "A1"), parse_matrix(j["B1"], "B1"),
                                               parse_matrix(j["A2"], "A2"), parse_matrix(j["B2"], "B2"),
                                               parse_matrix(j["C"], "C"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent plant: ") + e.what());
  }
}

PlantFile parse_plant(const json& j) {
  if (!j.is_object()) throw ParseError("plant file must be a JSON object");
  if (j.value("schema_version", kSchemaVersion) != kSchemaVersion)
    throw ParseError("unsupported schema_version");
  sysmodel::SwitchedPlant plant = plant_from_json(j);
  if (!j.contains("r")) throw ParseError("missing reference r");
  QMatrix r = parse_vector(j["r"], "r");
  if (static_cast<Eigen::Index>(r.rows()) != plant.p()) throw ParseError("r must have p entries");
  PlantFile f{j.value("name", std::string()), std::move(plant), r, numlin::to_eigen(r).col(0),
              std::nullopt, std::nullopt, std::nullopt};
  if (j.contains("x0")) {
    QMatrix x0 = parse_vector(j["x0"], "x0");
    if (static_cast<Eigen::Index>(x0.rows()) != f.plant.n()) throw ParseError("x0 must have n entries");
    f.x0 = numlin::to_eigen(x0).col(0);
  }
  if (j.contains("plan")) f.plan = parse_plan(j["plan"]);
  if (j.contains("switching")) f.switching = parse_switching(j["switching"]);
  return f;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

PlantFile load_plant_file(const std::filesystem::path& path) { return parse_plant(read_json(path)); }

json exact_to_json(const QMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

json plant_to_json(const sysmodel::SwitchedPlant& plant) {
  json j = json::object();
  j["A1"] = exact_to_json(plant.sub(1).A_exact);
  j["B1"] = exact_to_json(plant.sub(1).B_exact);
  j["A2"] = exact_to_json(plant.sub(2).A_exact);
  j["B2"] = exact_to_json(plant.sub(2).B_exact);
  j["C"] = exact_to_json(plant.C_exact());
  return j;
}

}  // namespace swrect::io
