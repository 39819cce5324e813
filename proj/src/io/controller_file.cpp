#include "swrect/io/controller_file.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "swrect/errors.hpp"

namespace swrect::io {

using nlohmann::json;
using numlin::Matrix;
using numlin::Vector;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ParseError(what + ": expected a number");
  const std::string s = j.get<std::string>();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
    throw ParseError(what + ": cannot read '" + s + "' as a number");
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(format_double(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(format_double(v(i)));
  return out;
}

namespace {

Matrix matrix_from(const json& j, const std::string& what, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) throw ParseError(what + ": wrong row count");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(what + ": wrong column count in row " + std::to_string(i + 1));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = parse_double(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

Vector vector_from(const json& j, const std::string& what, Eigen::Index size) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw ParseError(what + ": expected " + std::to_string(size) + " entries");
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = parse_double(j[static_cast<std::size_t>(i)], what);
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("controller file lacks '") + key + "'");
  return j.at(key);
}

json plan_to_json(const design::EigenPlan& plan) {
  json eig = json::object();
  for (const auto& [qk, values] : plan.L) {
    json list = json::array();
    for (const auto& v : values) list.push_back(v.to_string());
    eig[std::to_string(qk.first) + "," + std::to_string(qk.second)] = std::move(list);
  }
  return {{"partition", plan.partitioning.d}, {"eigenvalues", std::move(eig)}, {"pair0", plan.pair0}};
}

}  // namespace

json controller_to_json(const ControllerFile& f) {
  const design::Controller& c = f.controller;
  json cols = json::array();
  for (const auto& [k, i] : c.columns) cols.push_back({k, i});
  json j = {
      {"schema_version", kSchemaVersion},
      {"kind", "controller"},
      {"provenance",
       {{"tool", kToolVersion},
        {"plant_name", f.provenance.plant_name},
        {"seed", f.provenance.seed},
        {"max_retries", f.provenance.max_retries},
        {"max_condition", format_double(f.provenance.max_condition)},
        {"tol", format_double(f.provenance.tol)}}},
      {"mode", design::to_string(c.mode)},
      {"plant", plant_to_json(f.plant)},
      {"plan", plan_to_json(c.plan)},
      {"columns", std::move(cols)},
      {"V", matrix_to_json(c.V)},
      {"F1", matrix_to_json(c.F1)},
      {"F2", matrix_to_json(c.F2)},
      {"G1", vector_to_json(c.G1)},
      {"G2", vector_to_json(c.G2)},
      {"r", vector_to_json(c.ss.r)},
      {"x_ss", vector_to_json(c.ss.x_ss)},
      {"u1_ss", vector_to_json(c.ss.u1_ss)},
      {"u2_ss", vector_to_json(c.ss.u2_ss)},
      {"condition", format_double(c.condition)},
      {"rectification_residual", format_double(c.rectification_residual)},
      {"attempts", c.attempts},
  };
  if (f.x0) j["x0"] = vector_to_json(*f.x0);
  if (f.switching)
    j["switching"] = {{"type", "periodic"},
                      {"dwell", {format_double(f.switching->dwell1), format_double(f.switching->dwell2)}},
                      {"horizon", format_double(f.switching->horizon)}};
  return j;
}

ControllerFile controller_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("controller file must be a JSON object");
  if (field(j, "schema_version") != kSchemaVersion)
    throw ParseError("unsupported schema_version " + field(j, "schema_version").dump());
  if (field(j, "kind") != "controller") throw ParseError("file is not a controller file");

  ControllerFile f{{}, plant_from_json(field(j, "plant")), std::nullopt, std::nullopt, {}};
  const auto n = static_cast<Eigen::Index>(f.plant.n());
  const auto m = static_cast<Eigen::Index>(f.plant.m());
  const auto p = static_cast<Eigen::Index>(f.plant.p());

  const json& prov = field(j, "provenance");
  f.provenance.plant_name = field(prov, "plant_name").get<std::string>();
  f.provenance.seed = field(prov, "seed").get<std::uint64_t>();
  f.provenance.max_retries = field(prov, "max_retries").get<int>();
  f.provenance.max_condition = parse_double(field(prov, "max_condition"), "max_condition");
  f.provenance.tol = parse_double(field(prov, "tol"), "tol");

  design::Controller& c = f.controller;
  c.mode = design::parse_mode(field(j, "mode").get<std::string>());
  const PlanSpec spec = parse_plan(field(j, "plan"));
  try {
    c.plan = design::EigenPlan::make(design::Partitioning{spec.partition}, spec.eigenvalues, spec.pair0);
  } catch (const CompatibilityError& e) {
    throw ParseError(std::string("controller plan: ") + e.what());
  }
  for (const json& col : field(j, "columns")) {
    if (!col.is_array() || col.size() != 2) throw ParseError("columns: expected [k, i] pairs");
    c.columns.emplace_back(col[0].get<int>(), col[1].get<int>());
  }
  if (static_cast<Eigen::Index>(c.columns.size()) != n) throw ParseError("columns: expected one entry per state");

  c.V = matrix_from(field(j, "V"), "V", n, n);
  c.F1 = matrix_from(field(j, "F1"), "F1", m, n);
  c.F2 = matrix_from(field(j, "F2"), "F2", m, n);
  c.G1 = vector_from(field(j, "G1"), "G1", m);
  c.G2 = vector_from(field(j, "G2"), "G2", m);
  c.C = f.plant.C();
  c.ss.r = vector_from(field(j, "r"), "r", p);
  c.ss.x_ss = vector_from(field(j, "x_ss"), "x_ss", n);
  c.ss.u1_ss = vector_from(field(j, "u1_ss"), "u1_ss", m);
  c.ss.u2_ss = vector_from(field(j, "u2_ss"), "u2_ss", m);
  c.condition = parse_double(field(j, "condition"), "condition");
  c.rectification_residual = parse_double(field(j, "rectification_residual"), "rectification_residual");
  c.attempts = field(j, "attempts").get<int>();

  if (j.contains("x0")) f.x0 = vector_from(j["x0"], "x0", n);
  if (j.contains("switching")) {
    const json& s = j["switching"];
    const json& dwell = field(s, "dwell");
    if (!dwell.is_array() || dwell.size() != 2) throw ParseError("switching.dwell: expected two durations");
    f.switching = SwitchingSpec{parse_double(dwell[0], "dwell"), parse_double(dwell[1], "dwell"),
                                parse_double(field(s, "horizon"), "horizon")};
  }
  return f;
}

}  // namespace swrect::io
