#include "swrect/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "swrect/errors.hpp"

namespace swrect::cli {

using nlohmann::json;
using numlin::Matrix;
using numlin::Vector;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

json numbers(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json numbers(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(numbers(Vector(m.row(i).transpose())));
  return rows;
}

json provenance(const std::string& plant_name, const Flags& flags) {
  return {{"tool", io::kToolVersion}, {"plant_name", plant_name}, {"seed", flags.seed},
          {"tol", flags.tol}, {"rk4_step", flags.rk4_step}};
}

json failure_report(const char* kind, int code, const std::string& message) {
  return {{"schema_version", io::kSchemaVersion},
          {"kind", kind},
          {"error", {{"exit_code", code}, {"message", message}}}};
}

std::vector<int> exact_d(const rectify::RectificationAnalysis& ra) {
  std::vector<int> d;
  for (int k = 0; k <= static_cast<int>(ra.plant().p()); ++k) d.push_back(ra.d_k_exact(k));
  return d;
}

json stop_diagnostic(int n, const std::vector<int>& d) {
  int reach = d.front();
  for (std::size_t k = 1; k < d.size(); ++k) reach += std::min(3, d[k]);
  std::ostringstream os;
  os << "d_0 + sum min(3, d_k) = " << reach << " < n = " << n;
  return {{"reach", reach}, {"n", n}, {"message", os.str()}};
}

/// Closed-loop spectra against the plan and the C_(k)-nulling of each column.
json eigen_checks(const design::Controller& c, const sysmodel::SwitchedPlant& plant) {
  double spectrum_error = 0.0;
  for (int q : {1, 2}) {
    const Matrix closed = plant.sub(q).A + plant.sub(q).B * c.F(q);
    Eigen::EigenSolver<Matrix> es(closed, false);
    std::vector<double> got;
    double imag = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      got.push_back(es.eigenvalues()(i).real());
      imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
    }
    std::vector<double> want = c.plan.spectrum(q);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < got.size(); ++i) spectrum_error = std::max(spectrum_error, std::abs(got[i] - want[i]));
    spectrum_error = std::max(spectrum_error, imag);
  }
  double nulling = 0.0;
  for (std::size_t col = 0; col < c.columns.size(); ++col) {
    const int k = c.columns[col].first;
    const Vector v = c.V.col(static_cast<Eigen::Index>(col));
    const Matrix ck = plant.selection(k).C;
    if (ck.rows() > 0) nulling = std::max(nulling, (ck * v).norm() / v.norm());
  }
  double equilibrium = 0.0;
  for (int q : {1, 2}) {
    const auto& s = plant.sub(q);
    equilibrium = std::max(equilibrium, ((s.A + s.B * c.F(q)) * c.ss.x_ss + s.B * c.G(q)).norm());
  }
  return {{"spectrum_error", spectrum_error},
          {"nulling", nulling},
          {"rectification_residual", c.rectification_residual},
          {"equilibrium_residual", equilibrium}};
}

json plan_json(const design::EigenPlan& plan) {
  json eig = json::object();
  for (const auto& [qk, values] : plan.L) {
    json list = json::array();
    for (const auto& v : values) list.push_back(v.to_string());
    eig[std::to_string(qk.first) + "," + std::to_string(qk.second)] = std::move(list);
  }
  return {{"partition", plan.partitioning.to_string()}, {"eigenvalues", std::move(eig)}, {"pair0", plan.pair0}};
}

json verdict_json(const design::ShapeVerdict& v) {
  return {{"pass", v.pass}, {"boundary", v.boundary}, {"rule", v.rule}};
}

Outcome guarded(const char* kind, const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (...) {
    auto [code, message] = classify(std::current_exception());
    Outcome out;
    out.exit_code = code;
    out.diagnostic = message;
    out.report = failure_report(kind, code, message);
    return out;
  }
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const std::string s = trim(item);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw ParseError("expected an integer list, got '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(io::parse_double(json(trim(item)), "list entry"));
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

std::pair<std::pair<int, int>, std::vector<exact::BigRational>> parse_eig_flag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ParseError("--eig expects q,k=v1,v2,... but got '" + text + "'");
  std::vector<exact::BigRational> values;
  const std::string rhs = text.substr(eq + 1);
  if (!trim(rhs).empty())
    for (const auto& item : split(rhs, ',')) {
      try {
        values.push_back(exact::BigRational::parse(trim(item)));
      } catch (const std::exception& e) {
        throw ParseError("--eig value '" + item + "': " + e.what());
      }
    }
  return {io::parse_qk(trim(text.substr(0, eq))), std::move(values)};
}

std::pair<double, double> parse_switch_flag(const std::string& text) {
  const std::string prefix = "periodic:";
  if (text.rfind(prefix, 0) != 0) throw ParseError("--switch supports periodic:d1,d2 only");
  const auto d = parse_double_list(text.substr(prefix.size()));
  if (d.size() != 2 || !(d[0] > 0) || !(d[1] > 0)) throw ParseError("--switch needs two positive dwell times");
  return {d[0], d[1]};
}

std::pair<int, std::string> classify(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const SynthesisError& s) {
    if (s.cause()) {
      auto [code, message] = classify(s.cause());
      return {code, "synthesis step " + std::to_string(s.step()) + ": " + message};
    }
    return {kInternal, s.what()};
  } catch (const RadoViolation& r) {
    return {kRado, r.what()};
  } catch (const SelectionFailed& s) {
    return {kSelection, s.what()};
  } catch (const Infeasible& i) {
    return {kInfeasible, i.what()};
  } catch (const Inconsistent& i) {
    return {kInfeasible, i.what()};
  } catch (const ParseError& p) {
    return {kBadInput, p.what()};
  } catch (const CompatibilityError& c) {
    return {kBadInput, c.what()};
  } catch (const SpectrumCollision& c) {
    return {kBadInput, c.what()};
  } catch (const IndexOutOfRange& c) {
    return {kBadInput, c.what()};
  } catch (const SubsetExplosion& c) {
    return {kBadInput, c.what()};
  } catch (const nlohmann::json::exception& j) {
    return {kBadInput, std::string("malformed JSON: ") + j.what()};
  } catch (const std::invalid_argument& a) {
    return {kBadInput, a.what()};
  } catch (const std::exception& x) {
    return {kInternal, x.what()};
  } catch (...) {
    return {kInternal, "unknown failure"};
  }
}

Outcome cmd_analyze(const io::PlantFile& file, const Flags& flags) {
  const auto& plant = file.plant;
  rectify::RectifyOptions ropt;
  ropt.seed = flags.seed;
  rectify::RectificationAnalysis ra(plant, ropt);
  const int n = static_cast<int>(plant.n());
  const int p = static_cast<int>(plant.p());

  Outcome out;
  json& rep = out.report;
  rep["schema_version"] = io::kSchemaVersion;
  rep["kind"] = "analysis";
  rep["provenance"] = provenance(file.name, flags);
  rep["plant"] = {{"name", file.name}, {"n", n}, {"m", plant.m()}, {"p", p}};

  json checks = json::array();
  for (const auto& c : sysmodel::validate(plant, flags.seed).checks)
    checks.push_back({{"name", c.name}, {"status", sysmodel::to_string(c.status)}, {"detail", c.detail}});
  rep["validation"] = std::move(checks);

  try {
    const auto ss = sysmodel::steady_state(plant, file.r);
    rep["steady_state"] = {{"x_ss", numbers(ss.x_ss)}, {"u1_ss", numbers(ss.u1_ss)}, {"u2_ss", numbers(ss.u2_ss)}};
  } catch (const Inconsistent& e) {
    rep["steady_state"] = {{"error", e.what()}};
  }

  const std::vector<int> d = exact_d(ra);
  std::vector<int> sampled;
  for (int k = 0; k <= p; ++k) sampled.push_back(ra.d_k_sampled(k, flags.seed));
  rep["d"] = {{"exact", d}, {"sampled", sampled}, {"agree", d == sampled}};

  json curves = json::array();
  for (int k = 0; k <= p; ++k) {
    if (d[k] == 0) continue;
    const auto locus = ra.pair_locus(k);
    curves.push_back({{"k", k},
                      {"curve", locus->excluded_curve.to_string()},
                      {"l1_factor", locus->l1_lines.to_string()},
                      {"l2_factor", locus->l2_lines.to_string()}});
  }
  rep["excluded_curves"] = std::move(curves);

  json parts = json::object();
  for (design::Mode mode : {design::Mode::NonOvershoot, design::Mode::Monotonic}) {
    json list = json::array();
    for (const auto& part : design::enumerate_partitionings(n, d, mode)) list.push_back(part.to_string());
    parts[design::to_string(mode)] = std::move(list);
  }
  rep["partitionings"] = std::move(parts);

  if (design::feasibility_stop(n, d)) {
    rep["feasible"] = false;
    rep["stop"] = stop_diagnostic(n, d);
    out.exit_code = kInfeasible;
    out.diagnostic = "infeasible: " + rep["stop"]["message"].get<std::string>();
  } else {
    rep["feasible"] = true;
  }
  return out;
}

Outcome cmd_synthesize(const io::PlantFile& file, const Flags& flags) {
  const auto& plant = file.plant;
  const design::Mode mode = flags.mode.value_or(design::Mode::NonOvershoot);
  rectify::RectifyOptions ropt;
  ropt.seed = flags.seed;
  rectify::RectificationAnalysis ra(plant, ropt);
  const int n = static_cast<int>(plant.n());
  const std::vector<int> d = exact_d(ra);
  if (design::feasibility_stop(n, d)) throw Infeasible("infeasible: " + stop_diagnostic(n, d)["message"].get<std::string>());

  io::PlanSpec spec = file.plan.value_or(io::PlanSpec{});
  if (flags.partition) spec.partition = *flags.partition;
  for (const auto& [qk, values] : flags.eig) spec.eigenvalues[qk] = values;
  if (flags.pair0) spec.pair0 = flags.pair0;
  if (spec.partition.empty()) {
    if (mode != design::Mode::Monotonic) throw ParseError("no partition given; pass --partition d0,d1,...");
    const auto parts = design::enumerate_partitionings(n, d, mode);
    if (parts.empty()) throw Infeasible("no monotonic partitioning for this plant");
    spec.partition = parts.front().d;
  }
  const design::EigenPlan plan = design::EigenPlan::make(design::Partitioning{spec.partition}, spec.eigenvalues, spec.pair0);

  design::SynthesisOptions sopt;
  sopt.mode = mode;
  sopt.select.seed = flags.seed;
  design::Controller c = design::synthesize(ra, file.r, plan, sopt);

  io::ControllerFile cf{c, plant, file.x0, file.switching, {}};
  cf.provenance.plant_name = file.name;
  cf.provenance.seed = flags.seed;
  cf.provenance.max_retries = sopt.select.max_retries;
  cf.provenance.max_condition = sopt.select.max_condition;
  cf.provenance.tol = flags.tol;
  if (flags.x0) cf.x0 = Eigen::Map<const Vector>(flags.x0->data(), static_cast<Eigen::Index>(flags.x0->size()));
  if (flags.dwell || flags.horizon) {
    io::SwitchingSpec sw = cf.switching.value_or(io::SwitchingSpec{});
    if (flags.dwell) std::tie(sw.dwell1, sw.dwell2) = *flags.dwell;
    if (flags.horizon) sw.horizon = *flags.horizon;
    cf.switching = sw;
  }

  Outcome out;
  json& rep = out.report;
  rep["schema_version"] = io::kSchemaVersion;
  rep["kind"] = "synthesis";
  rep["provenance"] = provenance(file.name, flags);
  rep["mode"] = design::to_string(mode);
  rep["d"] = d;
  rep["plan"] = plan_json(plan);
  rep["controller"] = {{"F1", numbers(c.F1)}, {"F2", numbers(c.F2)}, {"G1", numbers(c.G1)},
                       {"G2", numbers(c.G2)}, {"V", numbers(c.V)},   {"condition", c.condition},
                       {"attempts", c.attempts}};
  rep["x0_set"] = c.x0_description();
  rep["checks"] = eigen_checks(c, plant);
  out.controller = io::controller_to_json(cf);
  if (cf.x0) {
    Outcome v = cmd_verify(cf, flags);
    rep["verification"] = std::move(v.report);
    out.trajectory = std::move(v.trajectory);
  }
  return out;
}

Outcome cmd_verify(const io::ControllerFile& file, const Flags& flags) {
  const design::Controller& c = file.controller;
  const auto n = c.V.rows();
  Vector x0;
  if (flags.x0) {
    if (static_cast<Eigen::Index>(flags.x0->size()) != n)
      throw ParseError("--x0 needs " + std::to_string(n) + " entries");
    x0 = Eigen::Map<const Vector>(flags.x0->data(), n);
  } else if (file.x0) {
    x0 = *file.x0;
  } else {
    throw ParseError("no initial state; pass --x0 or store x0 in the input file");
  }
  io::SwitchingSpec sw = file.switching.value_or(io::SwitchingSpec{});
  if (flags.dwell) std::tie(sw.dwell1, sw.dwell2) = *flags.dwell;
  if (flags.horizon) sw.horizon = *flags.horizon;
  const simulate::SwitchingSignal sig = simulate::periodic_signal(sw.dwell1, sw.dwell2, sw.horizon);

  simulate::Trajectory tr = simulate::simulate_modal(c, x0, sig);
  const auto over = simulate::detect_overshoot(tr, flags.tol);
  const auto mono = simulate::detect_monotonic(tr, flags.tol);
  const auto analytic = simulate::analytic_shape(c, x0, sig);
  const auto admissible = design::x0_admissible(c, x0);

  Outcome out;
  json& rep = out.report;
  rep["schema_version"] = io::kSchemaVersion;
  rep["kind"] = "verification";
  rep["provenance"] = provenance(file.provenance.plant_name, flags);
  rep["mode"] = design::to_string(c.mode);
  rep["scenario"] = {{"x0", numbers(x0)},
                     {"switching", {{"type", "periodic"}, {"dwell", {sw.dwell1, sw.dwell2}}, {"horizon", sw.horizon}}}};
  rep["x0_set"] = c.x0_description();

  bool shape_ok = true, all_admissible = true;
  json outputs = json::array();
  const auto& part = c.plan.partitioning;
  for (int k = 1; k <= part.p(); ++k) {
    const bool want_mono = c.mode == design::Mode::Monotonic || part.d[k] == 1;
    const bool ok = want_mono ? mono[k - 1] : !over[k - 1];
    shape_ok = shape_ok && ok;
    const auto& adm = admissible[k - 1];
    all_admissible = all_admissible && adm.verdict.pass;
    outputs.push_back({{"k", k},
                       {"expected", want_mono ? "monotonic" : "non-overshooting"},
                       {"overshoot", bool(over[k - 1])},
                       {"monotonic", bool(mono[k - 1])},
                       {"meets_expected", ok},
                       {"analytic", verdict_json(analytic[k - 1])},
                       {"x0_admissible",
                        {{"d", adm.d}, {"coefficients", adm.coefficients}, {"verdict", verdict_json(adm.verdict)}}},
                       {"derivative_jump", simulate::derivative_jump(c, x0, sig, tr, k)}});
  }
  rep["outputs"] = std::move(outputs);
  rep["shape_ok"] = shape_ok;
  rep["x0_admissible"] = all_admissible;

  const simulate::Trajectory rk = simulate::simulate_rk4(c, file.plant, x0, sig, flags.rk4_step);
  const double cross = simulate::relative_sup_distance(rk, simulate::simulate_modal_at(c, x0, sig, rk.times));
  rep["cross_oracle"] = {{"rk4_step", flags.rk4_step}, {"relative_sup", cross}, {"pass", cross <= 1e-6}};

  double slowest = std::numeric_limits<double>::infinity();
  for (int q : {1, 2}) slowest = std::min(slowest, c.modal_rates(q).cwiseAbs().minCoeff());
  const double horizon = 20.0 / slowest;
  const double start = (x0 - c.ss.x_ss).norm();
  double worst = 0.0;
  for (int i = 0; i < flags.decay_signals; ++i) {
    const auto rs = simulate::random_signal(flags.seed + static_cast<std::uint64_t>(i), horizon);
    const auto end = simulate::simulate_modal_at(c, x0, rs, {horizon});
    if (start > 0) worst = std::max(worst, (end.states.back() - c.ss.x_ss).norm() / start);
  }
  rep["decay"] = {{"signals", flags.decay_signals}, {"T", horizon}, {"worst_ratio", worst}, {"pass", worst <= 1e-3}};
  rep["checks"] = eigen_checks(c, file.plant);

  out.trajectory = std::move(tr);
  return out;
}

Outcome run_analyze(const std::string& plant_path, const Flags& flags) {
  return guarded("analysis", [&] { return cmd_analyze(io::load_plant_file(plant_path), flags); });
}

Outcome run_synthesize(const std::string& plant_path, const Flags& flags) {
  return guarded("synthesis", [&] { return cmd_synthesize(io::load_plant_file(plant_path), flags); });
}

Outcome run_verify(const std::string& controller_path, const Flags& flags) {
  return guarded("verification",
                 [&] { return cmd_verify(io::controller_from_json(io::read_json(controller_path)), flags); });
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace swrect::cli
