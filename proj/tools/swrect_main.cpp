#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swrect/cli/commands.hpp"
#include "swrect/errors.hpp"

namespace {

using swrect::cli::Flags;
using swrect::cli::Outcome;

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else if (!write_file(path, text)) {
    throw std::runtime_error("cannot write " + path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-eigenvector switching controller design"};
  app.require_subcommand(1);

  Flags flags;
  std::string input, out_path, report_path, csv_path, mode_text, partition_text, pair0_text, switch_text, x0_text;
  std::vector<std::string> eig_texts;
  double horizon = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", flags.seed, "random seed for sampling and selection")->capture_default_str();
    sub->add_option("--tol", flags.tol, "relative shape tolerance")->capture_default_str();
  };
  auto scenario = [&](CLI::App* sub) {
    sub->add_option("--switch", switch_text, "periodic:d1,d2");
    sub->add_option("--horizon", horizon, "simulation horizon in seconds");
    sub->add_option("--x0", x0_text, "initial state x1,...,xn");
    sub->add_option("--csv", csv_path, "trajectory CSV path");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "feasibility numbers, excluded curves, partitionings");
  analyze->add_option("plant", input, "plant JSON file")->required();
  analyze->add_option("--out", out_path, "report path (stdout when omitted)");
  common(analyze);

  CLI::App* synth = app.add_subcommand("synthesize", "compute feedback and feedforward");
  synth->add_option("plant", input, "plant JSON file")->required();
  synth->add_option("--out", out_path, "controller file path")->required();
  synth->add_option("--report", report_path, "report path (stdout when omitted)");
  synth->add_option("--mode", mode_text, "nonovershoot or monotonic");
  synth->add_option("--partition", partition_text, "d0,d1,...,dp");
  synth->add_option("--eig", eig_texts, "q,k=v1,v2,... (repeatable)");
  synth->add_option("--pair0", pair0_text, "L_{2,0} index for each L_{1,0} entry");
  common(synth);
  scenario(synth);

  CLI::App* simulate = app.add_subcommand("simulate", "write the closed-loop trajectory as CSV");
  CLI::App* verify = app.add_subcommand("verify", "re-check a controller file");
  for (CLI::App* sub : {simulate, verify}) {
    sub->add_option("controller", input, "controller JSON file")->required();
    sub->add_option("--out", out_path, "report path (stdout when omitted)");
    common(sub);
    scenario(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (!mode_text.empty()) flags.mode = swrect::design::parse_mode(mode_text);
    if (!partition_text.empty()) flags.partition = swrect::cli::parse_int_list(partition_text);
    if (!pair0_text.empty()) flags.pair0 = swrect::cli::parse_int_list(pair0_text);
    for (const auto& e : eig_texts) {
      auto [qk, values] = swrect::cli::parse_eig_flag(e);
      flags.eig[qk] = std::move(values);
    }
    if (!switch_text.empty()) flags.dwell = swrect::cli::parse_switch_flag(switch_text);
    if (horizon != 0.0) {
      if (!(horizon > 0)) throw swrect::ParseError("--horizon must be positive");
      flags.horizon = horizon;
    }
    if (!x0_text.empty()) flags.x0 = swrect::cli::parse_double_list(x0_text);
  } catch (const std::exception& e) {
    std::cerr << "swrect: " << e.what() << "\n";
    return swrect::cli::kBadInput;
  }

  Outcome outcome;
  if (analyze->parsed()) {
    outcome = swrect::cli::run_analyze(input, flags);
  } else if (synth->parsed()) {
    outcome = swrect::cli::run_synthesize(input, flags);
  } else {
    outcome = swrect::cli::run_verify(input, flags);
  }

  try {
    if (synth->parsed()) {
      if (outcome.controller) emit(out_path, swrect::cli::dump(*outcome.controller));
      emit(report_path, swrect::cli::dump(outcome.report));
    } else {
      emit(out_path, swrect::cli::dump(outcome.report));
    }
    if (outcome.trajectory && (simulate->parsed() || !csv_path.empty())) {
      std::ostringstream csv;
      swrect::simulate::write_csv(csv, *outcome.trajectory);
      emit(csv_path.empty() ? "-" : csv_path, csv.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "swrect: " << e.what() << "\n";
    return swrect::cli::kInternal;
  }
  if (outcome.exit_code != 0) std::cerr << "swrect: " << outcome.diagnostic << "\n";
  return outcome.exit_code;
}
