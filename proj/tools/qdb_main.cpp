#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "qdb/cli.hpp"

namespace {

using qdb::cli::CommandResult;
using qdb::cli::RunConfig;

void add_shared_flags(CLI::App* cmd, RunConfig& config, std::string& format,
                      std::string& output) {
  cmd->add_option("-o,--output", output, "Write the report to this file");
  cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--wcd", config.w_cd,
                  "Uncertain-state attack weight after categorization");
  cmd->add_option("--wd", config.w_d,
                  "Uncertain-state attack weight, decision alone");
  cmd->add_option("--time", config.time, "Deliberation time");
}

void add_fit_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--hmin", config.h_min, "Lower end of the parameter search");
  cmd->add_option("--hmax", config.h_max, "Upper end of the parameter search");
  cmd->add_option("--grid-step", config.grid_step, "Parameter grid step");
}

qdb::cli::OutputFormat parse_format(const std::string& text) {
  if (text == "csv") {
    return qdb::cli::OutputFormat::Csv;
  }
  if (text == "json") {
    return qdb::cli::OutputFormat::Json;
  }
  return qdb::cli::OutputFormat::Table;
}

int deliver(const CommandResult& result, const RunConfig& config) {
  if (config.output_path) {
    std::ofstream stream(*config.output_path);
    if (!stream) {
      std::cerr << "error: cannot write '" << config.output_path->string()
                << "'\n";
      return 1;
    }
    stream << result.report;
    return result.exit_code;
  }
  std::cout << result.report;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum dynamic belief model for categorization-decision "
               "experiments"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "table";
  std::string output;
  std::string input;
  std::string face = "narrow";
  std::string table;
  std::string mass_spec;
  double p_good = 0.5;
  double h_good = 0.0;
  double h_bad = 0.0;

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit block parameters to observed conditionals");
  fit->add_option("-i,--input", input, "JSON or CSV records to fit");
  fit->add_option("--face", face, "Restrict records by face type")
      ->check(CLI::IsMember({"narrow", "wide", "all"}));
  add_shared_flags(fit, config, format, output);
  add_fit_flags(fit, config);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Compare computed values against the stored references");
  reproduce->add_option("table", table, "Which reference table to reproduce")
      ->required()
      ->check(CLI::IsMember({"t4", "t5"}));
  add_shared_flags(reproduce, config, format, output);
  add_fit_flags(reproduce, config);

  CLI::App* predict = app.add_subcommand(
      "predict", "Evaluate the model for explicit parameters");
  predict->add_option("--pg", p_good, "Prior probability of the good category")
      ->required();
  predict->add_option("--hg", h_good, "Good-block reward difference")
      ->required();
  predict->add_option("--hb", h_bad, "Bad-block reward difference")
      ->required();
  add_shared_flags(predict, config, format, output);

  CLI::App* ppt = app.add_subcommand(
      "ppt", "Pignistic transform of a mass spec, e.g. \"A:0.4 A,W:0.6\"");
  ppt->add_option("mass_spec", mass_spec, "subset:mass pairs")->required();
  add_shared_flags(ppt, config, format, output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  config.format = parse_format(format);
  if (!input.empty()) {
    config.input_path = input;
  }
  if (!output.empty()) {
    config.output_path = output;
  }
  if (face == "wide") {
    config.face = qdb::cli::FaceFilter::Wide;
  } else if (face == "all") {
    config.face = qdb::cli::FaceFilter::All;
  }

  try {
    CommandResult result;
    if (fit->parsed()) {
      result = qdb::cli::cmd_fit(config);
    } else if (reproduce->parsed()) {
      result = qdb::cli::cmd_reproduce(config, table == "t4"
                                                   ? qdb::cli::ReproTable::T4
                                                   : qdb::cli::ReproTable::T5);
    } else if (predict->parsed()) {
      result = qdb::cli::cmd_predict(config, p_good, h_good, h_bad);
    } else {
      result = qdb::cli::cmd_ppt(config, mass_spec);
    }
    return deliver(result, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
