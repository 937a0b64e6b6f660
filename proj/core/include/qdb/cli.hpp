#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "qdb/datasets.hpp"
#include "qdb/model.hpp"

namespace qdb::cli {

// Reproduction gate on the published two-stage and decision-alone values.
inline constexpr double kReproduceTol = 0.004;

enum class OutputFormat { Table, Csv, Json };
enum class FaceFilter { Narrow, Wide, All };
enum class ReproTable { T4, T5 };

struct RunConfig {
  std::optional<std::filesystem::path> input_path;
  std::optional<std::filesystem::path> output_path;
  OutputFormat format = OutputFormat::Table;
  FaceFilter face = FaceFilter::Narrow;
  double w_cd = kCdUncertainWeight;
  double w_d = kDAloneUncertainWeight;
  double time = kDefaultProcessTime;
  double h_min = kFitHMin;
  double h_max = kFitHMax;
  double grid_step = kFitGridStep;
};

// Throws std::invalid_argument on out-of-range overrides.
void validate(const RunConfig& config);

struct CommandResult {
  std::string report;
  int exit_code = 0;
};

// Fit every selected record, report parameters, predictions, and deltas
// against stored reference values where present.
CommandResult cmd_fit(const RunConfig& config);

// Side-by-side computed vs published values. t4 compares the fitted model
// against the published model values for the six narrow rows; t5 adds the
// computed law-of-total-probability baseline and the stored comparison-model
// rows. Exit code 2 when any comparison misses kReproduceTol.
CommandResult cmd_reproduce(const RunConfig& config, ReproTable table);

// Model output for explicit parameters, no fitting. p_bad is 1 - p_good.
CommandResult cmd_predict(const RunConfig& config, double p_good, double h_good,
                          double h_bad);

// Pignistic distribution of a mass spec such as "A:0.4 A,W:0.6".
CommandResult cmd_ppt(const RunConfig& config, const std::string& mass_spec);

}  // namespace qdb::cli
