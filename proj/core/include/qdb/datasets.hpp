#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdb/model.hpp"

namespace qdb {

enum class FaceType { Wide, Narrow };

std::string to_string(FaceType face);
FaceType face_type_from_string(const std::string& text);

// One categorization-decision experiment: category priors, observed reported
// conditionals, and the observed two-stage and decision-alone attack rates.
// Field names match the JSON/CSV serialization keys.
struct ExperimentRecord {
  std::string source_id;
  FaceType face_type = FaceType::Narrow;
  double p_g = 0.0;
  double p_attack_given_good = 0.0;
  double p_b = 0.0;
  double p_attack_given_bad = 0.0;
  double p_t_observed = 0.0;
  double p_attack_observed = 0.0;
};

enum class ReferenceModel { Observed, QDB, BAE, MarkovBA };

std::string to_string(ReferenceModel model);

// Published two-stage and decision-alone attack probabilities for one source
// under one model. The BAE and MarkovBA rows come from fitting procedures not
// reproduced here and are carried as opaque values.
struct ReferenceValues {
  std::string source_id;
  ReferenceModel model = ReferenceModel::QDB;
  double p_t = 0.0;
  double p_attack = 0.0;
};

// The twelve canonical records (six sources, wide and narrow faces).
const std::vector<ExperimentRecord>& embedded_experiments();

// Published narrow-face model values: QDB, BAE, MarkovBA, and the observed
// row, for each of the six sources.
const std::vector<ReferenceValues>& embedded_references();

std::optional<ReferenceValues> find_reference(const std::string& source_id,
                                              ReferenceModel model);

// Reads records from a JSON array or a CSV file (chosen by extension, with a
// content sniff as fallback). Schema violations raise std::runtime_error
// naming the offending row.
std::vector<ExperimentRecord> load_experiments(
    const std::filesystem::path& path);

enum class ExportFormat { Csv, Json };

// One fitted experiment next to its published reference values, when any.
struct FitResultRow {
  ExperimentRecord record;
  FittedModel fit;
  std::optional<ReferenceValues> reference;
};

// Serialized results. The JSON form is an array of objects embedding the
// record under its original keys, so load_experiments can read it back; the
// CSV header starts with the record columns for the same reason. CSV values
// carry six decimal places (residuals use scientific notation).
std::string render_results_json(const std::vector<FitResultRow>& rows);
std::string render_results_csv(const std::vector<FitResultRow>& rows);

void export_results(const std::vector<FitResultRow>& rows,
                    const std::filesystem::path& path, ExportFormat format);

}  // namespace qdb
