#include "qdb/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace qdb {

namespace {

using nlohmann::json;

// Loose prior-sum tolerance for stored records; published priors are rounded
// to two decimals.
constexpr double kRecordPriorSumTol = 0.01;

constexpr const char* kRecordKeys[] = {
    "source_id",     "face_type",          "p_g", "p_attack_given_good",
    "p_b",           "p_attack_given_bad", "p_t_observed",
    "p_attack_observed"};

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string format_scientific(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3e", value);
  return buffer;
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
  std::ostringstream msg;
  msg << "row " << row << ": " << what;
  throw std::runtime_error(msg.str());
}

void validate_record(const ExperimentRecord& record, std::size_t row) {
  const std::pair<const char*, double> probabilities[] = {
      {"p_g", record.p_g},
      {"p_attack_given_good", record.p_attack_given_good},
      {"p_b", record.p_b},
      {"p_attack_given_bad", record.p_attack_given_bad},
      {"p_t_observed", record.p_t_observed},
      {"p_attack_observed", record.p_attack_observed}};
  if (record.source_id.empty()) {
    row_error(row, "source_id must be non-empty");
  }
  for (const auto& [name, value] : probabilities) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
      std::ostringstream msg;
      msg << name << " = " << value << " is outside [0, 1]";
      row_error(row, msg.str());
    }
  }
  if (std::abs(record.p_g + record.p_b - 1.0) > kRecordPriorSumTol) {
    std::ostringstream msg;
    msg << "priors p_g + p_b = " << record.p_g + record.p_b
        << " must equal 1 within " << kRecordPriorSumTol;
    row_error(row, msg.str());
  }
}

std::vector<ExperimentRecord> parse_json_records(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) {
    throw std::runtime_error("expected a top-level JSON array of records");
  }
  std::vector<ExperimentRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::size_t row = i + 1;
    const json& item = doc[i];
    if (!item.is_object()) {
      row_error(row, "expected an object");
    }
    for (const char* key : kRecordKeys) {
      if (!item.contains(key)) {
        row_error(row, std::string("missing key '") + key + "'");
      }
    }
    ExperimentRecord record;
    if (!item["source_id"].is_string()) {
      row_error(row, "source_id must be a string");
    }
    record.source_id = item["source_id"].get<std::string>();
    if (!item["face_type"].is_string()) {
      row_error(row, "face_type must be a string");
    }
    try {
      record.face_type =
          face_type_from_string(item["face_type"].get<std::string>());
    } catch (const std::exception& e) {
      row_error(row, e.what());
    }
    const std::pair<const char*, double ExperimentRecord::*> numeric_keys[] = {
        {"p_g", &ExperimentRecord::p_g},
        {"p_attack_given_good", &ExperimentRecord::p_attack_given_good},
        {"p_b", &ExperimentRecord::p_b},
        {"p_attack_given_bad", &ExperimentRecord::p_attack_given_bad},
        {"p_t_observed", &ExperimentRecord::p_t_observed},
        {"p_attack_observed", &ExperimentRecord::p_attack_observed}};
    for (const auto& [key, member] : numeric_keys) {
      if (!item[key].is_number()) {
        row_error(row, std::string(key) + " must be a number");
      }
      record.*member = item[key].get<double>();
    }
    validate_record(record, row);
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double_field(const std::string& text, const char* key,
                          std::size_t row) {
  const std::string trimmed = trim(text);
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(trimmed, &consumed);
  } catch (const std::exception&) {
    row_error(row, std::string(key) + " = '" + trimmed + "' is not a number");
  }
  if (consumed != trimmed.size()) {
    row_error(row, std::string(key) + " = '" + trimmed + "' is not a number");
  }
  return value;
}

std::vector<ExperimentRecord> parse_csv_records(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  std::vector<ExperimentRecord> records;

  if (!std::getline(stream, line)) {
    return records;
  }
  const std::vector<std::string> header = split_csv_line(trim(line));
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column[trim(header[i])] = i;
  }
  for (const char* key : kRecordKeys) {
    if (!column.contains(key)) {
      throw std::runtime_error(std::string("CSV header is missing column '") +
                               key + "'");
    }
  }

  // Rows are numbered as file lines; the header is line 1.
  std::size_t row = 1;
  while (std::getline(stream, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    const auto field = [&](const char* key) -> const std::string& {
      const std::size_t index = column.at(key);
      if (index >= fields.size()) {
        row_error(row, std::string("missing value for column '") + key + "'");
      }
      return fields[index];
    };
    ExperimentRecord record;
    record.source_id = trim(field("source_id"));
    try {
      record.face_type = face_type_from_string(trim(field("face_type")));
    } catch (const std::exception& e) {
      row_error(row, e.what());
    }
    record.p_g = parse_double_field(field("p_g"), "p_g", row);
    record.p_attack_given_good = parse_double_field(
        field("p_attack_given_good"), "p_attack_given_good", row);
    record.p_b = parse_double_field(field("p_b"), "p_b", row);
    record.p_attack_given_bad = parse_double_field(
        field("p_attack_given_bad"), "p_attack_given_bad", row);
    record.p_t_observed =
        parse_double_field(field("p_t_observed"), "p_t_observed", row);
    record.p_attack_observed =
        parse_double_field(field("p_attack_observed"), "p_attack_observed", row);
    validate_record(record, row);
    records.push_back(std::move(record));
  }
  return records;
}

json record_to_json(const ExperimentRecord& record) {
  return json{{"source_id", record.source_id},
              {"face_type", to_string(record.face_type)},
              {"p_g", record.p_g},
              {"p_attack_given_good", record.p_attack_given_good},
              {"p_b", record.p_b},
              {"p_attack_given_bad", record.p_attack_given_bad},
              {"p_t_observed", record.p_t_observed},
              {"p_attack_observed", record.p_attack_observed}};
}

}  // namespace

std::string to_string(FaceType face) {
  return face == FaceType::Wide ? "wide" : "narrow";
}

FaceType face_type_from_string(const std::string& text) {
  if (text == "wide") {
    return FaceType::Wide;
  }
  if (text == "narrow") {
    return FaceType::Narrow;
  }
  throw std::invalid_argument("face_type must be 'wide' or 'narrow', got '" +
                              text + "'");
}

std::string to_string(ReferenceModel model) {
  switch (model) {
    case ReferenceModel::Observed:
      return "Observed";
    case ReferenceModel::QDB:
      return "QDB";
    case ReferenceModel::BAE:
      return "BAE";
    case ReferenceModel::MarkovBA:
      return "MarkovBA";
  }
  throw std::invalid_argument("unknown reference model");
}

const std::vector<ExperimentRecord>& embedded_experiments() {
  static const std::vector<ExperimentRecord> records = {
      {"Townsend2000", FaceType::Wide, 0.84, 0.35, 0.16, 0.52, 0.37, 0.39},
      {"Townsend2000", FaceType::Narrow, 0.17, 0.41, 0.83, 0.63, 0.59, 0.69},
      {"Busemeyer2009", FaceType::Wide, 0.80, 0.37, 0.20, 0.53, 0.40, 0.39},
      {"Busemeyer2009", FaceType::Narrow, 0.20, 0.45, 0.80, 0.64, 0.60, 0.69},
      {"Wang2016-E1", FaceType::Wide, 0.78, 0.39, 0.22, 0.52, 0.42, 0.42},
      {"Wang2016-E1", FaceType::Narrow, 0.21, 0.41, 0.79, 0.58, 0.54, 0.59},
      {"Wang2016-E2", FaceType::Wide, 0.78, 0.33, 0.22, 0.53, 0.37, 0.37},
      {"Wang2016-E2", FaceType::Narrow, 0.24, 0.37, 0.76, 0.61, 0.55, 0.60},
      {"Wang2016-E3", FaceType::Wide, 0.77, 0.34, 0.23, 0.58, 0.40, 0.39},
      {"Wang2016-E3", FaceType::Narrow, 0.24, 0.33, 0.76, 0.66, 0.58, 0.62},
      {"Average", FaceType::Wide, 0.79, 0.36, 0.21, 0.54, 0.39, 0.39},
      {"Average", FaceType::Narrow, 0.21, 0.39, 0.79, 0.62, 0.57, 0.64},
  };
  return records;
}

const std::vector<ReferenceValues>& embedded_references() {
  static const std::vector<ReferenceValues> references = {
      {"Townsend2000", ReferenceModel::Observed, 0.59, 0.69},
      {"Townsend2000", ReferenceModel::QDB, 0.5923, 0.6756},
      {"Townsend2000", ReferenceModel::BAE, 0.56, 0.63},
      {"Townsend2000", ReferenceModel::MarkovBA, 0.576, 0.576},
      {"Busemeyer2009", ReferenceModel::Observed, 0.60, 0.69},
      {"Busemeyer2009", ReferenceModel::QDB, 0.6027, 0.6860},
      {"Busemeyer2009", ReferenceModel::BAE, 0.56, 0.63},
      {"Busemeyer2009", ReferenceModel::MarkovBA, 0.621, 0.621},
      {"Wang2016-E1", ReferenceModel::Observed, 0.54, 0.59},
      {"Wang2016-E1", ReferenceModel::QDB, 0.5444, 0.6278},
      {"Wang2016-E1", ReferenceModel::BAE, 0.5634, 0.6214},
      {"Wang2016-E1", ReferenceModel::MarkovBA, 0.532, 0.532},
      {"Wang2016-E2", ReferenceModel::Observed, 0.55, 0.60},
      {"Wang2016-E2", ReferenceModel::QDB, 0.5528, 0.6361},
      {"Wang2016-E2", ReferenceModel::BAE, 0.6065, 0.6315},
      {"Wang2016-E2", ReferenceModel::MarkovBA, 0.5979, 0.5979},
      {"Wang2016-E3", ReferenceModel::Observed, 0.58, 0.62},
      {"Wang2016-E3", ReferenceModel::QDB, 0.5810, 0.6644},
      {"Wang2016-E3", ReferenceModel::BAE, 0.6123, 0.6323},
      {"Wang2016-E3", ReferenceModel::MarkovBA, 0.5316, 0.5316},
      {"Average", ReferenceModel::Observed, 0.57, 0.64},
      {"Average", ReferenceModel::QDB, 0.5721, 0.6554},
      {"Average", ReferenceModel::BAE, 0.580, 0.629},
      {"Average", ReferenceModel::MarkovBA, 0.572, 0.572},
  };
  return references;
}

std::optional<ReferenceValues> find_reference(const std::string& source_id,
                                              ReferenceModel model) {
  for (const ReferenceValues& reference : embedded_references()) {
    if (reference.source_id == source_id && reference.model == model) {
      return reference;
    }
  }
  return std::nullopt;
}

std::vector<ExperimentRecord> load_experiments(
    const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  const std::string text = buffer.str();

  if (trim(text).empty()) {
    return {};
  }

  std::string extension = path.extension().string();
  std::transform(extension.begin(), extension.end(), extension.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (extension == ".json") {
    return parse_json_records(text);
  }
  if (extension == ".csv") {
    return parse_csv_records(text);
  }
  const char first = trim(text).front();
  return first == '[' || first == '{' ? parse_json_records(text)
                                      : parse_csv_records(text);
}

std::string render_results_json(const std::vector<FitResultRow>& rows) {
  json doc = json::array();
  for (const FitResultRow& row : rows) {
    json item = record_to_json(row.record);
    item["fit"] = {{"h_g", row.fit.params.h_good},
                   {"h_b", row.fit.params.h_bad},
                   {"time", row.fit.params.time},
                   {"residual_good", row.fit.residual_good},
                   {"residual_bad", row.fit.residual_bad},
                   {"clamped_good", row.fit.clamped_good},
                   {"clamped_bad", row.fit.clamped_bad}};
    const Prediction& p = row.fit.prediction;
    item["prediction"] = {
        {"p_attack_given_good", p.p_attack_given_good},
        {"p_attack_given_bad", p.p_attack_given_bad},
        {"p_uncertain_given_good", p.p_uncertain_given_good},
        {"p_uncertain_given_bad", p.p_uncertain_given_bad},
        {"p_total_cd", p.p_total_cd},
        {"p_attack_d_alone", p.p_attack_d_alone},
        {"interference", p.interference}};
    if (row.reference) {
      item["reference"] = {{"model", to_string(row.reference->model)},
                           {"p_t", row.reference->p_t},
                           {"p_attack", row.reference->p_attack}};
      item["delta"] = {
          {"p_t", std::abs(p.p_total_cd - row.reference->p_t)},
          {"p_attack", std::abs(p.p_attack_d_alone - row.reference->p_attack)}};
    } else {
      item["reference"] = nullptr;
      item["delta"] = nullptr;
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string render_results_csv(const std::vector<FitResultRow>& rows) {
  std::ostringstream out;
  out << "source_id,face_type,p_g,p_attack_given_good,p_b,p_attack_given_bad,"
         "p_t_observed,p_attack_observed,h_g,h_b,residual_good,residual_bad,"
         "qdb_p_attack_given_good,qdb_p_attack_given_bad,"
         "qdb_p_uncertain_given_good,qdb_p_uncertain_given_bad,qdb_p_t,"
         "qdb_p_attack,interference,ref_model,ref_p_t,ref_p_attack,delta_p_t,"
         "delta_p_attack\n";
  for (const FitResultRow& row : rows) {
    const ExperimentRecord& r = row.record;
    const Prediction& p = row.fit.prediction;
    out << r.source_id << ',' << to_string(r.face_type) << ','
        << format_fixed(r.p_g, 6) << ',' << format_fixed(r.p_attack_given_good, 6)
        << ',' << format_fixed(r.p_b, 6) << ','
        << format_fixed(r.p_attack_given_bad, 6) << ','
        << format_fixed(r.p_t_observed, 6) << ','
        << format_fixed(r.p_attack_observed, 6) << ','
        << format_fixed(row.fit.params.h_good, 6) << ','
        << format_fixed(row.fit.params.h_bad, 6) << ','
        << format_scientific(row.fit.residual_good) << ','
        << format_scientific(row.fit.residual_bad) << ','
        << format_fixed(p.p_attack_given_good, 6) << ','
        << format_fixed(p.p_attack_given_bad, 6) << ','
        << format_fixed(p.p_uncertain_given_good, 6) << ','
        << format_fixed(p.p_uncertain_given_bad, 6) << ','
        << format_fixed(p.p_total_cd, 6) << ','
        << format_fixed(p.p_attack_d_alone, 6) << ','
        << format_fixed(p.interference, 6) << ',';
    if (row.reference) {
      out << to_string(row.reference->model) << ','
          << format_fixed(row.reference->p_t, 6) << ','
          << format_fixed(row.reference->p_attack, 6) << ','
          << format_fixed(std::abs(p.p_total_cd - row.reference->p_t), 6) << ','
          << format_fixed(std::abs(p.p_attack_d_alone - row.reference->p_attack),
                          6);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

void export_results(const std::vector<FitResultRow>& rows,
                    const std::filesystem::path& path, ExportFormat format) {
  std::ofstream stream(path);
  if (!stream) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  stream << (format == ExportFormat::Json ? render_results_json(rows)
                                          : render_results_csv(rows));
  if (!stream) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

}  // namespace qdb
