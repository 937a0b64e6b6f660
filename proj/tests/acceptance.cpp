// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Usage: qdb_acceptance <path-to-qdb-cli>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdb/cli.hpp"
#include "qdb/datasets.hpp"
#include "qdb/model.hpp"
#include "qdb/pignistic.hpp"
#include "support/series_oracle.hpp"

namespace {

namespace fs = std::filesystem;

constexpr double kHalfPi = std::numbers::pi / 2.0;

// (ok, one-line detail)
using Outcome = std::pair<bool, std::string>;

std::string format_double(double value) {
  std::ostringstream out;
  out.precision(3);
  out << value;
  return out.str();
}

struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& command) {
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) {
    return {-1, "popen failed"};
  }
  std::string output;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    output.append(buffer, n);
  }
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status)) {
    return {-1, output};
  }
  return {WEXITSTATUS(status), output};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string quoted(const std::string& text) {
  return "\"" + text + "\"";
}

bool records_equal(const qdb::ExperimentRecord& a,
                   const qdb::ExperimentRecord& b) {
  return a.source_id == b.source_id && a.face_type == b.face_type &&
         a.p_g == b.p_g && a.p_attack_given_good == b.p_attack_given_good &&
         a.p_b == b.p_b && a.p_attack_given_bad == b.p_attack_given_bad &&
         a.p_t_observed == b.p_t_observed &&
         a.p_attack_observed == b.p_attack_observed;
}

// 1. Fitting the six narrow-face records reproduces the published two-stage
// and decision-alone values within 0.004, and the fitted conditionals land on
// the observed ones within 1e-6.
Outcome check_table_reproduction() {
  double max_delta = 0.0;
  double max_residual = 0.0;
  for (const qdb::ExperimentRecord& record : qdb::embedded_experiments()) {
    if (record.face_type != qdb::FaceType::Narrow) {
      continue;
    }
    const qdb::FittedModel fit =
        qdb::fit_experiment(record.p_g, record.p_b, record.p_attack_given_good,
                            record.p_attack_given_bad);
    const auto reference =
        qdb::find_reference(record.source_id, qdb::ReferenceModel::QDB);
    if (!reference) {
      return {false, "no stored model values for " + record.source_id};
    }
    max_delta = std::max(
        max_delta, std::abs(fit.prediction.p_total_cd - reference->p_t));
    max_delta = std::max(max_delta, std::abs(fit.prediction.p_attack_d_alone -
                                             reference->p_attack));
    max_residual = std::max(max_residual,
                            std::max(fit.residual_good, fit.residual_bad));
  }
  const bool ok = max_delta <= 0.004 && max_residual <= 1e-6;
  return {ok, "max delta " + format_double(max_delta) + " (tol 0.004), max residual " +
                  format_double(max_residual) + " (tol 1e-6)"};
}

// 2. The gap between the decision-alone and two-stage totals is 1/12 for any
// parameters at the default time, and the stored model values carry the same
// gap.
Outcome check_interference_gap() {
  std::mt19937 rng(424201);
  std::uniform_real_distribution<double> param(-10.0, 10.0);
  std::uniform_real_distribution<double> prior(0.0, 1.0);
  double max_dev = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double p_good = prior(rng);
    const qdb::Prediction p = qdb::predict(p_good, 1.0 - p_good,
                                           {param(rng), param(rng), kHalfPi});
    max_dev = std::max(max_dev, std::abs(p.interference - 1.0 / 12.0));
  }
  if (max_dev > 1e-9) {
    return {false, "computed gap deviates from 1/12 by " + format_double(max_dev)};
  }

  double max_ref_dev = 0.0;
  for (const qdb::ReferenceValues& reference : qdb::embedded_references()) {
    if (reference.model != qdb::ReferenceModel::QDB) {
      continue;
    }
    max_ref_dev = std::max(
        max_ref_dev, std::abs(reference.p_attack - reference.p_t - 1.0 / 12.0));
  }
  const bool ok = max_ref_dev <= 2e-4;
  return {ok, "1000 random parameter draws within " + format_double(max_dev) +
                  " of 1/12; stored gaps within " + format_double(max_ref_dev)};
}

// 3. Mean relative error of the fitted two-stage and decision-alone values
// against the observed ones, across the six narrow-face records.
Outcome check_mean_relative_error() {
  double total = 0.0;
  int count = 0;
  for (const qdb::ExperimentRecord& record : qdb::embedded_experiments()) {
    if (record.face_type != qdb::FaceType::Narrow) {
      continue;
    }
    const qdb::FittedModel fit =
        qdb::fit_experiment(record.p_g, record.p_b, record.p_attack_given_good,
                            record.p_attack_given_bad);
    total += std::abs(fit.prediction.p_total_cd - record.p_t_observed) /
             record.p_t_observed;
    total += std::abs(fit.prediction.p_attack_d_alone - record.p_attack_observed) /
             record.p_attack_observed;
    count += 2;
  }
  const double mean = total / count;
  return {mean <= 0.05,
          "mean relative error " + format_double(100.0 * mean) + "% (limit 5%)"};
}

// 4. The propagator is unitary and preserves state norm across random
// parameters and times.
Outcome check_unitarity() {
  std::mt19937 rng(424204);
  std::uniform_real_distribution<double> param(-10.0, 10.0);
  std::uniform_real_distribution<double> time(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double max_unitary_dev = 0.0;
  double max_norm_drift = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double t = time(rng);
    const qdb::HermitianMatrix h =
        qdb::build_full_hamiltonian({param(rng), param(rng), t});
    const qdb::UnitaryMatrix u = qdb::matrix_exponential_unitary(h, t);
    const Eigen::MatrixXcd& m = u.entries();
    max_unitary_dev = std::max(
        max_unitary_dev,
        (m.adjoint() * m - Eigen::MatrixXcd::Identity(6, 6))
            .cwiseAbs()
            .maxCoeff());

    Eigen::VectorXcd v(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      v(i) = std::complex<double>(gauss(rng), gauss(rng));
    }
    v /= v.norm();
    const qdb::BeliefState evolved = qdb::evolve(qdb::BeliefState(v), h, t);
    max_norm_drift = std::max(
        max_norm_drift, std::abs(evolved.amplitudes().norm() - 1.0));
  }
  const bool ok = max_unitary_dev < 1e-12 && max_norm_drift < 1e-12;
  return {ok, "max unitarity deviation " + format_double(max_unitary_dev) +
                  ", max norm drift " + format_double(max_norm_drift) +
                  " (tol 1e-12)"};
}

// 5. The unresolved probability is exactly one third at the default time, for
// every block parameter.
Outcome check_uncertain_third() {
  double max_dev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double h = -10.0 + 0.01 * static_cast<double>(i);
    const qdb::BlockState evolved = qdb::evolve(
        qdb::BlockState(Eigen::VectorXcd::Constant(3, 1.0 / std::sqrt(3.0))),
        qdb::build_block_hamiltonian(h), kHalfPi);
    const qdb::ActionProbabilities probs = qdb::action_probabilities(evolved);
    max_dev = std::max(max_dev, std::abs(probs.uncertain - 1.0 / 3.0));
  }
  return {max_dev < 1e-12, "max deviation from 1/3 is " + format_double(max_dev) +
                               " over 2001 parameters (tol 1e-12)"};
}

// 6. The eigendecomposition propagator agrees with the closed form on a dense
// parameter grid and with a truncated-series propagator on random Hermitian
// generators.
Outcome check_propagator_routes() {
  double max_closed_dev = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double h = -10.0 + 0.001 * static_cast<double>(i);
    max_closed_dev = std::max(
        max_closed_dev, std::abs(qdb::qdb_conditional(h, kHalfPi, 0.25) -
                                 qdb::closed_form_conditional(h, 0.25)));
  }
  if (max_closed_dev >= 1e-10) {
    return {false,
            "closed-form deviation " + format_double(max_closed_dev)};
  }

  std::mt19937 rng(424206);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  double max_series_dev = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXcd m(3, 3);
    for (Eigen::Index r = 0; r < 3; ++r) {
      m(r, r) = std::complex<double>(entry(rng), 0.0);
      for (Eigen::Index c = r + 1; c < 3; ++c) {
        m(r, c) = std::complex<double>(entry(rng), entry(rng));
        m(c, r) = std::conj(m(r, c));
      }
    }
    const double t = time(rng);
    const qdb::UnitaryMatrix u =
        qdb::matrix_exponential_unitary(qdb::HermitianMatrix(m), t);
    const Eigen::MatrixXcd series = qdb::testing::series_exponential(m, t);
    max_series_dev = std::max(
        max_series_dev, (u.entries() - series).cwiseAbs().maxCoeff());
  }
  const bool ok = max_series_dev < 1e-10;
  return {ok, "max closed-form deviation " + format_double(max_closed_dev) +
                  ", max series deviation " + format_double(max_series_dev) +
                  " (tol 1e-10)"};
}

// 7. The law-of-total-probability baseline hits the Townsend value exactly and
// is identical with and without an explicit categorization stage.
Outcome check_markov_baseline() {
  const double two_stage =
      qdb::markov_total_probability(0.17, 0.41, 0.83, 0.63);
  // Marginalizing the unobserved category by hand is the decision-alone path
  // of the baseline; it must be the same arithmetic, not merely close.
  const double decision_alone = 0.17 * 0.41 + 0.83 * 0.63;
  const bool ok =
      std::abs(two_stage - 0.5926) < 1e-12 && two_stage == decision_alone;
  return {ok, "two-stage " + format_double(two_stage) +
                  ", decision-alone gap " +
                  format_double(std::abs(two_stage - decision_alone))};
}

// 8. The pignistic transform matches hand-computed splits and always yields a
// probability distribution.
Outcome check_pignistic() {
  using Subset = qdb::MassFunction::Subset;
  const std::set<std::string> frame{"A", "U", "W"};

  const auto even = qdb::pignistic_transform(
      qdb::MassFunction({"A", "W"}, {{{"A", "W"}, 1.0}}));
  const auto mixed = qdb::pignistic_transform(
      qdb::MassFunction({"A", "W"}, {{{"A"}, 0.4}, {{"A", "W"}, 0.6}}));
  const auto full = qdb::pignistic_transform(
      qdb::MassFunction(frame, {{{"A", "U", "W"}, 0.3}, {{"U"}, 0.7}}));
  if (std::abs(even.at("A") - 0.5) > 1e-15 ||
      std::abs(even.at("W") - 0.5) > 1e-15 ||
      std::abs(mixed.at("A") - 0.7) > 1e-15 ||
      std::abs(mixed.at("W") - 0.3) > 1e-15 ||
      std::abs(full.at("A") - 0.1) > 1e-15 ||
      std::abs(full.at("U") - 0.8) > 1e-15 ||
      std::abs(full.at("W") - 0.1) > 1e-15) {
    return {false, "a hand-computed example does not match"};
  }

  std::mt19937 rng(424208);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  const std::vector<Subset> subsets{
      {"A"},      {"U"},      {"W"},          {"A", "U"},
      {"A", "W"}, {"U", "W"}, {"A", "U", "W"}};
  double max_dev = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::map<Subset, double> masses;
    double total = 0.0;
    for (const Subset& s : subsets) {
      masses[s] = weight(rng);
      total += masses[s];
    }
    for (auto& [subset, mass] : masses) {
      mass /= total;
    }
    const auto bet = qdb::pignistic_transform(qdb::MassFunction(frame, masses));
    double sum = 0.0;
    for (const auto& [label, p] : bet) {
      if (p < 0.0) {
        return {false, "negative pignistic probability"};
      }
      sum += p;
    }
    max_dev = std::max(max_dev, std::abs(sum - 1.0));
  }
  const bool ok = max_dev < 1e-12;
  return {ok, "examples exact, 200 random sums within " + format_double(max_dev) +
                  " of 1 (tol 1e-12)"};
}

// 9. Fitting a conditional generated by the model recovers a parameter that
// reproduces it.
Outcome check_fit_round_trip() {
  std::mt19937 rng(424209);
  std::uniform_real_distribution<double> param(-10.0, 10.0);
  double max_residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double target = qdb::closed_form_conditional(param(rng), 0.25);
    const qdb::BlockFit fit = qdb::fit_block_param(target, 0.25);
    max_residual = std::max(
        max_residual,
        std::abs(qdb::qdb_conditional(fit.h, kHalfPi, 0.25) - target));
  }
  const bool ok = max_residual < 1e-6;
  return {ok, "100 round trips, max residual " + format_double(max_residual) +
                  " (tol 1e-6)"};
}

// 10. The installed command line reproduces the table, round-trips its own
// exports, and rejects invalid input with a row diagnostic.
Outcome check_cli(const std::string& binary) {
  const CliRun repro = run_cli(quoted(binary) + " reproduce t4");
  if (repro.exit_code != 0 ||
      !contains(repro.output, "6/6 comparisons PASS") ||
      contains(repro.output, "FAIL")) {
    return {false, "reproduce t4 exited " + std::to_string(repro.exit_code)};
  }

  const fs::path dir = fs::temp_directory_path() / "qdb_acceptance";
  fs::create_directories(dir);
  const fs::path json_path = dir / "fit.json";
  const fs::path csv_path = dir / "fit.csv";
  const fs::path bad_path = dir / "bad.json";

  Outcome outcome{true, ""};
  const auto fail = [&](const std::string& detail) {
    outcome = {false, detail};
  };

  const CliRun to_json = run_cli(quoted(binary) + " fit --format json -o " +
                                 quoted(json_path.string()));
  const CliRun to_csv =
      run_cli(quoted(binary) + " fit -i " + quoted(json_path.string()) +
              " --format csv -o " + quoted(csv_path.string()));
  if (to_json.exit_code != 0 || to_csv.exit_code != 0) {
    fail("fit export chain failed");
  } else {
    const auto from_json = qdb::load_experiments(json_path);
    const auto from_csv = qdb::load_experiments(csv_path);
    if (from_json.size() != 6 || from_csv.size() != 6) {
      fail("export chain lost records");
    } else {
      for (std::size_t i = 0; i < from_json.size(); ++i) {
        if (!records_equal(from_json[i], from_csv[i])) {
          fail("record " + std::to_string(i + 1) +
               " changed across the JSON/CSV round trip");
          break;
        }
      }
    }
  }

  if (outcome.first) {
    std::ofstream bad(bad_path);
    bad << R"([{"source_id": "X", "face_type": "narrow", "p_g": 1.2,
        "p_attack_given_good": 0.4, "p_b": 0.8, "p_attack_given_bad": 0.6,
        "p_t_observed": 0.5, "p_attack_observed": 0.6}])";
    bad.close();
    const CliRun invalid =
        run_cli(quoted(binary) + " fit -i " + quoted(bad_path.string()));
    if (invalid.exit_code != 1) {
      fail("invalid input exited " + std::to_string(invalid.exit_code) +
           ", expected 1");
    } else if (!contains(invalid.output, "row 1") ||
               !contains(invalid.output, "p_g")) {
      fail("invalid input diagnostic lacks the row and field name");
    }
  }

  std::error_code ec;
  fs::remove_all(dir, ec);
  if (outcome.first) {
    outcome.second =
        "reproduce t4 all PASS, exports round trip, invalid input names row 1";
  }
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: qdb_acceptance <path-to-qdb-cli>\n";
    return 2;
  }
  const std::string binary = argv[1];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"published two-stage table reproduced by the fitted model",
       check_table_reproduction},
      {"decision-alone vs two-stage gap is 1/12",
       check_interference_gap},
      {"fitted values track the observations",
       check_mean_relative_error},
      {"propagator is unitary and norm preserving",
       check_unitarity},
      {"unresolved probability is one third at the default time",
       check_uncertain_third},
      {"propagator agrees with closed-form and series routes",
       check_propagator_routes},
      {"law-of-total-probability baseline is stage independent",
       check_markov_baseline},
      {"pignistic transform splits mass correctly",
       check_pignistic},
      {"parameter fit round-trips model-generated targets",
       check_fit_round_trip},
      {"command line reproduces, round-trips, and validates",
       [&binary] { return check_cli(binary); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome{false, "unexpected error"};
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.first ? 0 : 1;
    std::cout << (outcome.first ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
              << criteria[i].first << ": " << outcome.second << "\n";
  }

  if (failures > 0) {
    std::cout << failures << " of " << criteria.size()
              << " acceptance criteria failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria pass\n";
  return 0;
}
