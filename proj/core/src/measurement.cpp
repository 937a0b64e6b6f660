#include "qdb/measurement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qdb {

MeasurementOperator::MeasurementOperator(std::vector<double> diagonal)
    : diagonal_(std::move(diagonal)) {
  if (diagonal_.size() != 3 && diagonal_.size() != 6) {
    throw std::invalid_argument(
        "MeasurementOperator: diagonal must have length 3 or 6");
  }
  for (double c : diagonal_) {
    if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
      std::ostringstream msg;
      msg << "MeasurementOperator: coefficient " << c
          << " must lie in [0, 1]";
      throw std::invalid_argument(msg.str());
    }
  }
}

namespace {

double measure(const ComplexVector& amplitudes, const MeasurementOperator& op) {
  if (static_cast<Eigen::Index>(op.dim()) != amplitudes.size()) {
    std::ostringstream msg;
    msg << "measure_probability: operator dimension " << op.dim()
        << " does not match state dimension " << amplitudes.size();
    throw std::invalid_argument(msg.str());
  }
  double total = 0.0;
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    const double c = op.diagonal()[static_cast<std::size_t>(k)];
    total += c * c * std::norm(amplitudes(k));
  }
  return total;
}

}  // namespace

double measure_probability(const BlockState& state,
                           const MeasurementOperator& op) {
  return measure(state.amplitudes(), op);
}

double measure_probability(const BeliefState& state,
                           const MeasurementOperator& op) {
  return measure(state.amplitudes(), op);
}

ActionProbabilities action_probabilities(const BlockState& evolved) {
  const auto& a = evolved.amplitudes();
  return {std::norm(a(0)), std::norm(a(1)), std::norm(a(2))};
}

double reported_conditional_attack(const ActionProbabilities& probs,
                                   double uncertain_weight) {
  if (!std::isfinite(uncertain_weight) || uncertain_weight < 0.0 ||
      uncertain_weight > 1.0) {
    throw std::invalid_argument(
        "reported_conditional_attack: uncertain weight must lie in [0, 1]");
  }
  return probs.attack + uncertain_weight * probs.uncertain;
}

std::pair<double, double> split_uncertain(double p_uncertain) {
  if (!std::isfinite(p_uncertain) || p_uncertain < 0.0 || p_uncertain > 1.0) {
    throw std::invalid_argument(
        "split_uncertain: probability must lie in [0, 1]");
  }
  return {0.5 * p_uncertain, 0.5 * p_uncertain};
}

MeasurementOperator cd_measurement_operator() {
  return MeasurementOperator({1.0, 0.5, 0.0});
}

MeasurementOperator d_alone_measurement_operator() {
  return MeasurementOperator({1.0, 1.0 / std::numbers::sqrt2, 0.0});
}

}  // namespace qdb
