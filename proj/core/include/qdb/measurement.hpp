#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdb/belief.hpp"

namespace qdb {

inline constexpr double kActionSumTol = 1e-10;
// Fraction of the uncertain-state probability that counts as attack in a
// reported conditional. The amplitude-level coefficients are 0.5 (after an
// explicit categorization) and 1/√2 (decision alone); probabilities pick up
// their squares.
inline constexpr double kCdUncertainWeight = 0.25;
inline constexpr double kDAloneUncertainWeight = 0.5;

// Diagonal amplitude-level measurement weights, each in [0, 1]. Acts on
// 3-dimensional block states or 6-dimensional belief states.
class MeasurementOperator {
 public:
  explicit MeasurementOperator(std::vector<double> diagonal);

  const std::vector<double>& diagonal() const { return diagonal_; }
  std::size_t dim() const { return diagonal_.size(); }

 private:
  std::vector<double> diagonal_;
};

// Outcome probabilities of the three actions after deliberation. Sums to 1
// within kActionSumTol when produced by action_probabilities.
struct ActionProbabilities {
  double attack = 0.0;
  double uncertain = 0.0;
  double withdraw = 0.0;
};

// Σ_k diagonal(k)² · |amplitude(k)|².
double measure_probability(const BlockState& state,
                           const MeasurementOperator& op);
double measure_probability(const BeliefState& state,
                           const MeasurementOperator& op);

// Squared moduli of the evolved block amplitudes.
ActionProbabilities action_probabilities(const BlockState& evolved);

// attack + uncertain_weight · uncertain: the conditional attack probability a
// participant reports, with part of the unresolved probability counted as
// attack.
double reported_conditional_attack(const ActionProbabilities& probs,
                                   double uncertain_weight = kCdUncertainWeight);

// Even split of the unresolved probability between attack and withdraw.
std::pair<double, double> split_uncertain(double p_uncertain);

// diag(1, 0.5, 0): attack detector after an explicit categorization.
MeasurementOperator cd_measurement_operator();

// diag(1, 1/√2, 0): attack detector when no categorization is reported.
MeasurementOperator d_alone_measurement_operator();

}  // namespace qdb
