#pragma once

#include <numbers>
#include <utility>

#include "qdb/linalg.hpp"

namespace qdb {

inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kPriorSumTol = 1e-9;
// Block weights below floating-point noise are treated as zero amplitude.
inline constexpr double kZeroBlockTol = 1e-15;
// Deliberation time at which the model is evaluated unless overridden.
inline constexpr double kDefaultProcessTime = std::numbers::pi / 2.0;

// Category assigned to the stimulus before the action decision.
enum class Category { Good, Bad };

// Unit-norm amplitudes over the six joint categorization-action states,
// ordered (attack|good, uncertain|good, withdraw|good,
//          attack|bad,  uncertain|bad,  withdraw|bad).
class BeliefState {
 public:
  static constexpr Eigen::Index kDim = 6;

  explicit BeliefState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

// Unit-norm amplitudes over (attack, uncertain, withdraw) within one category.
class BlockState {
 public:
  static constexpr Eigen::Index kDim = 3;

  explicit BlockState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

// Reward-difference parameters of the two category blocks plus the
// deliberation time.
struct HamiltonianParams {
  double h_good = 0.0;
  double h_bad = 0.0;
  double time = kDefaultProcessTime;
};

// Equal amplitude 1/√6 on all six states.
BeliefState uniform_initial_state();

// √(p_good/3) on the good-block states, √(p_bad/3) on the bad-block states.
// Priors must lie in [0, 1] and sum to 1 within kPriorSumTol.
BeliefState initial_state_from_priors(double p_good, double p_bad);

// Renormalized restriction of the state to one category block. Throws when
// the selected block carries (numerically) zero weight.
BlockState condition_on_category(const BeliefState& state, Category category);

// (squared norm of the good block, squared norm of the bad block).
std::pair<double, double> block_weights(const BeliefState& state);

// 3x3 generator of within-block deliberation:
//   [[h, 0, 1], [0, 1, 0], [1, 0, -h]]
// h trades off the attack/withdraw payoff; the uncertain row is decoupled.
HermitianMatrix build_block_hamiltonian(double reward_difference);

// 6x6 block-diagonal generator: good block with params.h_good, bad block with
// params.h_bad, no cross-category coupling.
HermitianMatrix build_full_hamiltonian(const HamiltonianParams& params);

// Unitary evolution e^{-iHt} applied to the state. Norm is preserved.
BeliefState evolve(const BeliefState& state, const HermitianMatrix& hamiltonian,
                   double time);
BlockState evolve(const BlockState& state, const HermitianMatrix& hamiltonian,
                  double time);

}  // namespace qdb
