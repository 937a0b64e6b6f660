#include "qdb/belief.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qdb {

namespace {

void require_unit_norm(const ComplexVector& amplitudes, const char* who) {
  const double n2 = norm_squared(amplitudes);
  if (std::abs(n2 - 1.0) > kStateNormTol) {
    std::ostringstream msg;
    msg << who << ": squared norm " << n2 << " is not within " << kStateNormTol
        << " of 1";
    throw std::invalid_argument(msg.str());
  }
}

void require_valid_priors(double p_good, double p_bad, const char* who) {
  if (!std::isfinite(p_good) || !std::isfinite(p_bad) || p_good < 0.0 ||
      p_good > 1.0 || p_bad < 0.0 || p_bad > 1.0) {
    std::ostringstream msg;
    msg << who << ": priors (" << p_good << ", " << p_bad
        << ") must lie in [0, 1]";
    throw std::invalid_argument(msg.str());
  }
  if (std::abs(p_good + p_bad - 1.0) > kPriorSumTol) {
    std::ostringstream msg;
    msg << who << ": priors (" << p_good << ", " << p_bad
        << ") must sum to 1 within " << kPriorSumTol;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

BeliefState::BeliefState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != kDim) {
    throw std::invalid_argument("BeliefState: expected 6 amplitudes");
  }
  require_unit_norm(amplitudes_, "BeliefState");
}

BlockState::BlockState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != kDim) {
    throw std::invalid_argument("BlockState: expected 3 amplitudes");
  }
  require_unit_norm(amplitudes_, "BlockState");
}

BeliefState uniform_initial_state() {
  return BeliefState(
      ComplexVector::Constant(BeliefState::kDim, 1.0 / std::sqrt(6.0)));
}

BeliefState initial_state_from_priors(double p_good, double p_bad) {
  require_valid_priors(p_good, p_bad, "initial_state_from_priors");
  ComplexVector amplitudes(BeliefState::kDim);
  const double good_amp = std::sqrt(p_good / 3.0);
  const double bad_amp = std::sqrt(p_bad / 3.0);
  amplitudes << good_amp, good_amp, good_amp, bad_amp, bad_amp, bad_amp;
  // Priors may sum to 1 only within kPriorSumTol; renormalize so the state
  // meets the tighter unit-norm invariant.
  amplitudes /= amplitudes.norm();
  return BeliefState(std::move(amplitudes));
}

BlockState condition_on_category(const BeliefState& state, Category category) {
  const Eigen::Index offset = category == Category::Good ? 0 : 3;
  ComplexVector block = state.amplitudes().segment(offset, BlockState::kDim);
  const double weight = block.squaredNorm();
  if (weight <= kZeroBlockTol) {
    throw std::invalid_argument(
        "condition_on_category: selected category has zero amplitude");
  }
  block /= std::sqrt(weight);
  return BlockState(std::move(block));
}

std::pair<double, double> block_weights(const BeliefState& state) {
  const auto& a = state.amplitudes();
  return {a.head(BlockState::kDim).squaredNorm(),
          a.tail(BlockState::kDim).squaredNorm()};
}

HermitianMatrix build_block_hamiltonian(double reward_difference) {
  if (!std::isfinite(reward_difference)) {
    throw std::invalid_argument(
        "build_block_hamiltonian: reward difference must be finite");
  }
  ComplexMatrix h(3, 3);
  h << reward_difference, 0.0, 1.0,  //
      0.0, 1.0, 0.0,                 //
      1.0, 0.0, -reward_difference;
  return HermitianMatrix(std::move(h));
}

HermitianMatrix build_full_hamiltonian(const HamiltonianParams& params) {
  ComplexMatrix h = ComplexMatrix::Zero(BeliefState::kDim, BeliefState::kDim);
  h.topLeftCorner(3, 3) = build_block_hamiltonian(params.h_good).entries();
  h.bottomRightCorner(3, 3) = build_block_hamiltonian(params.h_bad).entries();
  return HermitianMatrix(std::move(h));
}

namespace {

ComplexVector evolved_amplitudes(const ComplexVector& amplitudes,
                                 const HermitianMatrix& hamiltonian,
                                 double time) {
  if (hamiltonian.dim() != amplitudes.size()) {
    std::ostringstream msg;
    msg << "evolve: Hamiltonian dimension " << hamiltonian.dim()
        << " does not match state dimension " << amplitudes.size();
    throw std::invalid_argument(msg.str());
  }
  const UnitaryMatrix u = matrix_exponential_unitary(hamiltonian, time);
  return u.entries() * amplitudes;
}

}  // namespace

BeliefState evolve(const BeliefState& state, const HermitianMatrix& hamiltonian,
                   double time) {
  return BeliefState(evolved_amplitudes(state.amplitudes(), hamiltonian, time));
}

BlockState evolve(const BlockState& state, const HermitianMatrix& hamiltonian,
                  double time) {
  return BlockState(evolved_amplitudes(state.amplitudes(), hamiltonian, time));
}

}  // namespace qdb
