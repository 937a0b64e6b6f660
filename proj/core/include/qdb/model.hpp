#pragma once

#include "qdb/belief.hpp"
#include "qdb/measurement.hpp"

namespace qdb {

// Search domain and stopping rules for the one-dimensional parameter fit.
inline constexpr double kFitHMin = -10.0;
inline constexpr double kFitHMax = 10.0;
inline constexpr double kFitGridStep = 1e-3;
inline constexpr double kFitRefineWidth = 1e-10;
// Grid objective values within this window of the minimum count as ties.
inline constexpr double kFitTieTol = 1e-12;
// Residuals above this mark the target as outside the model's range.
inline constexpr double kFitWarnResidual = 1e-6;

struct FitOptions {
  double h_min = kFitHMin;
  double h_max = kFitHMax;
  double grid_step = kFitGridStep;
  double refine_width = kFitRefineWidth;
  double time = kDefaultProcessTime;
  double w_cd = kCdUncertainWeight;
  double w_d = kDAloneUncertainWeight;
};

// Model outputs for one experiment: per-category reported conditionals and
// unresolved probabilities, the two-stage total, the decision-alone attack
// probability, and their gap.
struct Prediction {
  double p_attack_given_good = 0.0;
  double p_attack_given_bad = 0.0;
  double p_uncertain_given_good = 0.0;
  double p_uncertain_given_bad = 0.0;
  double p_total_cd = 0.0;
  double p_attack_d_alone = 0.0;
  // Always p_attack_d_alone - p_total_cd.
  double interference = 0.0;
};

// Best reward-difference parameter for one category block. clamped flags a
// residual above kFitWarnResidual, i.e. a target the model cannot reach.
struct BlockFit {
  double h = 0.0;
  double residual = 0.0;
  bool clamped = false;
};

struct FittedModel {
  HamiltonianParams params;
  double residual_good = 0.0;
  double residual_bad = 0.0;
  bool clamped_good = false;
  bool clamped_bad = false;
  Prediction prediction;
};

// Reported attack conditional from a uniform within-block start: evolve
// (1/√3, 1/√3, 1/√3) for time t under the block generator with parameter h,
// then count uncertain_weight of the unresolved probability as attack.
double qdb_conditional(double h, double t, double uncertain_weight);

// Analytic value of qdb_conditional at t = π/2, derived from the 2x2
// attack/withdraw sub-block (eigenvalues ±λ, λ = √(1+h²)) with the uncertain
// coordinate decoupled at probability 1/3:
//   w/3 + (1/3)(cos²(λπ/2) + sin²(λπ/2)(1+h)²/λ²).
// Serves as the independent cross-check for the matrix-exponential route.
double closed_form_conditional(double h, double uncertain_weight);

// Full model output for priors (p_good, p_bad) and block parameters. Weights
// default to the reported-conditional and decision-alone values.
Prediction predict(double p_good, double p_bad, const HamiltonianParams& params,
                   double w_cd = kCdUncertainWeight,
                   double w_d = kDAloneUncertainWeight);

// Law-of-total-probability baseline: p_good·p(A|G) + p_bad·p(A|B). A Markov
// model yields the same value with and without an explicit categorization, so
// its interference is identically zero.
double markov_total_probability(double p_good, double p_attack_given_good,
                                double p_bad, double p_attack_given_bad);

// Least-squares fit of the block parameter to one observed conditional:
// grid scan over [h_min, h_max], then golden-section refinement of the best
// cell down to refine_width. Grid minima tying within kFitTieTol resolve to
// the h of smallest absolute value, then the smaller signed value.
// Unreachable targets return their best residual with clamped set, no error.
BlockFit fit_block_param(double target_conditional, double uncertain_weight,
                         const FitOptions& options = {});

// Fit both blocks to the observed conditionals and predict with the result.
FittedModel fit_experiment(double p_good, double p_bad,
                           double obs_attack_given_good,
                           double obs_attack_given_bad,
                           const FitOptions& options = {});

}  // namespace qdb
