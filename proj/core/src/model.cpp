#include "qdb/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qdb {

namespace {

BlockState uniform_block_state() {
  return BlockState(
      ComplexVector::Constant(BlockState::kDim, 1.0 / std::sqrt(3.0)));
}

void require_probability(double p, const char* who, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    std::ostringstream msg;
    msg << who << ": " << what << " = " << p << " must lie in [0, 1]";
    throw std::invalid_argument(msg.str());
  }
}

void require_priors(double p_good, double p_bad, const char* who) {
  require_probability(p_good, who, "p_good");
  require_probability(p_bad, who, "p_bad");
  if (std::abs(p_good + p_bad - 1.0) > kPriorSumTol) {
    std::ostringstream msg;
    msg << who << ": priors (" << p_good << ", " << p_bad
        << ") must sum to 1 within " << kPriorSumTol;
    throw std::invalid_argument(msg.str());
  }
}

void require_options(const FitOptions& options) {
  if (!std::isfinite(options.h_min) || !std::isfinite(options.h_max) ||
      options.h_min >= options.h_max) {
    throw std::invalid_argument("FitOptions: need finite h_min < h_max");
  }
  if (!std::isfinite(options.grid_step) || options.grid_step <= 0.0) {
    throw std::invalid_argument("FitOptions: grid step must be positive");
  }
  if (!std::isfinite(options.refine_width) || options.refine_width <= 0.0) {
    throw std::invalid_argument("FitOptions: refine width must be positive");
  }
  if (!std::isfinite(options.time) || options.time < 0.0) {
    throw std::invalid_argument("FitOptions: time must be non-negative");
  }
  require_probability(options.w_cd, "FitOptions", "w_cd");
  require_probability(options.w_d, "FitOptions", "w_d");
}

// Minimizes a unimodal objective on [lo, hi] down to interval width `width`.
template <typename F>
double golden_section_min(const F& f, double lo, double hi, double width) {
  constexpr double kInvPhi = 0.6180339887498949;  // (√5 - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Tie order for equal grid objectives: smaller |h| wins, then smaller h.
bool tie_prefers(double candidate, double incumbent) {
  const double ca = std::abs(candidate);
  const double ia = std::abs(incumbent);
  if (ca != ia) {
    return ca < ia;
  }
  return candidate < incumbent;
}

}  // namespace

double qdb_conditional(double h, double t, double uncertain_weight) {
  const BlockState evolved =
      evolve(uniform_block_state(), build_block_hamiltonian(h), t);
  return reported_conditional_attack(action_probabilities(evolved),
                                     uncertain_weight);
}

double closed_form_conditional(double h, double uncertain_weight) {
  if (!std::isfinite(h)) {
    throw std::invalid_argument(
        "closed_form_conditional: parameter must be finite");
  }
  if (!std::isfinite(uncertain_weight) || uncertain_weight < 0.0 ||
      uncertain_weight > 1.0) {
    throw std::invalid_argument(
        "closed_form_conditional: uncertain weight must lie in [0, 1]");
  }
  const double lambda_sq = 1.0 + h * h;
  const double lambda = std::sqrt(lambda_sq);
  const double theta = lambda * std::numbers::pi / 2.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double attack =
      (c * c + s * s * (1.0 + h) * (1.0 + h) / lambda_sq) / 3.0;
  return uncertain_weight / 3.0 + attack;
}

Prediction predict(double p_good, double p_bad, const HamiltonianParams& params,
                   double w_cd, double w_d) {
  require_priors(p_good, p_bad, "predict");
  if (!std::isfinite(params.time) || params.time < 0.0) {
    throw std::invalid_argument("predict: time must be non-negative");
  }

  const auto block_outcomes = [&](double h) {
    const BlockState evolved =
        evolve(uniform_block_state(), build_block_hamiltonian(h), params.time);
    return action_probabilities(evolved);
  };
  const ActionProbabilities good = block_outcomes(params.h_good);
  const ActionProbabilities bad = block_outcomes(params.h_bad);

  Prediction out;
  out.p_attack_given_good = reported_conditional_attack(good, w_cd);
  out.p_attack_given_bad = reported_conditional_attack(bad, w_cd);
  out.p_uncertain_given_good = good.uncertain;
  out.p_uncertain_given_bad = bad.uncertain;
  out.p_total_cd =
      p_good * out.p_attack_given_good + p_bad * out.p_attack_given_bad;
  out.p_attack_d_alone = p_good * reported_conditional_attack(good, w_d) +
                         p_bad * reported_conditional_attack(bad, w_d);
  out.interference = out.p_attack_d_alone - out.p_total_cd;
  return out;
}

double markov_total_probability(double p_good, double p_attack_given_good,
                                double p_bad, double p_attack_given_bad) {
  require_priors(p_good, p_bad, "markov_total_probability");
  require_probability(p_attack_given_good, "markov_total_probability",
                      "p_attack_given_good");
  require_probability(p_attack_given_bad, "markov_total_probability",
                      "p_attack_given_bad");
  return p_good * p_attack_given_good + p_bad * p_attack_given_bad;
}

BlockFit fit_block_param(double target_conditional, double uncertain_weight,
                         const FitOptions& options) {
  require_probability(target_conditional, "fit_block_param", "target");
  require_options(options);

  const auto objective = [&](double h) {
    const double diff =
        qdb_conditional(h, options.time, uncertain_weight) - target_conditional;
    return diff * diff;
  };

  // Grid points are derived from integer indices so that symmetric values
  // land on exactly opposite doubles and the tie order is well defined.
  const auto steps = static_cast<long>(
      std::floor((options.h_max - options.h_min) / options.grid_step + 0.5));
  std::vector<double> values(static_cast<std::size_t>(steps) + 1);
  double best_value = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    double h = options.h_min + static_cast<double>(i) * options.grid_step;
    if (h > options.h_max) {
      h = options.h_max;
    }
    const double value = objective(h);
    values[static_cast<std::size_t>(i)] = value;
    if (value < best_value) {
      best_value = value;
    }
  }

  double best_h = options.h_max;
  for (long i = 0; i <= steps; ++i) {
    if (values[static_cast<std::size_t>(i)] > best_value + kFitTieTol) {
      continue;
    }
    double h = options.h_min + static_cast<double>(i) * options.grid_step;
    if (h > options.h_max) {
      h = options.h_max;
    }
    if (tie_prefers(h, best_h)) {
      best_h = h;
    }
  }

  const double lo = std::max(options.h_min, best_h - options.grid_step);
  const double hi = std::min(options.h_max, best_h + options.grid_step);
  const double refined = golden_section_min(objective, lo, hi,
                                            options.refine_width);
  const double h = objective(refined) <= objective(best_h) ? refined : best_h;

  BlockFit fit;
  fit.h = h;
  fit.residual = std::abs(qdb_conditional(h, options.time, uncertain_weight) -
                          target_conditional);
  fit.clamped = fit.residual > kFitWarnResidual;
  return fit;
}

FittedModel fit_experiment(double p_good, double p_bad,
                           double obs_attack_given_good,
                           double obs_attack_given_bad,
                           const FitOptions& options) {
  require_priors(p_good, p_bad, "fit_experiment");
  const BlockFit good =
      fit_block_param(obs_attack_given_good, options.w_cd, options);
  const BlockFit bad =
      fit_block_param(obs_attack_given_bad, options.w_cd, options);

  FittedModel model;
  model.params = {good.h, bad.h, options.time};
  model.residual_good = good.residual;
  model.residual_bad = bad.residual;
  model.clamped_good = good.clamped;
  model.clamped_bad = bad.clamped;
  model.prediction =
      predict(p_good, p_bad, model.params, options.w_cd, options.w_d);
  return model;
}

}  // namespace qdb
