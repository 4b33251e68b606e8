#pragma once

#include "didcont/estimator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace didcont {

//! Per-observation score values psi_i together with the kernel term
//! omega_i * 1{T_i = t} (panel: omega_i) and its mean pi_hat, which enter the
//! variance correction for the estimated treated-dose density.
struct ScoreVector
{
  Eigen::VectorXd psi;
  Eigen::VectorXd kernel_term;
  double pi_hat = 0.0;
  double delta_hat = 0.0;

  Eigen::Index n() const { return psi.size(); }
  //! psi_i - delta_hat - (delta_hat / pi_hat) (kernel_term_i - pi_hat).
  Eigen::VectorXd influence() const;
};

//! Scores of the normalized estimator: psi_i = n * sum_g sign_g w~_gi r_gi,
//! so that mean(psi) reproduces the point estimate. For the treated group
//! n * w~_1i equals omega_i 1{T_i = t} / pi_hat on an untrimmed sample.
ScoreVector compute_scores(const DrComponents& components,
                           const Eigen::VectorXd& kernel_term,
                           double delta_hat);

ScoreVector compute_scores(const RepeatedCrossSectionSample& sample,
                           const NuisanceSet& nuisances,
                           const EstimandSpec& estimand,
                           const EstimationConfig& config,
                           double delta_hat);

ScoreVector compute_scores(const PanelSample& sample,
                           const NuisanceSet& nuisances,
                           const EstimandSpec& estimand,
                           const EstimationConfig& config,
                           double delta_hat);

//! sigma_h^2 = mean of squared influence values.
double variance_hat(const ScoreVector& scores);

//! delta_hat -+ z_{1 - alpha/2} sigma / sqrt(n).
std::pair<double, double> ci_asymptotic(double delta_hat,
                                        double sigma2_hat,
                                        Eigen::Index n,
                                        double alpha);

enum class MultiplierLaw
{
  exponential,
  //! xi == 1, a test hook collapsing every draw onto the point estimate.
  constant_one
};

//! Multiplier bootstrap interval [delta - c_{1-a/2}, delta - c_{a/2}] where c
//! are type-7 quantiles of delta^b - delta over the draws
//!   delta^b = delta + (1/n) sum_i (xi_i^b - 1) influence_i
//! with mean-one, variance-one multipliers xi. The multipliers perturb the
//! centered influence values, whose second moment is sigma_h^2.
//! Replication b uses the stream derive_seed(seed, {b}). OpenMP-parallel.
std::pair<double, double> multiplier_bootstrap(const ScoreVector& scores,
                                               int replications,
                                               double alpha,
                                               std::uint64_t seed,
                                               MultiplierLaw law = MultiplierLaw::exponential);

//! Serial reference for multiplier_bootstrap.
std::pair<double, double> multiplier_bootstrap_serial(
  const ScoreVector& scores,
  int replications,
  double alpha,
  std::uint64_t seed,
  MultiplierLaw law = MultiplierLaw::exponential);

//! The bootstrap draws delta^b themselves, in replication order.
Eigen::VectorXd bootstrap_draws(const ScoreVector& scores,
                                int replications,
                                std::uint64_t seed,
                                MultiplierLaw law = MultiplierLaw::exponential);

//! Multipliers of replication b (exposed for moment checks).
Eigen::VectorXd draw_multipliers(Eigen::Index n,
                                 std::uint64_t seed,
                                 std::uint64_t replication,
                                 MultiplierLaw law = MultiplierLaw::exponential);

//! Type-7 (linear interpolation) sample quantile.
double quantile_type7(std::vector<double> values, double prob);

double normal_quantile(double p);

} // namespace didcont
