#include "didcont/inference.hpp"
#include "didcont/errors.hpp"
#include "didcont/kernel.hpp"
#include "didcont/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace didcont {

Eigen::VectorXd ScoreVector::influence() const
{
  return (psi.array() - delta_hat -
          (delta_hat / pi_hat) * (kernel_term.array() - pi_hat))
    .matrix();
}

ScoreVector compute_scores(const DrComponents& c,
                           const Eigen::VectorXd& kernel_term,
                           double delta_hat)
{
  const Eigen::Index n = kernel_term.size();
  ScoreVector s;
  s.delta_hat = delta_hat;
  s.kernel_term = kernel_term;
  s.pi_hat = compensated_sum(kernel_term) / static_cast<double>(n);
  if (!(s.pi_hat >= 1e-12))
    throw EstimationError("estimated treated-dose density below 1e-12");
  s.psi = Eigen::VectorXd::Zero(n);
  for (std::size_t g = 0; g < c.weights.groups(); ++g)
    s.psi += c.signs[g] *
             c.weights.normalized[g].cwiseProduct(c.residuals[g]);
  s.psi *= static_cast<double>(n);
  return s;
}

ScoreVector compute_scores(const RepeatedCrossSectionSample& sample,
                           const NuisanceSet& nuisances,
                           const EstimandSpec& estimand,
                           const EstimationConfig& config,
                           double delta_hat)
{
  const DrComponents c = dr_components_rcs(sample, nuisances, estimand, config);
  Eigen::VectorXd k = omega_weights(sample.d, estimand.d_treat, c.h, config.kernel);
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    if (sample.period[static_cast<std::size_t>(i)] != estimand.t)
      k[i] = 0.0;
  }
  return compute_scores(c, k, delta_hat);
}

ScoreVector compute_scores(const PanelSample& sample,
                           const NuisanceSet& nuisances,
                           const EstimandSpec& estimand,
                           const EstimationConfig& config,
                           double delta_hat)
{
  const DrComponents c = dr_components_panel(sample, nuisances, estimand, config);
  return compute_scores(
    c, omega_weights(sample.d, estimand.d_treat, c.h, config.kernel), delta_hat);
}

double variance_hat(const ScoreVector& scores)
{
  const Eigen::VectorXd inf = scores.influence();
  return compensated_sum(inf.cwiseAbs2()) / static_cast<double>(inf.size());
}

double normal_quantile(double p)
{
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::pair<double, double> ci_asymptotic(double delta_hat,
                                        double sigma2_hat,
                                        Eigen::Index n,
                                        double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("alpha must lie in (0, 1)");
  const double half =
    normal_quantile(1.0 - alpha / 2.0) * std::sqrt(sigma2_hat / static_cast<double>(n));
  return { delta_hat - half, delta_hat + half };
}

double quantile_type7(std::vector<double> values, double prob)
{
  if (values.empty())
    throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Eigen::VectorXd draw_multipliers(Eigen::Index n,
                                 std::uint64_t seed,
                                 std::uint64_t replication,
                                 MultiplierLaw law)
{
  if (law == MultiplierLaw::constant_one)
    return Eigen::VectorXd::Ones(n);
  Rng rng(derive_seed(seed, { replication }));
  std::exponential_distribution<double> exp1(1.0);
  Eigen::VectorXd xi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    xi[i] = exp1(rng);
  return xi;
}

namespace {

double one_draw(const ScoreVector& scores,
                const Eigen::VectorXd& inf,
                std::uint64_t seed,
                std::uint64_t b,
                MultiplierLaw law)
{
  const Eigen::VectorXd xi = draw_multipliers(inf.size(), seed, b, law);
  const Eigen::VectorXd centered = (xi.array() - 1.0).matrix().cwiseProduct(inf);
  return scores.delta_hat +
         compensated_sum(centered) / static_cast<double>(inf.size());
}

std::pair<double, double> interval(const ScoreVector& scores,
                                   const Eigen::VectorXd& draws,
                                   double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("alpha must lie in (0, 1)");
  std::vector<double> diff(static_cast<std::size_t>(draws.size()));
  for (Eigen::Index b = 0; b < draws.size(); ++b)
    diff[static_cast<std::size_t>(b)] = draws[b] - scores.delta_hat;
  const double upper_q = quantile_type7(diff, 1.0 - alpha / 2.0);
  const double lower_q = quantile_type7(diff, alpha / 2.0);
  return { scores.delta_hat - upper_q, scores.delta_hat - lower_q };
}

void check_replications(int replications)
{
  if (replications < 100)
    throw InputError("bootstrap needs at least 100 replications");
}

} // namespace

Eigen::VectorXd bootstrap_draws(const ScoreVector& scores,
                                int replications,
                                std::uint64_t seed,
                                MultiplierLaw law)
{
  const Eigen::VectorXd inf = scores.influence();
  Eigen::VectorXd draws(replications);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < replications; ++b)
    draws[b] = one_draw(scores, inf, seed, static_cast<std::uint64_t>(b), law);
  return draws;
}

std::pair<double, double> multiplier_bootstrap(const ScoreVector& scores,
                                               int replications,
                                               double alpha,
                                               std::uint64_t seed,
                                               MultiplierLaw law)
{
  check_replications(replications);
  return interval(scores, bootstrap_draws(scores, replications, seed, law), alpha);
}

std::pair<double, double> multiplier_bootstrap_serial(const ScoreVector& scores,
                                                      int replications,
                                                      double alpha,
                                                      std::uint64_t seed,
                                                      MultiplierLaw law)
{
  check_replications(replications);
  const Eigen::VectorXd inf = scores.influence();
  Eigen::VectorXd draws(replications);
  for (int b = 0; b < replications; ++b)
    draws[b] = one_draw(scores, inf, seed, static_cast<std::uint64_t>(b), law);
  return interval(scores, draws, alpha);
}

} // namespace didcont
