#include "didcont/pipeline.hpp"
#include "didcont/crossfit.hpp"
#include "didcont/errors.hpp"
#include "didcont/inference.hpp"
#include "didcont/rng.hpp"

#include <cmath>

namespace didcont {

namespace {

constexpr std::uint64_t bootstrap_stream = 0xb007;

void check(const InferenceOptions& inference)
{
  if (!(inference.alpha > 0.0 && inference.alpha < 1.0))
    throw InputError("alpha must lie in (0, 1)");
  if (inference.bootstrap != 0 && inference.bootstrap < 100)
    throw InputError("bootstrap needs at least 100 replications");
}

void add_inference(AtetEstimate& est,
                   const ScoreVector& scores,
                   const EstimationConfig& config,
                   const InferenceOptions& inference)
{
  const double sigma2 = variance_hat(scores);
  est.se = std::sqrt(sigma2 / static_cast<double>(scores.n()));
  std::tie(est.ci_low, est.ci_high) =
    ci_asymptotic(est.delta_hat, sigma2, scores.n(), inference.alpha);
  if (inference.bootstrap > 0) {
    const auto [lo, hi] =
      multiplier_bootstrap(scores,
                           inference.bootstrap,
                           inference.alpha,
                           derive_seed(config.seed, { bootstrap_stream }));
    est.boot_ci_low = lo;
    est.boot_ci_high = hi;
  }
}

template<typename Sample>
AtetEstimate run(const Sample& raw,
                 const EstimandSpec& raw_estimand,
                 const EstimationConfig& config,
                 const InferenceOptions& inference)
{
  config.validate();
  check(inference);
  const auto [sample, estimand] = relabel_lagged(raw, raw_estimand);
  const NuisanceSet nuisances = crossfit_nuisances(sample, estimand, config);
  AtetEstimate est;
  ScoreVector scores;
  if constexpr (std::is_same_v<Sample, PanelSample>) {
    est = atet_panel(sample, nuisances, estimand, config);
    scores = compute_scores(sample, nuisances, estimand, config, est.delta_hat);
  } else {
    est = atet_rcs(sample, nuisances, estimand, config);
    scores = compute_scores(sample, nuisances, estimand, config, est.delta_hat);
  }
  add_inference(est, scores, config, inference);
  return est;
}

} // namespace

AtetEstimate run_estimation(const RepeatedCrossSectionSample& sample,
                            const EstimandSpec& estimand,
                            const EstimationConfig& config,
                            const InferenceOptions& inference)
{
  return run(sample, estimand, config, inference);
}

AtetEstimate run_estimation(const PanelSample& sample,
                            const EstimandSpec& estimand,
                            const EstimationConfig& config,
                            const InferenceOptions& inference)
{
  return run(sample, estimand, config, inference);
}

} // namespace didcont
