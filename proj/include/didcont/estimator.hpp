#pragma once

#include "didcont/model.hpp"
#include "didcont/nuisance.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace didcont {

//! Per-group observation weights of the doubly robust estimator.
//! Repeated cross-sections use four groups (d_t,t), (d_t,t-1), (d'_t,t),
//! (d'_t,t-1); panels use (d_t), (d'_t). Each group's retained normalized
//! weights sum to one and trimmed observations carry zero weight.
struct GroupWeights
{
  std::vector<std::string> labels;
  std::vector<Eigen::VectorXd> raw;
  std::vector<Eigen::VectorXd> normalized;
  std::vector<std::vector<bool>> trim_mask;

  std::size_t groups() const { return raw.size(); }
  std::vector<int> trimmed_counts() const;
};

struct AtetEstimate
{
  double delta_hat = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double h_used = 0.0;
  std::vector<int> n_trimmed_per_group;
  int n_effective = 0;
  std::optional<double> boot_ci_low;
  std::optional<double> boot_ci_high;
};

//! Weights and residuals entering the estimator; shared with the score
//! construction so both see the same trimmed observation set.
struct DrComponents
{
  GroupWeights weights;
  std::vector<Eigen::VectorXd> residuals;
  //! +1 or -1 per group.
  std::vector<double> signs;
  double h = 0.0;
};

GroupWeights build_weights_rcs(const RepeatedCrossSectionSample& sample,
                               const NuisanceSet& nuisances,
                               const EstimandSpec& estimand,
                               double h,
                               KernelFamily kernel);

GroupWeights build_weights_panel(const PanelSample& sample,
                                 const NuisanceSet& nuisances,
                                 const EstimandSpec& estimand,
                                 double h,
                                 KernelFamily kernel);

//! Iteratively drops observations whose normalized weight exceeds
//! `threshold` within their group and renormalizes, until none does.
//! Throws EstimationError if a group empties.
GroupWeights apply_trimming(const GroupWeights& weights, double threshold);

DrComponents dr_components_rcs(const RepeatedCrossSectionSample& sample,
                               const NuisanceSet& nuisances,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config);

DrComponents dr_components_panel(const PanelSample& sample,
                                 const NuisanceSet& nuisances,
                                 const EstimandSpec& estimand,
                                 const EstimationConfig& config);

//! Sum of sign * weight * residual over groups, paired so that identical
//! groups cancel exactly.
double combine(const DrComponents& components);

//! Normalized doubly robust point estimates (se left at zero).
AtetEstimate atet_rcs(const RepeatedCrossSectionSample& sample,
                      const NuisanceSet& nuisances,
                      const EstimandSpec& estimand,
                      const EstimationConfig& config);

AtetEstimate atet_panel(const PanelSample& sample,
                        const NuisanceSet& nuisances,
                        const EstimandSpec& estimand,
                        const EstimationConfig& config);

//! Neumaier-compensated sum in ascending index order.
double compensated_sum(const Eigen::VectorXd& v);

} // namespace didcont
