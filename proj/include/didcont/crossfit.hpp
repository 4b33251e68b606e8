#pragma once

#include "didcont/model.hpp"
#include "didcont/nuisance.hpp"

#include <cstdint>
#include <vector>

namespace didcont {

//! Partition of rows into K cross-fitting folds.
struct FoldAssignment
{
  std::vector<int> fold_of;
  int folds = 0;

  std::vector<Eigen::Index> members(int k) const;
  std::vector<Eigen::Index> complement(int k) const;
  bool operator==(const FoldAssignment&) const = default;
};

//! Seeded uniform partition; sizes differ by at most one.
FoldAssignment split_folds(Eigen::Index n, int folds, std::uint64_t seed);

//! Cross-fitted nuisances: for every fold k the models are trained on the
//! complement and predicted on fold k, then stacked in original row order.
//! Fold failures are rethrown with the fold index prepended.
NuisanceSet crossfit_nuisances(const RepeatedCrossSectionSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config);
NuisanceSet crossfit_nuisances(const PanelSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config);

//! Same, with an explicit fold assignment.
NuisanceSet crossfit_nuisances(const RepeatedCrossSectionSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config,
                               const FoldAssignment& folds);
NuisanceSet crossfit_nuisances(const PanelSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config,
                               const FoldAssignment& folds);

RepeatedCrossSectionSample subset(const RepeatedCrossSectionSample& sample,
                                  const std::vector<Eigen::Index>& rows);
PanelSample subset(const PanelSample& sample,
                   const std::vector<Eigen::Index>& rows);

} // namespace didcont
