#pragma once

#include "didcont/estimator.hpp"
#include "didcont/model.hpp"

namespace didcont {

struct InferenceOptions
{
  double alpha = 0.05;
  //! Bootstrap replications; 0 disables the bootstrap interval.
  int bootstrap = 0;
};

//! Full run: lag relabeling, cross-fitted nuisances, point estimate, scores,
//! asymptotic interval and optionally the multiplier bootstrap interval.
AtetEstimate run_estimation(const RepeatedCrossSectionSample& sample,
                            const EstimandSpec& estimand,
                            const EstimationConfig& config,
                            const InferenceOptions& inference = {});
AtetEstimate run_estimation(const PanelSample& sample,
                            const EstimandSpec& estimand,
                            const EstimationConfig& config,
                            const InferenceOptions& inference = {});

} // namespace didcont
