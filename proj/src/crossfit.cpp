#include "didcont/crossfit.hpp"
#include "didcont/errors.hpp"
#include "didcont/rng.hpp"

#include <algorithm>
#include <numeric>

namespace didcont {

std::vector<Eigen::Index> FoldAssignment::members(int k) const
{
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == k)
      rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

std::vector<Eigen::Index> FoldAssignment::complement(int k) const
{
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != k)
      rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

FoldAssignment split_folds(Eigen::Index n, int folds, std::uint64_t seed)
{
  if (folds < 2)
    throw InputError("need at least 2 folds");
  if (n < folds)
    throw InputError("fewer observations (" + std::to_string(n) +
                     ") than folds (" + std::to_string(folds) + ")");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{ 0 });
  Rng rng(derive_seed(seed, { 0xf01d }));
  std::shuffle(order.begin(), order.end(), rng);
  FoldAssignment out;
  out.folds = folds;
  out.fold_of.resize(static_cast<std::size_t>(n));
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    out.fold_of[static_cast<std::size_t>(order[pos])] =
      static_cast<int>(pos % static_cast<std::size_t>(folds));
  return out;
}

RepeatedCrossSectionSample subset(const RepeatedCrossSectionSample& s,
                                  const std::vector<Eigen::Index>& rows)
{
  RepeatedCrossSectionSample out;
  out.y = s.y(rows);
  out.d = s.d(rows);
  out.history = s.history(rows, Eigen::all);
  out.x = s.x(rows, Eigen::all);
  out.period.reserve(rows.size());
  for (Eigen::Index i : rows)
    out.period.push_back(s.period[static_cast<std::size_t>(i)]);
  out.history_lags = s.history_lags;
  return out;
}

PanelSample subset(const PanelSample& s, const std::vector<Eigen::Index>& rows)
{
  PanelSample out;
  out.y_post = s.y_post(rows);
  out.y_pre = s.y_pre(rows);
  out.d = s.d(rows);
  out.history = s.history(rows, Eigen::all);
  out.x = s.x(rows, Eigen::all);
  out.history_lags = s.history_lags;
  return out;
}

namespace {

template<typename Sample, typename Estimate>
NuisanceSet crossfit(const Sample& sample,
                     const EstimandSpec& estimand,
                     const EstimationConfig& config,
                     const FoldAssignment& folds,
                     Design design,
                     Estimate&& estimate)
{
  config.validate();
  if (folds.fold_of.size() != static_cast<std::size_t>(sample.n()))
    throw InputError("fold assignment does not match the sample size");
  if (sample.n() < 4 * static_cast<Eigen::Index>(folds.folds))
    throw InputError("need at least 4 observations per fold");
  const double h = config.bandwidth_for(sample.n());
  const Eigen::MatrixXd features = nuisance_features(sample.history, sample.x);
  NuisanceSet stacked = NuisanceSet::allocate(design, sample.n());
  for (int k = 0; k < folds.folds; ++k) {
    const auto eval_rows = folds.members(k);
    if (eval_rows.empty())
      continue;
    const Sample train = subset(sample, folds.complement(k));
    const Eigen::MatrixXd eval_features = features(eval_rows, Eigen::all);
    try {
      const NuisanceSet part =
        estimate(train, eval_features, estimand, config, h,
                 derive_seed(config.seed, { static_cast<std::uint64_t>(k) }));
      stacked.scatter(part, eval_rows);
    } catch (const EstimationError& e) {
      throw EstimationError("fold " + std::to_string(k) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("fold " + std::to_string(k) + ": " + e.what());
    }
  }
  return stacked;
}

} // namespace

NuisanceSet crossfit_nuisances(const RepeatedCrossSectionSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config,
                               const FoldAssignment& folds)
{
  return crossfit(sample, estimand, config, folds, Design::rcs,
                  estimate_nuisances_rcs);
}

NuisanceSet crossfit_nuisances(const PanelSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config,
                               const FoldAssignment& folds)
{
  return crossfit(sample, estimand, config, folds, Design::panel,
                  estimate_nuisances_panel);
}

NuisanceSet crossfit_nuisances(const RepeatedCrossSectionSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config)
{
  return crossfit_nuisances(sample, estimand, config,
                            split_folds(sample.n(), config.folds, config.seed));
}

NuisanceSet crossfit_nuisances(const PanelSample& sample,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config)
{
  return crossfit_nuisances(sample, estimand, config,
                            split_folds(sample.n(), config.folds, config.seed));
}

} // namespace didcont
