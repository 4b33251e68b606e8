#pragma once

#include "didcont/lasso.hpp"
#include "didcont/model.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace didcont {

//! Lower bound applied to every generalized propensity score prediction.
inline constexpr double density_floor = 1e-4;
//! Lower bound on the residual standard deviation of a density model.
inline constexpr double sigma_floor = 1e-6;

//! Normal (or lognormal) model for the dose given features.
struct CondDensityModel
{
  DensityFamily family = DensityFamily::linear_normal;
  LassoModel mean_model;
  double sigma = 1.0;
};

CondDensityModel fit_cond_density(const Eigen::MatrixXd& features,
                                  const Eigen::VectorXd& doses,
                                  DensityFamily family,
                                  const std::vector<double>& lambda_grid,
                                  int cv_folds,
                                  std::uint64_t seed);

//! Conditional density of the dose at `d`, floored at density_floor.
double density_at_row(const CondDensityModel& model,
                      const Eigen::Ref<const Eigen::RowVectorXd>& features_row,
                      double d);

//! Same as density_at_row without the floor, for quadrature checks.
double density_at_unfloored(const CondDensityModel& model,
                            const Eigen::Ref<const Eigen::RowVectorXd>& features_row,
                            double d);

Eigen::VectorXd density_at(const CondDensityModel& model,
                           const Eigen::MatrixXd& features,
                           double d);

//! Per-observation nuisance predictions. Repeated cross-sections fill the
//! mu/rho slots, panels the m/p slots. Naming: `treat` is dose d_t, `control`
//! is d'_t, `post` is period t and `pre` period t - 1.
struct NuisanceSet
{
  Design design = Design::rcs;

  Eigen::VectorXd mu_treat_pre;
  Eigen::VectorXd mu_control_post;
  Eigen::VectorXd mu_control_pre;
  Eigen::VectorXd rho_treat_post;
  Eigen::VectorXd rho_treat_pre;
  Eigen::VectorXd rho_control_post;
  Eigen::VectorXd rho_control_pre;

  Eigen::VectorXd m_control;
  Eigen::VectorXd p_treat;
  Eigen::VectorXd p_control;

  Eigen::Index size() const;
  //! Allocates full-length slots for `design`.
  static NuisanceSet allocate(Design design, Eigen::Index n);
  //! Writes `part` into rows `rows` of this set.
  void scatter(const NuisanceSet& part, const std::vector<Eigen::Index>& rows);
  NuisanceSet gather(const std::vector<Eigen::Index>& rows) const;
};

//! Fits every repeated-cross-section nuisance on `train` and predicts at
//! `eval_features` (rows of [history | x]). Only features of evaluation rows
//! are visible here. Throws EstimationError("empty local cell ...") when a
//! (dose, period) cell carries no kernel weight.
NuisanceSet estimate_nuisances_rcs(const RepeatedCrossSectionSample& train,
                                   const Eigen::MatrixXd& eval_features,
                                   const EstimandSpec& estimand,
                                   const EstimationConfig& config,
                                   double h,
                                   std::uint64_t seed);

NuisanceSet estimate_nuisances_panel(const PanelSample& train,
                                     const Eigen::MatrixXd& eval_features,
                                     const EstimandSpec& estimand,
                                     const EstimationConfig& config,
                                     double h,
                                     std::uint64_t seed);

} // namespace didcont
