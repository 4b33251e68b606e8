#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace didcont {

//! Linear model fit by weighted lasso on standardized features. Coefficients
//! live on the standardized scale; `predict` standardizes its input first.
struct LassoModel
{
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  double lambda = 0.0;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_scales;

  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const;
  //! Coefficients on the original feature scale.
  Eigen::VectorXd raw_coefficients() const;
  double raw_intercept() const;
};

//! Penalized logistic regression for Pr(label = 1 | features).
struct LogisticLassoModel
{
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  double lambda = 0.0;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_scales;

  double predict_proba_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& features) const;
};

struct LassoOptions
{
  //! Coordinate descent stops once no coefficient moves by more than this
  //! in a full sweep.
  double tolerance = 1e-7;
  int max_sweeps = 100000;
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  //! Paths stop early once this fraction of null deviance is explained
  //! (the fit is saturating).
  double max_deviance_ratio = 0.999;
  //! Called with the objective value after every coordinate-descent sweep.
  std::function<void(double)> on_sweep;
};

//! `count` log-spaced values from lambda_max down to ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max, int count, double ratio);

//! Smallest lambda with an all-zero weighted lasso solution.
double lasso_lambda_max(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& targets,
                        const Eigen::VectorXd& weights);

//! Weighted lasso minimizing
//!   (1 / 2 sum w) sum_i w_i (y_i - b0 - xs_i beta)^2 + lambda |beta|_1
//! over standardized features xs. An empty `lambda_grid` selects the default
//! path; a single value is fit directly, otherwise lambda is chosen by
//! `cv_folds`-fold cross-validated weighted mean squared error.
//! Zero-weight rows are ignored. Throws InputError when all weights are zero.
LassoModel fit_lasso(const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& targets,
                     const Eigen::VectorXd& weights,
                     const std::vector<double>& lambda_grid,
                     int cv_folds,
                     std::uint64_t seed,
                     const LassoOptions& options = {});

//! Penalized logistic regression (-loglik / m + lambda |beta|_1) by
//! coordinate descent on IRLS quadratic approximations; lambda chosen by
//! cross-validated deviance. Throws InputError for single-class labels.
LogisticLassoModel fit_logistic_lasso(const Eigen::MatrixXd& features,
                                      const Eigen::VectorXd& labels,
                                      const std::vector<double>& lambda_grid,
                                      int cv_folds,
                                      std::uint64_t seed,
                                      const LassoOptions& options = {});

//! Fold index per row for inner cross-validation. Rows are ranked by a
//! seeded hash of their content and dealt round-robin, so the assignment
//! follows the observation rather than its position in the input.
std::vector<int> content_folds(const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& weights,
                               int folds,
                               std::uint64_t seed);

} // namespace didcont
