#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace didcont {

enum class KernelFamily
{
  epanechnikov,
  gaussian
};

enum class DensityFamily
{
  linear_normal,
  loglinear_normal
};

enum class Design
{
  rcs,
  panel
};

//! Column-labeled table of reals, the raw form of every dataset before
//! validation. Columns are stored column-major.
struct Table
{
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  //! Index of a column, or -1.
  int find(const std::string& name) const;
  void add(std::string name, std::vector<double> values);
};

//! Repeated cross-sections: each unit is observed in exactly one period.
//! `history_lags[k]` is the lag (relative to the outcome period t) of the
//! dose stored in history column k, i.e. column `d_lag<l>` holds D_{t-l}.
struct RepeatedCrossSectionSample
{
  Eigen::VectorXd y;
  Eigen::VectorXd d;
  Eigen::MatrixXd history;
  Eigen::MatrixXd x;
  std::vector<int> period;
  std::vector<int> history_lags;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }
  Eigen::Index q() const { return history.cols(); }
  bool operator==(const RepeatedCrossSectionSample& other) const;
};

//! Balanced two-wave panel.
struct PanelSample
{
  Eigen::VectorXd y_post;
  Eigen::VectorXd y_pre;
  Eigen::VectorXd d;
  Eigen::MatrixXd history;
  Eigen::MatrixXd x;
  std::vector<int> history_lags;

  Eigen::Index n() const { return y_post.size(); }
  Eigen::Index p() const { return x.cols(); }
  Eigen::Index q() const { return history.cols(); }
  bool operator==(const PanelSample& other) const;
};

//! Targeted ATET: dose `d_treat` versus `d_control` given in period t - lag,
//! outcome measured in period t.
struct EstimandSpec
{
  double d_treat = 0.0;
  double d_control = 0.0;
  int t = 1;
  int lag = 0;

  bool operator==(const EstimandSpec&) const = default;
};

struct EstimationConfig
{
  int folds = 3;
  KernelFamily kernel = KernelFamily::epanechnikov;
  std::optional<double> bandwidth;
  double undersmooth_factor = 1.0;
  double trim_threshold = 0.1;
  DensityFamily ps_family = DensityFamily::linear_normal;
  int lasso_cv_folds = 10;
  std::uint64_t seed = 1;

  //! Throws InputError on out-of-range settings.
  void validate() const;
  //! Bandwidth used for a sample of size n: the explicit override when set,
  //! otherwise the rule of thumb divided by `undersmooth_factor`.
  double bandwidth_for(Eigen::Index n) const;
};

std::string to_string(KernelFamily family);
std::string to_string(DensityFamily family);
std::string to_string(Design design);
KernelFamily parse_kernel_family(const std::string& name);
DensityFamily parse_density_family(const std::string& name);
Design parse_design(const std::string& name);

//! Validates a raw table with columns y, d, t, optional d_lag<k>, x<j>.
//! When `estimand` is given, rows are restricted to the periods t and
//! t - lag - 1, both of which must be present.
RepeatedCrossSectionSample validate_rcs(
  const Table& raw,
  const std::optional<EstimandSpec>& estimand = std::nullopt);

//! Validates a raw table with columns y_pre, y_post, d, optional d_lag<k>, x<j>.
PanelSample validate_panel(const Table& raw);

//! Inverse of validate_*: the canonical table layout used for CSV output.
Table to_table(const RepeatedCrossSectionSample& sample);
Table to_table(const PanelSample& sample);

//! Maps a lagged estimand onto the unlagged estimators. The pre period
//! t - lag - 1 is relabeled t - 1 and history lags are shifted by `lag`.
std::pair<RepeatedCrossSectionSample, EstimandSpec> relabel_lagged(
  const RepeatedCrossSectionSample& sample,
  const EstimandSpec& estimand);
std::pair<PanelSample, EstimandSpec> relabel_lagged(const PanelSample& sample,
                                                    const EstimandSpec& estimand);

//! Nuisance features [history | x].
Eigen::MatrixXd nuisance_features(const Eigen::MatrixXd& history,
                                  const Eigen::MatrixXd& x);

} // namespace didcont
