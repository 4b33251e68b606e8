#pragma once

#include "didcont/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace didcont {

//! Coefficient vector beta_j = 0.4 / j^2, j = 1..p.
Eigen::VectorXd dgp_beta(Eigen::Index p);

//! Repeated cross-sections with periods 0 and 1:
//! T ~ Bernoulli(0.5); Q_j, U, V, W ~ U(0, 2); X_j = 0.5 T + Q_j;
//! D = X beta + 0.5 U + V; Y = X beta + (1 + D^2) T + U + W.
RepeatedCrossSectionSample gen_rcs_dgp(Eigen::Index n, Eigen::Index p, std::uint64_t seed);

//! Whether the outcome error W of the panel design is drawn once per unit or
//! afresh in each period. U is the unit fixed effect either way.
enum class PanelNoise
{
  per_period,
  per_unit
};

//! Two-wave panel: X_j, U, V ~ U(0, 2) per unit, W ~ U(0, 2);
//! Y_pre = U + W_0; Y_post = 1 + D^2 + X beta + U + W_1.
PanelSample gen_panel_dgp(Eigen::Index n,
                          Eigen::Index p,
                          std::uint64_t seed,
                          PanelNoise noise = PanelNoise::per_period);

//! d^2 - d'^2, the ATET of both designs in period 1.
double true_atet(double d, double d_prime);

//! Conditional density of D given X under both designs: D - X beta is the sum
//! of U(0, 1) and U(0, 2), a trapezoid on [0, 3].
double dgp_dose_density(double dose, double x_beta);

//! Estimation settings behind a method label.
struct MethodSpec
{
  std::string label;
  double undersmooth_factor = 1.0;
  DensityFamily family = DensityFamily::linear_normal;
};

//! lasso, lnorm, under, ln_under.
MethodSpec method_spec(const std::string& label);
const std::vector<std::string>& method_labels();

struct McSummaryRow
{
  std::string method;
  Design design = Design::panel;
  double bias = 0.0;
  double std = 0.0;
  double rmse = 0.0;
  double avse = 0.0;
  double cover = 0.0;
  int n = 0;
  int reps = 0;
  int failures = 0;
  //! Coverage of the bootstrap interval when the bootstrap was requested.
  std::optional<double> boot_cover;
};

struct McOptions
{
  double d_treat = 3.0;
  double d_control = 2.0;
  double alpha = 0.05;
  int bootstrap = 0;
  PanelNoise panel_noise = PanelNoise::per_period;
};

//! Outcome of one replication; `error` is set when it failed.
struct Replication
{
  double delta_hat = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> boot_ci_low;
  std::optional<double> boot_ci_high;
  std::optional<std::string> error;
};

//! Replication `rep` draws its data from derive_seed(seed, {rep, 0}) and uses
//! derive_seed(seed, {rep, 1}) for fold splits and inner cross-validation.
Replication run_replication(Design design,
                            Eigen::Index n,
                            Eigen::Index p,
                            int rep,
                            const MethodSpec& method,
                            const EstimationConfig& base,
                            std::uint64_t seed,
                            const McOptions& options = {});

//! Aggregates replications; failed ones are excluded and counted. Throws
//! EstimationError when more than 5% failed.
McSummaryRow summarize_replications(const std::vector<Replication>& results,
                                    Design design,
                                    Eigen::Index n,
                                    const MethodSpec& method,
                                    const McOptions& options = {});

//! Monte Carlo over `reps` replications, OpenMP-parallel across
//! replications. The worker count honors DIDCONT_THREADS (0 or unset = auto).
McSummaryRow monte_carlo(Design design,
                         Eigen::Index n,
                         Eigen::Index p,
                         int reps,
                         const std::string& method,
                         const EstimationConfig& base,
                         std::uint64_t seed,
                         const McOptions& options = {});

//! Serial reference for monte_carlo; identical results.
McSummaryRow monte_carlo_serial(Design design,
                                Eigen::Index n,
                                Eigen::Index p,
                                int reps,
                                const std::string& method,
                                const EstimationConfig& base,
                                std::uint64_t seed,
                                const McOptions& options = {});

//! Worker count requested through DIDCONT_THREADS, 0 meaning auto.
int configured_threads();

} // namespace didcont
