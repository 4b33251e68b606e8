#include "didcont/estimator.hpp"
#include "didcont/errors.hpp"
#include "didcont/kernel.hpp"

#include <cmath>

namespace didcont {

double compensated_sum(const Eigen::VectorXd& v)
{
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double t = sum + v[i];
    if (std::abs(sum) >= std::abs(v[i]))
      carry += (sum - t) + v[i];
    else
      carry += (v[i] - t) + sum;
    sum = t;
  }
  return sum + carry;
}

std::vector<int> GroupWeights::trimmed_counts() const
{
  std::vector<int> counts;
  for (const auto& mask : trim_mask) {
    int c = 0;
    for (bool b : mask)
      c += b ? 1 : 0;
    counts.push_back(c);
  }
  return counts;
}

namespace {

void add_group(GroupWeights& out, std::string label, Eigen::VectorXd raw)
{
  const double total = compensated_sum(raw);
  if (!(total > 0.0))
    throw EstimationError("empty group " + label);
  out.normalized.push_back(raw / total);
  out.trim_mask.emplace_back(static_cast<std::size_t>(raw.size()), false);
  out.raw.push_back(std::move(raw));
  out.labels.push_back(std::move(label));
}

void check_sizes(Eigen::Index n, const NuisanceSet& nuisances, Design design)
{
  if (nuisances.design != design)
    throw InputError("nuisance set was built for the other design");
  if (nuisances.size() != n)
    throw InputError("nuisance set length does not match the sample");
}

} // namespace

GroupWeights build_weights_rcs(const RepeatedCrossSectionSample& sample,
                               const NuisanceSet& nu,
                               const EstimandSpec& estimand,
                               double h,
                               KernelFamily kernel)
{
  check_sizes(sample.n(), nu, Design::rcs);
  const Eigen::Index n = sample.n();
  const Eigen::VectorXd w_treat =
    omega_weights(sample.d, estimand.d_treat, h, kernel);
  const Eigen::VectorXd w_control =
    omega_weights(sample.d, estimand.d_control, h, kernel);
  Eigen::VectorXd g1(n), g2(n), g3(n), g4(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = sample.period[static_cast<std::size_t>(i)];
    const bool post = label == estimand.t;
    const bool pre = label == estimand.t - 1;
    g1[i] = post ? w_treat[i] : 0.0;
    g2[i] = pre ? w_treat[i] * (nu.rho_treat_post[i] / nu.rho_treat_pre[i]) : 0.0;
    g3[i] = post ? w_control[i] * (nu.rho_treat_post[i] / nu.rho_control_post[i])
                 : 0.0;
    g4[i] = pre ? w_control[i] * (nu.rho_treat_post[i] / nu.rho_control_pre[i])
                : 0.0;
  }
  GroupWeights out;
  add_group(out, "(d_t, t)", std::move(g1));
  add_group(out, "(d_t, t-1)", std::move(g2));
  add_group(out, "(d'_t, t)", std::move(g3));
  add_group(out, "(d'_t, t-1)", std::move(g4));
  return out;
}

GroupWeights build_weights_panel(const PanelSample& sample,
                                 const NuisanceSet& nu,
                                 const EstimandSpec& estimand,
                                 double h,
                                 KernelFamily kernel)
{
  check_sizes(sample.n(), nu, Design::panel);
  const Eigen::Index n = sample.n();
  const Eigen::VectorXd g1 = omega_weights(sample.d, estimand.d_treat, h, kernel);
  const Eigen::VectorXd w_control =
    omega_weights(sample.d, estimand.d_control, h, kernel);
  Eigen::VectorXd g2(n);
  for (Eigen::Index i = 0; i < n; ++i)
    g2[i] = w_control[i] * (nu.p_treat[i] / nu.p_control[i]);
  GroupWeights out;
  add_group(out, "(d_t)", g1);
  add_group(out, "(d'_t)", std::move(g2));
  return out;
}

GroupWeights apply_trimming(const GroupWeights& weights, double threshold)
{
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InputError("trim threshold must lie in (0, 1]");
  GroupWeights out = weights;
  for (std::size_t g = 0; g < out.groups(); ++g) {
    auto& norm = out.normalized[g];
    auto& mask = out.trim_mask[g];
    for (;;) {
      bool exceeded = false;
      for (Eigen::Index i = 0; i < norm.size(); ++i) {
        if (norm[i] > threshold) {
          mask[static_cast<std::size_t>(i)] = true;
          exceeded = true;
        }
      }
      if (!exceeded)
        break;
      Eigen::VectorXd kept = out.raw[g];
      for (Eigen::Index i = 0; i < kept.size(); ++i) {
        if (mask[static_cast<std::size_t>(i)])
          kept[i] = 0.0;
      }
      const double total = compensated_sum(kept);
      if (!(total > 0.0))
        throw EstimationError("group " + out.labels[g] +
                              " empties under trimming");
      norm = kept / total;
    }
  }
  return out;
}

namespace {

DrComponents finish(GroupWeights weights,
                    std::vector<Eigen::VectorXd> residuals,
                    std::vector<double> signs,
                    const EstimationConfig& config,
                    double h)
{
  DrComponents c;
  c.weights = apply_trimming(weights, config.trim_threshold);
  c.residuals = std::move(residuals);
  c.signs = std::move(signs);
  c.h = h;
  return c;
}

} // namespace

DrComponents dr_components_rcs(const RepeatedCrossSectionSample& sample,
                               const NuisanceSet& nu,
                               const EstimandSpec& estimand,
                               const EstimationConfig& config)
{
  if (estimand.lag != 0)
    throw InputError("lagged estimand: relabel the sample first");
  const double h = config.bandwidth_for(sample.n());
  GroupWeights w = build_weights_rcs(sample, nu, estimand, h, config.kernel);
  // Y - mu_{d}(t-1) - mu_{d'}(t) + mu_{d'}(t-1), grouped so that a
  // degenerate estimand yields exactly Y - mu_{d'}(t).
  Eigen::VectorXd r1 = (sample.y - nu.mu_control_post) -
                       (nu.mu_treat_pre - nu.mu_control_pre);
  Eigen::VectorXd r2 = sample.y - nu.mu_treat_pre;
  Eigen::VectorXd r3 = sample.y - nu.mu_control_post;
  Eigen::VectorXd r4 = sample.y - nu.mu_control_pre;
  return finish(std::move(w), { r1, r2, r3, r4 }, { 1.0, -1.0, -1.0, 1.0 },
                config, h);
}

DrComponents dr_components_panel(const PanelSample& sample,
                                 const NuisanceSet& nu,
                                 const EstimandSpec& estimand,
                                 const EstimationConfig& config)
{
  if (estimand.lag != 0)
    throw InputError("lagged estimand: relabel the sample first");
  const double h = config.bandwidth_for(sample.n());
  GroupWeights w = build_weights_panel(sample, nu, estimand, h, config.kernel);
  const Eigen::VectorXd r = (sample.y_post - sample.y_pre) - nu.m_control;
  return finish(std::move(w), { r, r }, { 1.0, -1.0 }, config, h);
}

double combine(const DrComponents& c)
{
  std::vector<double> sums;
  for (std::size_t g = 0; g < c.weights.groups(); ++g)
    sums.push_back(
      compensated_sum(c.weights.normalized[g].cwiseProduct(c.residuals[g])));
  if (sums.size() == 4)
    return (sums[0] - sums[2]) - (sums[1] - sums[3]);
  return sums[0] - sums[1];
}

namespace {

AtetEstimate summarize(const DrComponents& c)
{
  AtetEstimate est;
  est.delta_hat = combine(c);
  est.h_used = c.h;
  est.n_trimmed_per_group = c.weights.trimmed_counts();
  const Eigen::Index n = c.weights.raw.front().size();
  for (Eigen::Index i = 0; i < n; ++i) {
    bool used = false;
    for (const auto& norm : c.weights.normalized)
      used = used || norm[i] > 0.0;
    est.n_effective += used ? 1 : 0;
  }
  est.ci_low = est.ci_high = est.delta_hat;
  return est;
}

} // namespace

AtetEstimate atet_rcs(const RepeatedCrossSectionSample& sample,
                      const NuisanceSet& nuisances,
                      const EstimandSpec& estimand,
                      const EstimationConfig& config)
{
  return summarize(dr_components_rcs(sample, nuisances, estimand, config));
}

AtetEstimate atet_panel(const PanelSample& sample,
                        const NuisanceSet& nuisances,
                        const EstimandSpec& estimand,
                        const EstimationConfig& config)
{
  return summarize(dr_components_panel(sample, nuisances, estimand, config));
}

} // namespace didcont
