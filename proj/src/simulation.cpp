#include "didcont/simulation.hpp"
#include "didcont/errors.hpp"
#include "didcont/pipeline.hpp"
#include "didcont/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace didcont {

Eigen::VectorXd dgp_beta(Eigen::Index p)
{
  Eigen::VectorXd beta(p);
  for (Eigen::Index j = 0; j < p; ++j)
    beta[j] = 0.4 / static_cast<double>((j + 1) * (j + 1));
  return beta;
}

namespace {

void check_dims(Eigen::Index n, Eigen::Index p)
{
  if (n < 1 || p < 1)
    throw InputError("simulation needs n >= 1 and p >= 1");
}

} // namespace

RepeatedCrossSectionSample gen_rcs_dgp(Eigen::Index n, Eigen::Index p, std::uint64_t seed)
{
  check_dims(n, p);
  const Eigen::VectorXd beta = dgp_beta(p);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  std::bernoulli_distribution coin(0.5);

  RepeatedCrossSectionSample s;
  s.y.resize(n);
  s.d.resize(n);
  s.x.resize(n, p);
  s.history.resize(n, 0);
  s.period.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int t = coin(rng) ? 1 : 0;
    double xb = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      s.x(i, j) = 0.5 * t + unif(rng);
      xb += s.x(i, j) * beta[j];
    }
    const double u = unif(rng);
    const double v = unif(rng);
    const double w = unif(rng);
    s.d[i] = xb + 0.5 * u + v;
    s.y[i] = xb + (1.0 + s.d[i] * s.d[i]) * t + u + w;
    s.period[static_cast<std::size_t>(i)] = t;
  }
  return s;
}

PanelSample gen_panel_dgp(Eigen::Index n,
                          Eigen::Index p,
                          std::uint64_t seed,
                          PanelNoise noise)
{
  check_dims(n, p);
  const Eigen::VectorXd beta = dgp_beta(p);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0);

  PanelSample s;
  s.y_pre.resize(n);
  s.y_post.resize(n);
  s.d.resize(n);
  s.x.resize(n, p);
  s.history.resize(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double xb = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      s.x(i, j) = unif(rng);
      xb += s.x(i, j) * beta[j];
    }
    const double u = unif(rng);
    const double v = unif(rng);
    const double w_pre = unif(rng);
    const double w_post = noise == PanelNoise::per_period ? unif(rng) : w_pre;
    s.d[i] = xb + 0.5 * u + v;
    s.y_pre[i] = u + w_pre;
    s.y_post[i] = 1.0 + s.d[i] * s.d[i] + xb + u + w_post;
  }
  return s;
}

double true_atet(double d, double d_prime)
{
  return d * d - d_prime * d_prime;
}

double dgp_dose_density(double dose, double x_beta)
{
  const double s = dose - x_beta;
  if (s <= 0.0 || s >= 3.0)
    return 0.0;
  if (s < 1.0)
    return 0.5 * s;
  if (s <= 2.0)
    return 0.5;
  return 0.5 * (3.0 - s);
}

const std::vector<std::string>& method_labels()
{
  static const std::vector<std::string> labels{ "lasso", "lnorm", "under", "ln_under" };
  return labels;
}

MethodSpec method_spec(const std::string& label)
{
  if (label == "lasso")
    return { label, 1.0, DensityFamily::linear_normal };
  if (label == "lnorm")
    return { label, 1.0, DensityFamily::loglinear_normal };
  if (label == "under")
    return { label, 2.0, DensityFamily::linear_normal };
  if (label == "ln_under")
    return { label, 2.0, DensityFamily::loglinear_normal };
  throw InputError("unknown method '" + label + "'");
}

Replication run_replication(Design design,
                            Eigen::Index n,
                            Eigen::Index p,
                            int rep,
                            const MethodSpec& method,
                            const EstimationConfig& base,
                            std::uint64_t seed,
                            const McOptions& options)
{
  const auto r = static_cast<std::uint64_t>(rep);
  EstimationConfig config = base;
  config.undersmooth_factor = method.undersmooth_factor;
  config.ps_family = method.family;
  config.seed = derive_seed(seed, { r, 1 });
  const EstimandSpec estimand{ options.d_treat, options.d_control, 1, 0 };
  const InferenceOptions inference{ options.alpha, options.bootstrap };

  Replication out;
  try {
    const std::uint64_t data_seed = derive_seed(seed, { r, 0 });
    const AtetEstimate est =
      design == Design::panel
        ? run_estimation(gen_panel_dgp(n, p, data_seed, options.panel_noise),
                         estimand, config, inference)
        : run_estimation(gen_rcs_dgp(n, p, data_seed), estimand, config, inference);
    out.delta_hat = est.delta_hat;
    out.se = est.se;
    out.ci_low = est.ci_low;
    out.ci_high = est.ci_high;
    out.boot_ci_low = est.boot_ci_low;
    out.boot_ci_high = est.boot_ci_high;
  } catch (const std::exception& e) {
    // kept per replication so one bad draw cannot escape the parallel loop
    out.error = e.what();
  }
  return out;
}

McSummaryRow summarize_replications(const std::vector<Replication>& results,
                                    Design design,
                                    Eigen::Index n,
                                    const MethodSpec& method,
                                    const McOptions& options)
{
  McSummaryRow row;
  row.method = method.label;
  row.design = design;
  row.n = static_cast<int>(n);
  const double truth = true_atet(options.d_treat, options.d_control);

  std::vector<const Replication*> ok;
  for (const auto& r : results) {
    if (r.error)
      ++row.failures;
    else
      ok.push_back(&r);
  }
  if (static_cast<double>(row.failures) > 0.05 * static_cast<double>(results.size()))
    throw EstimationError(std::to_string(row.failures) + " of " +
                          std::to_string(results.size()) +
                          " replications failed (limit 5%)");
  row.reps = static_cast<int>(ok.size());
  if (row.reps < 2)
    throw EstimationError("fewer than two successful replications");

  const double m = static_cast<double>(ok.size());
  double mean = 0.0, mse = 0.0, avse = 0.0, cover = 0.0, boot = 0.0;
  for (const auto* r : ok) {
    mean += r->delta_hat;
    mse += (r->delta_hat - truth) * (r->delta_hat - truth);
    avse += r->se;
    cover += (r->ci_low <= truth && truth <= r->ci_high) ? 1.0 : 0.0;
    if (r->boot_ci_low)
      boot += (*r->boot_ci_low <= truth && truth <= *r->boot_ci_high) ? 1.0 : 0.0;
  }
  mean /= m;
  double ss = 0.0;
  for (const auto* r : ok)
    ss += (r->delta_hat - mean) * (r->delta_hat - mean);
  row.bias = mean - truth;
  row.std = std::sqrt(ss / (m - 1.0));
  row.rmse = std::sqrt(mse / m);
  row.avse = avse / m;
  row.cover = cover / m;
  if (options.bootstrap > 0)
    row.boot_cover = boot / m;
  return row;
}

int configured_threads()
{
  const char* env = std::getenv("DIDCONT_THREADS");
  if (env == nullptr || *env == '\0')
    return 0;
  try {
    return std::max(0, std::stoi(env));
  } catch (const std::exception&) {
    throw InputError(std::string("DIDCONT_THREADS is not an integer: ") + env);
  }
}

namespace {

void check_reps(int reps)
{
  if (reps < 2)
    throw InputError("reps must be >= 2");
}

} // namespace

McSummaryRow monte_carlo(Design design,
                         Eigen::Index n,
                         Eigen::Index p,
                         int reps,
                         const std::string& method,
                         const EstimationConfig& base,
                         std::uint64_t seed,
                         const McOptions& options)
{
  check_reps(reps);
  const MethodSpec spec = method_spec(method);
  base.validate();
  std::vector<Replication> results(static_cast<std::size_t>(reps));
#ifdef _OPENMP
  const int threads = configured_threads();
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
  for (int r = 0; r < reps; ++r)
    results[static_cast<std::size_t>(r)] =
      run_replication(design, n, p, r, spec, base, seed, options);
  return summarize_replications(results, design, n, spec, options);
}

McSummaryRow monte_carlo_serial(Design design,
                                Eigen::Index n,
                                Eigen::Index p,
                                int reps,
                                const std::string& method,
                                const EstimationConfig& base,
                                std::uint64_t seed,
                                const McOptions& options)
{
  check_reps(reps);
  const MethodSpec spec = method_spec(method);
  base.validate();
  std::vector<Replication> results;
  results.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r)
    results.push_back(run_replication(design, n, p, r, spec, base, seed, options));
  return summarize_replications(results, design, n, spec, options);
}

} // namespace didcont
