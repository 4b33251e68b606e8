#pragma once

#include "didcont/model.hpp"
#include "didcont/nuisance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>

namespace testing {

inline Eigen::VectorXd beta(Eigen::Index p)
{
  Eigen::VectorXd b(p);
  for (Eigen::Index j = 0; j < p; ++j)
    b[j] = 0.4 / double((j + 1) * (j + 1));
  return b;
}

// D - X beta = 0.5 U + V with U, V ~ U(0, 2): a U(0, 1) plus a U(0, 2).
inline double trapezoid(double s)
{
  if (s < 0.0 || s > 3.0)
    return 0.0;
  if (s < 1.0)
    return 0.5 * s;
  if (s < 2.0)
    return 0.5;
  return 0.5 * (3.0 - s);
}

// E[U | 0.5 U + V = s]; U is uniform on the feasible interval.
inline double mean_u_given(double s)
{
  const double lo = std::max(0.0, 2.0 * (s - 2.0));
  const double hi = std::min(2.0, 2.0 * s);
  return 0.5 * (lo + hi);
}

// True panel nuisances of the simulation design at dose pair (d, dp).
inline didcont::NuisanceSet panel_oracle(const didcont::PanelSample& s, double d, double dp)
{
  const Eigen::VectorXd xb = s.x * beta(s.p());
  auto nu = didcont::NuisanceSet::allocate(didcont::Design::panel, s.n());
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    nu.m_control[i] = 1.0 + dp * dp + xb[i];
    nu.p_treat[i] = trapezoid(d - xb[i]);
    nu.p_control[i] = trapezoid(dp - xb[i]);
  }
  return nu;
}

// Repeated cross-sections with the period independent of the covariates, so
// that the true period odds are one everywhere.
inline didcont::RepeatedCrossSectionSample rcs_overlap(Eigen::Index n,
                                                       Eigen::Index p,
                                                       std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  const Eigen::VectorXd b = beta(p);
  didcont::RepeatedCrossSectionSample s;
  s.y.resize(n);
  s.d.resize(n);
  s.x.resize(n, p);
  s.history.resize(n, 0);
  s.period.resize(std::size_t(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int t = coin(rng) ? 1 : 0;
    for (Eigen::Index j = 0; j < p; ++j)
      s.x(i, j) = unif(rng);
    const double xb = s.x.row(i).dot(b);
    const double u = unif(rng), v = unif(rng), w = unif(rng);
    s.d[i] = xb + 0.5 * u + v;
    s.y[i] = xb + (1.0 + s.d[i] * s.d[i]) * t + u + w;
    s.period[std::size_t(i)] = t;
  }
  return s;
}

inline didcont::NuisanceSet rcs_oracle(const didcont::RepeatedCrossSectionSample& s,
                                       double d,
                                       double dp)
{
  const Eigen::VectorXd xb = s.x * beta(s.p());
  auto nu = didcont::NuisanceSet::allocate(didcont::Design::rcs, s.n());
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    const double base = xb[i] + 1.0;
    nu.mu_treat_pre[i] = base + mean_u_given(d - xb[i]);
    nu.mu_control_pre[i] = base + mean_u_given(dp - xb[i]);
    nu.mu_control_post[i] = base + 1.0 + dp * dp + mean_u_given(dp - xb[i]);
    nu.rho_treat_post[i] = 0.5 * trapezoid(d - xb[i]);
    nu.rho_treat_pre[i] = 0.5 * trapezoid(d - xb[i]);
    nu.rho_control_post[i] = 0.5 * trapezoid(dp - xb[i]);
    nu.rho_control_pre[i] = 0.5 * trapezoid(dp - xb[i]);
  }
  return nu;
}

} // namespace testing
