#pragma once

// Small hand-checkable fixtures shared by the unit and acceptance tests.

#include "didcont/estimator.hpp"
#include "didcont/lasso.hpp"
#include "didcont/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fixtures {

using namespace didcont;

inline EstimationConfig config_h1()
{
  EstimationConfig c;
  c.bandwidth = 1.0;
  c.trim_threshold = 1.0;
  return c;
}

inline double epan(double dose, double at)
{
  const double u = dose - at;
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

// Eight rows, four per period, doses mirrored so every group carries the
// same kernel mass 1.3125 under h = 1, d = 3, d' = 2.
struct RcsFixture
{
  RepeatedCrossSectionSample s;
  NuisanceSet nu;
  EstimandSpec e{ 3.0, 2.0, 1, 0 };

  RcsFixture()
  {
    s.d = (Eigen::VectorXd(8) << 3.0, 3.5, 2.0, 1.5, 3.0, 3.5, 2.0, 1.5).finished();
    s.y = (Eigen::VectorXd(8) << 12.0, 15.5, 6.25, 4.0, 2.5, 3.0, 1.75, 2.0).finished();
    s.x.resize(8, 0);
    s.history.resize(8, 0);
    s.period = { 1, 1, 1, 1, 0, 0, 0, 0 };
    nu = NuisanceSet::allocate(Design::rcs, 8);
    nu.mu_treat_pre << 2.0, 2.25, 1.0, 1.5, 2.5, 2.75, 1.5, 1.0;
    nu.mu_control_post << 6.0, 6.5, 5.5, 4.5, 6.25, 5.0, 6.0, 5.5;
    nu.mu_control_pre << 1.5, 1.75, 1.25, 1.0, 2.0, 2.5, 1.25, 1.5;
    for (auto* v : { &nu.rho_treat_post, &nu.rho_treat_pre, &nu.rho_control_post,
                     &nu.rho_control_pre })
      v->setOnes();
  }
};

// Six panel units with equal kernel mass 2.4375 at d = 3 and d' = 2.
struct PanelFixture
{
  PanelSample s;
  NuisanceSet nu;
  EstimandSpec e{ 3.0, 2.0, 1, 0 };

  PanelFixture()
  {
    s.d = (Eigen::VectorXd(6) << 3.0, 3.5, 2.0, 1.5, 2.5, 2.5).finished();
    s.y_pre = (Eigen::VectorXd(6) << 1.0, 2.0, 0.5, 1.5, 1.0, 3.0).finished();
    s.y_post = (Eigen::VectorXd(6) << 11.0, 15.0, 5.5, 4.0, 8.5, 9.0).finished();
    s.x.resize(6, 0);
    s.history.resize(6, 0);
    nu = NuisanceSet::allocate(Design::panel, 6);
    nu.m_control << 4.5, 5.0, 4.0, 3.5, 5.5, 4.75;
    nu.p_treat.setOnes();
    nu.p_control.setOnes();
  }
};

inline NuisanceSet random_rcs_nuisances(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  auto nu = NuisanceSet::allocate(Design::rcs, n);
  for (auto* v : { &nu.mu_treat_pre, &nu.mu_control_post, &nu.mu_control_pre,
                   &nu.rho_treat_post, &nu.rho_treat_pre, &nu.rho_control_post,
                   &nu.rho_control_pre })
    for (auto& x : *v)
      x = u(rng);
  return nu;
}

inline RepeatedCrossSectionSample random_rcs(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  RepeatedCrossSectionSample s;
  s.y.resize(n);
  s.d.resize(n);
  s.x.resize(n, 0);
  s.history.resize(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.d[i] = u(rng);
    s.y[i] = u(rng) * 3.0;
    s.period.push_back(i % 2);
  }
  return s;
}


struct HandOracle
{
  double delta = 0.0;
  double pi = 0.0;
  double variance = 0.0;
  Eigen::VectorXd psi;
};

// Direct transcription of the four-group score on unit-free fixtures.
inline HandOracle hand_rcs(const RcsFixture& f)
{
  const auto& s = f.s;
  const auto& nu = f.nu;
  const Eigen::Index n = s.n();
  HandOracle out;
  out.psi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.pi += epan(s.d[i], f.e.d_treat) * (s.period[std::size_t(i)] == 1) / double(n);
  double num[4] = {}, den[4] = {};
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool post = s.period[std::size_t(i)] == 1, pre = !post;
    const double w3 = epan(s.d[i], f.e.d_treat), w2 = epan(s.d[i], f.e.d_control);
    const double a1 = w3 * post;
    const double a2 = w3 * pre * nu.rho_treat_post[i] / nu.rho_treat_pre[i];
    const double a3 = w2 * post * nu.rho_treat_post[i] / nu.rho_control_post[i];
    const double a4 = w2 * pre * nu.rho_treat_post[i] / nu.rho_control_pre[i];
    const double r1 = s.y[i] - nu.mu_treat_pre[i] - nu.mu_control_post[i] + nu.mu_control_pre[i];
    const double r2 = s.y[i] - nu.mu_treat_pre[i];
    const double r3 = s.y[i] - nu.mu_control_post[i];
    const double r4 = s.y[i] - nu.mu_control_pre[i];
    num[0] += a1 * r1, den[0] += a1;
    num[1] += a2 * r2, den[1] += a2;
    num[2] += a3 * r3, den[2] += a3;
    num[3] += a4 * r4, den[3] += a4;
    out.psi[i] = (a1 * r1 - a2 * r2 - (a3 * r3 - a4 * r4)) / out.pi;
  }
  out.delta = num[0] / den[0] - num[1] / den[1] - (num[2] / den[2] - num[3] / den[3]);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = epan(s.d[i], f.e.d_treat) * (s.period[std::size_t(i)] == 1);
    const double inf = out.psi[i] - out.delta - out.delta / out.pi * (k - out.pi);
    out.variance += inf * inf / double(n);
  }
  return out;
}

inline HandOracle hand_panel(const PanelFixture& f)
{
  const auto& s = f.s;
  const auto& nu = f.nu;
  const Eigen::Index n = s.n();
  HandOracle out;
  out.psi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.pi += epan(s.d[i], f.e.d_treat) / double(n);
  double num1 = 0, den1 = 0, num2 = 0, den2 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = s.y_post[i] - s.y_pre[i] - nu.m_control[i];
    const double a1 = epan(s.d[i], f.e.d_treat);
    const double a2 = epan(s.d[i], f.e.d_control) * nu.p_treat[i] / nu.p_control[i];
    num1 += a1 * r, den1 += a1, num2 += a2 * r, den2 += a2;
    out.psi[i] = a1 * r / out.pi - a2 * r / out.pi;
  }
  out.delta = num1 / den1 - num2 / den2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = epan(s.d[i], f.e.d_treat);
    const double inf = out.psi[i] - out.delta - out.delta / out.pi * (k - out.pi);
    out.variance += inf * inf / double(n);
  }
  return out;
}

inline Eigen::MatrixXd normal_matrix(Eigen::Index m, Eigen::Index r, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(m, r);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      x(i, j) = z(rng);
  return x;
}

inline Eigen::VectorXd uniform_vector(Eigen::Index m, double lo, double hi, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(m);
  for (auto& e : v)
    e = u(rng);
  return v;
}

// Standardized feature matrix under weights w (population scale).
inline Eigen::MatrixXd standardized(const Eigen::MatrixXd& x, const Eigen::VectorXd& w)
{
  const double sw = w.sum();
  Eigen::MatrixXd xs = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = w.dot(x.col(j)) / sw;
    xs.col(j).array() -= mean;
    const double sd = std::sqrt(w.dot(xs.col(j).cwiseAbs2()) / sw);
    xs.col(j) /= sd;
  }
  return xs;
}

struct Problem
{
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd w;
};

inline Problem sparse_problem()
{
  Problem p;
  p.x = normal_matrix(200, 100, 3);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(100);
  beta.head(5) << 3.0, -2.0, 1.5, 1.0, -0.5;
  p.y = p.x * beta + normal_matrix(200, 1, 4).col(0) + Eigen::VectorXd::Constant(200, 2.0);
  p.w = uniform_vector(200, 0.5, 1.5, 5);
  return p;
}

//! Largest breach of the lasso stationarity conditions on standardized
//! features: |grad_j| <= lambda at zeros, grad_j = lambda sign(b_j) otherwise.
inline double kkt_violation(const Problem& p, const LassoModel& model)
{
  const Eigen::MatrixXd xs = standardized(p.x, p.w);
  const Eigen::VectorXd resid = p.y - model.predict(p.x);
  const Eigen::VectorXd grad = xs.transpose() * p.w.cwiseProduct(resid) / p.w.sum();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < grad.size(); ++j) {
    const double b = model.coefficients[j];
    const double v = b == 0.0 ? std::abs(grad[j]) - model.lambda
                              : std::abs(grad[j] - model.lambda * (b > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

} // namespace fixtures
