#include "didcont/errors.hpp"
#include "didcont/lasso.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace didcont;
using namespace fixtures;

namespace {

void check_kkt(const Problem& p, const LassoModel& model)
{
  CHECK(kkt_violation(p, model) <= 1e-6);
}

} // namespace

TEST_CASE("lambda grid")
{
  const auto g = lambda_grid(2.0, 100, 1e-3);
  REQUIRE(g.size() == 100);
  CHECK(g.front() == doctest::Approx(2.0));
  CHECK(g.back() == doctest::Approx(2e-3));
  for (std::size_t k = 1; k < g.size(); ++k)
    CHECK(g[k] / g[k - 1] == doctest::Approx(g[1] / g[0]));
}

TEST_CASE("lambda_max gives the null model")
{
  const Problem p = sparse_problem();
  const double lmax = lasso_lambda_max(p.x, p.y, p.w);
  const LassoModel m = fit_lasso(p.x, p.y, p.w, { lmax }, 5, 1);
  CHECK(m.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.intercept == doctest::Approx(p.w.dot(p.y) / p.w.sum()).epsilon(1e-12));
  const LassoModel below = fit_lasso(p.x, p.y, p.w, { 0.95 * lmax }, 5, 1);
  CHECK(below.coefficients.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("unpenalized fit equals least squares")
{
  const Eigen::MatrixXd x = normal_matrix(50, 3, 11);
  const Eigen::VectorXd y =
    x * Eigen::Vector3d(1.0, -2.0, 0.5) + normal_matrix(50, 1, 12).col(0) * 0.3;
  for (bool weighted : { false, true }) {
    const Eigen::VectorXd w =
      weighted ? uniform_vector(50, 0.2, 2.0, 13) : Eigen::VectorXd::Ones(50);
    const LassoModel m = fit_lasso(x, y, w, { 0.0 }, 5, 1);

    Eigen::MatrixXd design(50, 4);
    design.col(0).setOnes();
    design.rightCols(3) = x;
    const Eigen::MatrixXd wd = design.array().colwise() * w.array();
    const Eigen::VectorXd ols =
      (design.transpose() * wd).ldlt().solve(wd.transpose() * y);

    CHECK(std::abs(m.raw_intercept() - ols[0]) < 1e-8);
    CHECK((m.raw_coefficients() - ols.tail(3)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((m.predict(x) - design * ols).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("KKT conditions at the cross-validated lambda")
{
  const Problem p = sparse_problem();
  const LassoModel m = fit_lasso(p.x, p.y, p.w, {}, 10, 7);
  CHECK(m.lambda > 0.0);
  CHECK(m.coefficients.head(4).cwiseAbs().minCoeff() > 0.0);
  check_kkt(p, m);
}

TEST_CASE("KKT conditions along a fixed grid")
{
  const Problem p = sparse_problem();
  const double lmax = lasso_lambda_max(p.x, p.y, p.w);
  for (double f : { 0.5, 0.1, 0.01, 0.001 })
    check_kkt(p, fit_lasso(p.x, p.y, p.w, { f * lmax }, 5, 1));
}

TEST_CASE("objective decreases monotonically across sweeps")
{
  const Problem p = sparse_problem();
  const double lmax = lasso_lambda_max(p.x, p.y, p.w);
  std::vector<double> trace;
  LassoOptions opt;
  opt.on_sweep = [&](double v) { trace.push_back(v); };
  fit_lasso(p.x, p.y, p.w, { 0.01 * lmax }, 5, 1, opt);
  REQUIRE(trace.size() > 1);
  for (std::size_t k = 1; k < trace.size(); ++k)
    CHECK(trace[k] <= trace[k - 1] + 1e-12 * std::abs(trace[k - 1]));
}

TEST_CASE("predictions do not depend on feature units")
{
  const Problem p = sparse_problem();
  Problem q = p;
  q.x.col(0) *= 100.0;
  q.x.col(1).array() += 5.0;
  const double lmax = lasso_lambda_max(p.x, p.y, p.w);
  const auto a = fit_lasso(p.x, p.y, p.w, { 0.05 * lmax }, 5, 1);
  const auto b = fit_lasso(q.x, q.y, q.w, { 0.05 * lmax }, 5, 1);
  CHECK((a.predict(p.x) - b.predict(q.x)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(lasso_lambda_max(q.x, q.y, q.w) == doctest::Approx(lmax).epsilon(1e-10));
}

TEST_CASE("zero-weight rows are ignored")
{
  const Problem p = sparse_problem();
  Problem q = p;
  q.x.conservativeResize(201, Eigen::NoChange);
  q.x.row(200).setConstant(1e3);
  q.y.conservativeResize(201);
  q.y[200] = -1e6;
  q.w.conservativeResize(201);
  q.w[200] = 0.0;
  const double lmax = lasso_lambda_max(p.x, p.y, p.w);
  const auto a = fit_lasso(p.x, p.y, p.w, { 0.05 * lmax }, 5, 1);
  const auto b = fit_lasso(q.x, q.y, q.w, { 0.05 * lmax }, 5, 1);
  CHECK((a.predict(p.x) - b.predict(p.x)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(lasso_lambda_max(q.x, q.y, q.w) == doctest::Approx(lmax).epsilon(1e-10));
}

TEST_CASE("degenerate inputs")
{
  const Problem p = sparse_problem();
  const auto flat = fit_lasso(p.x, Eigen::VectorXd::Constant(200, 7.0), p.w, {}, 5, 1);
  CHECK(flat.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(flat.predict(p.x).isApproxToConstant(7.0));
  CHECK_THROWS_AS(fit_lasso(p.x, p.y, Eigen::VectorXd::Zero(200), {}, 5, 1), InputError);
  CHECK_THROWS_AS(fit_lasso(p.x, p.y.head(10), p.w, {}, 5, 1), InputError);
  Eigen::VectorXd neg = p.w;
  neg[3] = -1.0;
  CHECK_THROWS_AS(fit_lasso(p.x, p.y, neg, {}, 5, 1), InputError);

  const auto none = fit_lasso(Eigen::MatrixXd(200, 0), p.y, p.w, {}, 5, 1);
  CHECK(none.intercept == doctest::Approx(p.w.dot(p.y) / p.w.sum()));
}

TEST_CASE("cross-validated fit is deterministic and row-order free")
{
  const Problem p = sparse_problem();
  const auto a = fit_lasso(p.x, p.y, p.w, {}, 10, 7);
  const auto b = fit_lasso(p.x, p.y, p.w, {}, 10, 7);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.lambda == b.lambda);

  std::vector<Eigen::Index> perm(200);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(9));
  const auto c = fit_lasso(p.x(perm, Eigen::all), p.y(perm), p.w(perm), {}, 10, 7);
  // Same grid position; the grid itself moves by rounding.
  CHECK(c.lambda == doctest::Approx(a.lambda).epsilon(1e-12));
  CHECK((c.coefficients - a.coefficients).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("content folds follow the rows")
{
  const Problem p = sparse_problem();
  const auto f = content_folds(p.x, p.y, p.w, 5, 3);
  std::vector<int> sizes(5, 0);
  for (int k : f)
    ++sizes[std::size_t(k)];
  CHECK(*std::max_element(sizes.begin(), sizes.end()) == 40);
  CHECK(*std::min_element(sizes.begin(), sizes.end()) == 40);

  std::vector<Eigen::Index> perm(200);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  const auto g = content_folds(p.x(perm, Eigen::all), p.y(perm), p.w(perm), 5, 3);
  for (std::size_t i = 0; i < 200; ++i)
    CHECK(g[i] == f[std::size_t(perm[i])]);
}

TEST_CASE("logistic: uninformative features")
{
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(10, 2);
  Eigen::VectorXd y(10);
  y << 0, 1, 0, 1, 0, 1, 0, 1, 0, 1;
  const auto m = fit_logistic_lasso(x, y, {}, 5, 1);
  CHECK(std::abs(m.intercept) < 1e-6);
  CHECK((m.predict_proba(x).array() - 0.5).abs().maxCoeff() < 1e-6);
}

TEST_CASE("logistic: heavy penalty leaves the intercept")
{
  const Eigen::MatrixXd x = normal_matrix(40, 3, 21);
  Eigen::VectorXd y(40);
  for (Eigen::Index i = 0; i < 40; ++i)
    y[i] = (x(i, 0) + 0.3 * x(i, 1) > 0.4) ? 1.0 : 0.0;
  const double ybar = y.mean();
  const auto m = fit_logistic_lasso(x, y, { 1e3 }, 5, 1);
  CHECK(m.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.intercept == doctest::Approx(std::log(ybar / (1.0 - ybar))).epsilon(1e-6));
}

namespace {

double logit_objective(const Eigen::VectorXd& xs, const Eigen::VectorXd& y,
                       double b0, double b, double lambda)
{
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double eta = b0 + b * xs[i];
    loss += std::log1p(std::exp(eta)) - y[i] * eta;
  }
  return loss / double(y.size()) + lambda * std::abs(b);
}

// Intercept minimizing the loss for a fixed slope, by bisection on the score.
double best_intercept(const Eigen::VectorXd& xs, const Eigen::VectorXd& y, double b)
{
  double lo = -50, hi = 50;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double score = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      score += y[i] - 1.0 / (1.0 + std::exp(-(mid + b * xs[i])));
    (score > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("logistic: separable toy against a profiled golden-section oracle")
{
  Eigen::MatrixXd x(20, 1);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i + 1;
    y[i] = i >= 10 ? 1.0 : 0.0;
  }
  const double lambda = 0.1;
  const auto m = fit_logistic_lasso(x, y, { lambda }, 5, 1);
  CHECK(std::isfinite(m.coefficients[0]));
  const Eigen::VectorXd p = m.predict_proba(x);
  CHECK(p.minCoeff() > 0.0);
  CHECK(p.maxCoeff() < 1.0);

  const Eigen::VectorXd xs = standardized(x, Eigen::VectorXd::Ones(20)).col(0);
  auto profile = [&](double b) {
    return logit_objective(xs, y, best_intercept(xs, y, b), b, lambda);
  };
  double lo = 0.0, hi = 100.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (profile(a) < profile(b))
      hi = b;
    else
      lo = a;
  }
  const double b_ref = 0.5 * (lo + hi);
  CHECK(m.coefficients[0] == doctest::Approx(b_ref).epsilon(1e-5));
  CHECK(m.intercept == doctest::Approx(best_intercept(xs, y, b_ref)).epsilon(1e-5));

  // KKT for the slope
  Eigen::VectorXd resid = y - p;
  CHECK(std::abs(xs.dot(resid) / 20.0 - lambda) < 1e-6);
}

TEST_CASE("logistic: label validation")
{
  const Eigen::MatrixXd x = normal_matrix(10, 2, 1);
  CHECK_THROWS_AS(fit_logistic_lasso(x, Eigen::VectorXd::Ones(10), {}, 5, 1), InputError);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(10);
  y[0] = 2.0;
  CHECK_THROWS_AS(fit_logistic_lasso(x, y, {}, 5, 1), InputError);
}
