#include "didcont/errors.hpp"
#include "didcont/inference.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace didcont;

namespace {

ScoreVector random_scores(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreVector s;
  s.psi.resize(n);
  s.kernel_term.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.psi[i] = 2.0 + 3.0 * z(rng);
    s.kernel_term[i] = u(rng) < 0.3 ? 0.75 + 0.5 * u(rng) : 0.0;
  }
  s.delta_hat = s.psi.mean();
  s.pi_hat = s.kernel_term.mean();
  return s;
}

} // namespace

TEST_CASE("asymptotic interval")
{
  const auto [lo, hi] = ci_asymptotic(5.0, 4.0, 100, 0.05);
  CHECK(std::abs(lo - 4.608) < 1e-3);
  CHECK(std::abs(hi - 5.392) < 1e-3);

  const auto [a, b] = ci_asymptotic(5.0, 4.0, 100, 0.9999);
  CHECK(b - a == doctest::Approx(2.0 * normal_quantile(0.50005) * 0.2));
  CHECK(std::abs((b - a) - 2.0 * 0.000125 * 0.2) < 1e-6);

  const auto [c, d] = ci_asymptotic(1.5, 0.0, 100, 0.05);
  CHECK(c == 1.5);
  CHECK(d == 1.5);

  const auto w100 = ci_asymptotic(0.0, 1.0, 100, 0.1);
  const auto w400 = ci_asymptotic(0.0, 1.0, 400, 0.1);
  CHECK((w100.second - w100.first) == doctest::Approx(2.0 * (w400.second - w400.first)));

  CHECK_THROWS_AS(ci_asymptotic(0.0, 1.0, 10, 1.0), InputError);
  CHECK_THROWS_AS(ci_asymptotic(0.0, 1.0, 10, 0.0), InputError);
}

TEST_CASE("normal quantile")
{
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("type-7 quantiles")
{
  const std::vector<double> v = { 4.0, 1.0, 3.0, 2.0 };
  CHECK(quantile_type7(v, 0.0) == 1.0);
  CHECK(quantile_type7(v, 1.0) == 4.0);
  CHECK(quantile_type7(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_type7(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_type7({ 7.0 }, 0.3) == 7.0);
  CHECK_THROWS_AS(quantile_type7({}, 0.5), InputError);
}

TEST_CASE("variance estimator")
{
  ScoreVector s;
  s.psi = Eigen::VectorXd::Constant(10, 3.0);
  s.kernel_term = Eigen::VectorXd::Constant(10, 0.4);
  s.delta_hat = 3.0;
  s.pi_hat = 0.4;
  CHECK(variance_hat(s) == 0.0);

  // zero estimate removes the density correction
  auto r = random_scores(1000, 2);
  r.psi.array() -= r.delta_hat;
  r.delta_hat = 0.0;
  const double v = variance_hat(r);
  CHECK(v == doctest::Approx(r.psi.squaredNorm() / 1000.0).epsilon(1e-12));
  auto doubled = r;
  doubled.psi *= 2.0;
  CHECK(variance_hat(doubled) == doctest::Approx(4.0 * v).epsilon(1e-12));

  // explicit correction term
  const auto q = random_scores(500, 3);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < 500; ++i) {
    const double e = q.psi[i] - q.delta_hat -
                     q.delta_hat / q.pi_hat * (q.kernel_term[i] - q.pi_hat);
    acc += e * e;
  }
  CHECK(variance_hat(q) == doctest::Approx(acc / 500.0).epsilon(1e-12));

  // permutation invariance
  auto p = q;
  p.psi.reverseInPlace();
  p.kernel_term.reverseInPlace();
  CHECK(variance_hat(p) == doctest::Approx(variance_hat(q)).epsilon(1e-13));
}

TEST_CASE("scores reject a vanishing treated-dose density")
{
  DrComponents c;
  c.weights.labels = { "a", "b" };
  c.weights.raw = { Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3) };
  c.weights.normalized = { Eigen::VectorXd::Constant(3, 1.0 / 3), Eigen::VectorXd::Constant(3, 1.0 / 3) };
  c.residuals = { Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0, 0, 0) };
  c.signs = { 1.0, -1.0 };
  CHECK_THROWS_AS(compute_scores(c, Eigen::VectorXd::Zero(3), 2.0), EstimationError);
  const auto s = compute_scores(c, Eigen::VectorXd::Ones(3), 2.0);
  // one-term score: psi = n * w~ * r
  CHECK(s.psi == Eigen::Vector3d(1, 2, 3));
  CHECK(s.psi.mean() == doctest::Approx(2.0));
}

TEST_CASE("bootstrap draws follow the multiplier formula")
{
  const auto s = random_scores(300, 4);
  const Eigen::VectorXd draws = bootstrap_draws(s, 120, 77);
  const Eigen::VectorXd inf = s.influence();
  for (int b : { 0, 1, 119 }) {
    const Eigen::VectorXd xi = draw_multipliers(300, 77, std::uint64_t(b));
    const double expect = s.delta_hat + ((xi.array() - 1.0) * inf.array()).sum() / 300.0;
    CHECK(draws[b] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("bootstrap spread matches the asymptotic variance")
{
  const auto s = random_scores(4000, 5);
  const Eigen::VectorXd draws = bootstrap_draws(s, 4000, 9);
  const double mean = draws.mean();
  const double var = (draws.array() - mean).square().sum() / (draws.size() - 1);
  CHECK(var == doctest::Approx(variance_hat(s) / 4000.0).epsilon(0.08));
  CHECK(std::abs(mean - s.delta_hat) < 4.0 * std::sqrt(var / 4000.0));

  const auto [lo, hi] = multiplier_bootstrap(s, 2000, 0.05, 3);
  const auto [alo, ahi] = ci_asymptotic(s.delta_hat, variance_hat(s), 4000, 0.05);
  CHECK((hi - lo) == doctest::Approx(ahi - alo).epsilon(0.1));
}

TEST_CASE("bootstrap is deterministic and matches the serial loop")
{
  const auto s = random_scores(500, 6);
  const auto a = multiplier_bootstrap(s, 999, 0.05, 42);
  const auto b = multiplier_bootstrap(s, 999, 0.05, 42);
  const auto c = multiplier_bootstrap_serial(s, 999, 0.05, 42);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a != multiplier_bootstrap(s, 999, 0.05, 43));
  CHECK_THROWS_AS(multiplier_bootstrap(s, 99, 0.05, 42), InputError);
  CHECK_THROWS_AS(multiplier_bootstrap(s, 100, 1.5, 42), InputError);
}

TEST_CASE("constant multipliers collapse the interval")
{
  const auto s = random_scores(200, 7);
  const auto [lo, hi] = multiplier_bootstrap(s, 100, 0.05, 1, MultiplierLaw::constant_one);
  CHECK(lo == s.delta_hat);
  CHECK(hi == s.delta_hat);
  CHECK(lo == doctest::Approx(s.psi.mean()));
}

TEST_CASE("multiplier moments")
{
  double sum = 0.0, sq = 0.0;
  const int reps = 100000;
  for (int b = 0; b < reps; ++b) {
    const double xi = draw_multipliers(1, 5, std::uint64_t(b))[0];
    sum += xi;
    sq += xi * xi;
  }
  const double mean = sum / reps;
  const double var = sq / reps - mean * mean;
  CHECK(std::abs(mean - 1.0) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK(draw_multipliers(10, 5, 3) == draw_multipliers(10, 5, 3));
  CHECK(draw_multipliers(10, 5, 3) != draw_multipliers(10, 5, 4));
}
