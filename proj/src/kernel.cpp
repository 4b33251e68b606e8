#include "didcont/kernel.hpp"
#include "didcont/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace didcont {

namespace {

constexpr double gaussian_range = 8.0;
constexpr int simpson_panels = 20000;

double support_limit(KernelFamily family)
{
  return family == KernelFamily::epanechnikov ? 1.0 : gaussian_range;
}

} // namespace

double kernel_value(KernelFamily family, double u)
{
  switch (family) {
    case KernelFamily::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelFamily::gaussian:
      return boost::math::constants::one_div_root_two_pi<double>() *
             std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double omega(double dose, double at, double h, KernelFamily family)
{
  if (!(h > 0.0))
    throw InputError("bandwidth must be positive");
  return kernel_value(family, (dose - at) / h) / h;
}

double rule_of_thumb_bandwidth(long long n, double undersmooth_factor)
{
  return 2.34 * std::pow(static_cast<double>(n), -0.25) / undersmooth_factor;
}

double kernel_moment(KernelFamily family, int order)
{
  const double a = support_limit(family);
  const double step = 2.0 * a / simpson_panels;
  auto f = [&](double u) { return std::pow(u, order) * kernel_value(family, u); };
  double sum = f(-a) + f(a);
  for (int k = 1; k < simpson_panels; ++k) {
    const double u = -a + k * step;
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(u);
  }
  return sum * step / 3.0;
}

Eigen::VectorXd omega_weights(const Eigen::VectorXd& doses,
                              double at,
                              double h,
                              KernelFamily family)
{
  if (!(h > 0.0))
    throw InputError("bandwidth must be positive");
  const Eigen::Index n = doses.size();
  Eigen::VectorXd out(n);
#pragma omp parallel for schedule(static) if (n > 50000)
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = kernel_value(family, (doses[i] - at) / h) / h;
  return out;
}

Eigen::VectorXd omega_weights_serial(const Eigen::VectorXd& doses,
                                     double at,
                                     double h,
                                     KernelFamily family)
{
  Eigen::VectorXd out(doses.size());
  for (Eigen::Index i = 0; i < doses.size(); ++i)
    out[i] = omega(doses[i], at, h, family);
  return out;
}

} // namespace didcont
