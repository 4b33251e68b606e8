#pragma once

#include "didcont/model.hpp"

#include <Eigen/Dense>

namespace didcont {

struct KernelSpec
{
  KernelFamily family = KernelFamily::epanechnikov;
  double h = 1.0;
};

//! Second-order kernel K(u): Epanechnikov 0.75(1-u^2) on [-1, 1], or the
//! standard normal density.
double kernel_value(KernelFamily family, double u);

//! Dose weight omega(D; d, h) = K((D - d) / h) / h. Throws InputError if h <= 0.
double omega(double dose, double at, double h, KernelFamily family);

//! 2.34 n^{-1/4} / undersmooth_factor.
double rule_of_thumb_bandwidth(long long n, double undersmooth_factor = 1.0);

//! Integral of u^order K(u) over the kernel support by composite Simpson
//! (Gaussian truncated at +-8).
double kernel_moment(KernelFamily family, int order);

//! Vector of omega(D_i; d, h). OpenMP-parallel over rows.
Eigen::VectorXd omega_weights(const Eigen::VectorXd& doses,
                              double at,
                              double h,
                              KernelFamily family);

//! Serial reference for omega_weights.
Eigen::VectorXd omega_weights_serial(const Eigen::VectorXd& doses,
                                     double at,
                                     double h,
                                     KernelFamily family);

} // namespace didcont
