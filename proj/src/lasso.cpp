#include "didcont/lasso.hpp"
#include "didcont/errors.hpp"
#include "didcont/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace didcont {

namespace {

double soft_threshold(double z, double lambda)
{
  if (z > lambda)
    return z - lambda;
  if (z < -lambda)
    return z + lambda;
  return 0.0;
}

// Weighted first and second moments of (x, y) around a fixed shift.
struct Moments
{
  double sw = 0.0;
  double sy = 0.0;
  double syy = 0.0;
  Eigen::VectorXd sx;
  Eigen::VectorXd sxy;
  Eigen::MatrixXd sxx;

  explicit Moments(Eigen::Index r)
    : sx(Eigen::VectorXd::Zero(r))
    , sxy(Eigen::VectorXd::Zero(r))
    , sxx(Eigen::MatrixXd::Zero(r, r))
  {}

  Moments& operator+=(const Moments& o)
  {
    sw += o.sw;
    sy += o.sy;
    syy += o.syy;
    sx += o.sx;
    sxy += o.sxy;
    sxx += o.sxx;
    return *this;
  }
};

Moments accumulate(const Eigen::MatrixXd& xs,
                   const Eigen::VectorXd& ys,
                   const Eigen::VectorXd& w)
{
  Moments m(xs.cols());
  m.sw = w.sum();
  m.sy = w.dot(ys);
  m.syy = w.dot(ys.cwiseProduct(ys));
  if (xs.cols() > 0) {
    const Eigen::MatrixXd wx = xs.array().colwise() * w.array();
    m.sx = wx.colwise().sum().transpose();
    m.sxy = wx.transpose() * ys;
    m.sxx.noalias() = wx.transpose() * xs;
  }
  return m;
}

// Correlation-scale problem derived from moments.
struct Standardized
{
  double ymean = 0.0;
  double yvar = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  Eigen::VectorXd c;
  Eigen::MatrixXd gram;
  std::vector<char> live;
  bool any_live = false;
};

bool negligible_variance(double var, double mean)
{
  return !(var > 1e-14 * (1.0 + mean * mean));
}

Standardized standardize(const Moments& m)
{
  const Eigen::Index r = m.sx.size();
  Standardized s;
  s.ymean = m.sy / m.sw;
  s.yvar = std::max(0.0, m.syy / m.sw - s.ymean * s.ymean);
  s.mean = m.sx / m.sw;
  s.scale = Eigen::VectorXd::Ones(r);
  s.live.assign(static_cast<std::size_t>(r), 0);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double var = m.sxx(j, j) / m.sw - s.mean[j] * s.mean[j];
    if (!negligible_variance(var, s.mean[j])) {
      s.scale[j] = std::sqrt(var);
      s.live[static_cast<std::size_t>(j)] = 1;
      s.any_live = true;
    }
  }
  s.gram = Eigen::MatrixXd::Zero(r, r);
  s.c = Eigen::VectorXd::Zero(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    if (!s.live[static_cast<std::size_t>(j)])
      continue;
    s.c[j] = (m.sxy[j] / m.sw - s.mean[j] * s.ymean) / s.scale[j];
    for (Eigen::Index k = 0; k < r; ++k) {
      if (!s.live[static_cast<std::size_t>(k)])
        continue;
      s.gram(j, k) = (m.sxx(j, k) / m.sw - s.mean[j] * s.mean[k]) /
                     (s.scale[j] * s.scale[k]);
    }
  }
  return s;
}

double gram_objective(const Standardized& s,
                      const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& grad,
                      double lambda)
{
  return 0.5 * s.yvar - 0.5 * s.c.dot(beta) - 0.5 * grad.dot(beta) +
         lambda * beta.lpNorm<1>();
}

// Step toward the exact minimizer of the objective restricted to the current
// support and sign pattern. Accepted only if it lowers the objective, so the
// descent stays monotone.
bool support_step(const Standardized& s,
                  double lambda,
                  Eigen::VectorXd& beta,
                  Eigen::VectorXd& grad)
{
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0)
      support.push_back(j);
  }
  if (support.empty())
    return false;
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd g(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const Eigen::Index ja = support[static_cast<std::size_t>(a)];
    rhs[a] = s.c[ja] - lambda * (beta[ja] > 0.0 ? 1.0 : -1.0);
    for (Eigen::Index b = 0; b < k; ++b)
      g(a, b) = s.gram(ja, support[static_cast<std::size_t>(b)]);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    return false;
  const Eigen::VectorXd sol = ldlt.solve(rhs);
  if (!sol.allFinite())
    return false;
  // Walk toward the restricted minimizer, stopping where the first
  // coefficient would change sign; that coefficient leaves the support.
  double step = 1.0;
  Eigen::Index blocking = -1;
  for (Eigen::Index a = 0; a < k; ++a) {
    const double b = beta[support[static_cast<std::size_t>(a)]];
    if (sol[a] * b <= 0.0) {
      const double t = b / (b - sol[a]);
      if (t < step) {
        step = t;
        blocking = a;
      }
    }
  }
  Eigen::VectorXd next = beta;
  for (Eigen::Index a = 0; a < k; ++a) {
    const Eigen::Index ja = support[static_cast<std::size_t>(a)];
    next[ja] = a == blocking ? 0.0 : beta[ja] + step * (sol[a] - beta[ja]);
  }
  const Eigen::VectorXd next_grad = s.c - s.gram * next;
  if (!(gram_objective(s, next, next_grad, lambda) <
        gram_objective(s, beta, grad, lambda)))
    return false;
  beta = next;
  grad = next_grad;
  return true;
}

// Covariance-update coordinate descent. `grad` must equal c - gram * beta on
// entry and is kept consistent on exit.
void gram_solve(const Standardized& s,
                double lambda,
                Eigen::VectorXd& beta,
                Eigen::VectorXd& grad,
                const LassoOptions& opt)
{
  const Eigen::Index r = beta.size();
  auto update = [&](Eigen::Index j) {
    if (!s.live[static_cast<std::size_t>(j)])
      return 0.0;
    const double cjj = s.gram(j, j);
    const double z = grad[j] + cjj * beta[j];
    const double next = soft_threshold(z, lambda) / cjj;
    const double delta = next - beta[j];
    if (delta != 0.0) {
      beta[j] = next;
      grad.noalias() -= delta * s.gram.col(j);
    }
    return std::abs(delta);
  };
  auto after_sweep = [&] {
    if (opt.on_sweep)
      opt.on_sweep(gram_objective(s, beta, grad, lambda));
  };

  std::vector<Eigen::Index> active;
  int sweeps = 0;
  while (sweeps < opt.max_sweeps) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < r; ++j)
      max_delta = std::max(max_delta, update(j));
    ++sweeps;
    after_sweep();
    if (max_delta < opt.tolerance)
      break;
    active.clear();
    for (Eigen::Index j = 0; j < r; ++j) {
      if (beta[j] != 0.0)
        active.push_back(j);
    }
    int inner_sweeps = 0;
    while (sweeps < opt.max_sweeps) {
      double inner = 0.0;
      for (Eigen::Index j : active)
        inner = std::max(inner, update(j));
      ++sweeps;
      ++inner_sweeps;
      after_sweep();
      if (inner < opt.tolerance)
        break;
      // slow progress on a fixed support: jump to its exact solution
      if (inner_sweeps % 10 == 0 && support_step(s, lambda, beta, grad))
        inner_sweeps = 0;
    }
  }
}

// Warm-started path over `grid`, stopping once the explained fraction of
// the target variance exceeds opt.max_deviance_ratio. `on_point` sees each
// solution.
template<typename OnPoint>
void gaussian_path(const Standardized& s,
                   const std::vector<double>& grid,
                   const LassoOptions& opt,
                   OnPoint&& on_point)
{
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(s.c.size());
  Eigen::VectorXd grad = s.c;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    gram_solve(s, grid[l], beta, grad, opt);
    on_point(l, beta);
    // weighted residual variance is yvar - beta'(c + grad)
    const double resid_var = s.yvar - beta.dot(s.c + grad);
    if (s.yvar > 0.0 && 1.0 - resid_var / s.yvar > opt.max_deviance_ratio)
      return;
  }
}

LassoModel make_linear_model(const Standardized& s,
                             const Eigen::VectorXd& x_shift,
                             double y_shift,
                             const Eigen::VectorXd& beta,
                             double lambda)
{
  LassoModel model;
  model.intercept = y_shift + s.ymean;
  model.coefficients = beta;
  model.lambda = lambda;
  model.feature_means = x_shift + s.mean;
  model.feature_scales = s.scale;
  return model;
}

// Rows with strictly positive weight.
std::vector<Eigen::Index> positive_rows(const Eigen::VectorXd& weights)
{
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0)
      rows.push_back(i);
  }
  return rows;
}

void check_shapes(const Eigen::MatrixXd& features,
                  const Eigen::VectorXd& targets,
                  const Eigen::VectorXd& weights)
{
  if (features.rows() != targets.size() || weights.size() != targets.size())
    throw InputError("lasso: features, targets and weights disagree in length");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw InputError("lasso: weights must be finite and nonnegative");
  }
}

} // namespace

double LassoModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const
{
  double out = intercept;
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0.0)
      out += coefficients[j] * (row[j] - feature_means[j]) / feature_scales[j];
  }
  return out;
}

Eigen::VectorXd LassoModel::predict(const Eigen::MatrixXd& features) const
{
  Eigen::VectorXd out = Eigen::VectorXd::Constant(features.rows(), intercept);
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0.0)
      out.array() += coefficients[j] *
                     (features.col(j).array() - feature_means[j]) /
                     feature_scales[j];
  }
  return out;
}

Eigen::VectorXd LassoModel::raw_coefficients() const
{
  return coefficients.cwiseQuotient(feature_scales);
}

double LassoModel::raw_intercept() const
{
  return intercept - raw_coefficients().dot(feature_means);
}

namespace {

double sigmoid(double eta)
{
  eta = std::clamp(eta, -30.0, 30.0);
  return 1.0 / (1.0 + std::exp(-eta));
}

} // namespace

double LogisticLassoModel::predict_proba_row(
  const Eigen::Ref<const Eigen::RowVectorXd>& row) const
{
  double eta = intercept;
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0.0)
      eta += coefficients[j] * (row[j] - feature_means[j]) / feature_scales[j];
  }
  return sigmoid(eta);
}

Eigen::VectorXd LogisticLassoModel::predict_proba(
  const Eigen::MatrixXd& features) const
{
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i)
    out[i] = predict_proba_row(features.row(i));
  return out;
}

std::vector<double> lambda_grid(double lambda_max, int count, double ratio)
{
  std::vector<double> grid(static_cast<std::size_t>(std::max(count, 1)));
  if (count <= 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double step = std::log(ratio) / (count - 1);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] = lambda_max * std::exp(step * k);
  return grid;
}

std::vector<int> content_folds(const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& weights,
                               int folds,
                               std::uint64_t seed)
{
  const Eigen::Index m = targets.size();
  std::vector<std::pair<std::uint64_t, Eigen::Index>> keys(
    static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    std::uint64_t h = mix64(seed);
    h = hash_double(h, targets[i]);
    h = hash_double(h, weights[i]);
    for (Eigen::Index j = 0; j < features.cols(); ++j)
      h = hash_double(h, features(i, j));
    keys[static_cast<std::size_t>(i)] = { h, i };
  }
  std::sort(keys.begin(), keys.end());
  std::vector<int> fold(static_cast<std::size_t>(m));
  for (std::size_t rank = 0; rank < keys.size(); ++rank)
    fold[static_cast<std::size_t>(keys[rank].second)] =
      static_cast<int>(rank % static_cast<std::size_t>(folds));
  return fold;
}

double lasso_lambda_max(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& targets,
                        const Eigen::VectorXd& weights)
{
  check_shapes(features, targets, weights);
  const auto rows = positive_rows(weights);
  if (rows.empty())
    throw InputError("lasso: all weights are zero");
  const Eigen::MatrixXd x = features(rows, Eigen::all);
  const Eigen::VectorXd y = targets(rows);
  const Eigen::VectorXd w = weights(rows);
  const auto s = standardize(accumulate(x, y, w));
  return s.c.size() > 0 ? s.c.cwiseAbs().maxCoeff() : 0.0;
}

LassoModel fit_lasso(const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& targets,
                     const Eigen::VectorXd& weights,
                     const std::vector<double>& grid_in,
                     int cv_folds,
                     std::uint64_t seed,
                     const LassoOptions& options)
{
  check_shapes(features, targets, weights);
  const auto rows = positive_rows(weights);
  if (rows.empty())
    throw InputError("lasso: all weights are zero");
  const Eigen::Index r = features.cols();

  // Shift by the weighted means so accumulated moments stay well scaled.
  const Eigen::VectorXd w = weights(rows);
  const double sw = w.sum();
  const Eigen::VectorXd y_raw = targets(rows);
  const double y_shift = w.dot(y_raw) / sw;
  Eigen::MatrixXd xs = features(rows, Eigen::all);
  Eigen::VectorXd x_shift = Eigen::VectorXd::Zero(r);
  if (r > 0) {
    x_shift = (xs.transpose() * w) / sw;
    xs.rowwise() -= x_shift.transpose();
  }
  const Eigen::VectorXd ys = y_raw.array() - y_shift;
  const Eigen::Index m = ys.size();

  const Standardized full = standardize(accumulate(xs, ys, w));
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r);
  const bool degenerate_target = negligible_variance(full.yvar, y_shift);
  if (degenerate_target || !full.any_live || m < 3)
    return make_linear_model(full, x_shift, y_shift, zero, 0.0);

  std::vector<double> grid = grid_in;
  if (grid.empty()) {
    const double lmax = full.c.cwiseAbs().maxCoeff();
    if (!(lmax > 0.0))
      return make_linear_model(full, x_shift, y_shift, zero, 0.0);
    grid = lambda_grid(lmax, options.n_lambda, options.lambda_min_ratio);
  }

  // Full-data path first: it fixes the (possibly truncated) grid and keeps
  // every solution so the chosen one needs no refit.
  std::vector<Eigen::VectorXd> solutions;
  gaussian_path(full, grid, options, [&](std::size_t, const Eigen::VectorXd& b) {
    solutions.push_back(b);
  });
  grid.resize(solutions.size());

  std::size_t chosen = 0;
  if (grid.size() > 1) {
    const int nf = static_cast<int>(std::min<Eigen::Index>(cv_folds, m));
    // Raw values: the centered ones depend on summation order.
    const auto fold =
      content_folds(features(rows, Eigen::all), y_raw, w, nf, seed);
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(nf));
    for (Eigen::Index i = 0; i < m; ++i)
      members[static_cast<std::size_t>(fold[static_cast<std::size_t>(i)])]
        .push_back(i);

    std::vector<Moments> parts;
    parts.reserve(members.size());
    for (const auto& idx : members)
      parts.push_back(accumulate(xs(idx, Eigen::all), ys(idx), w(idx)));

    LassoOptions quiet = options;
    quiet.on_sweep = nullptr;
    std::vector<double> cv_loss(grid.size(), 0.0);
    for (int k = 0; k < nf; ++k) {
      Moments train(r);
      for (int j = 0; j < nf; ++j) {
        if (j != k)
          train += parts[static_cast<std::size_t>(j)];
      }
      const auto& idx = members[static_cast<std::size_t>(k)];
      const Eigen::MatrixXd xv = xs(idx, Eigen::all);
      const Eigen::VectorXd yv = ys(idx);
      const Eigen::VectorXd wv = w(idx);
      const Standardized st = standardize(train);
      double last_loss = 0.0;
      std::size_t last = 0;
      auto score = [&](std::size_t l, const Eigen::VectorXd& beta) {
        const Eigen::VectorXd b = beta.cwiseQuotient(st.scale);
        const double offset = st.ymean - b.dot(st.mean);
        const Eigen::VectorXd resid = (yv - xv * b).array() - offset;
        last_loss = wv.dot(resid.cwiseProduct(resid));
        cv_loss[l] += last_loss;
        last = l + 1;
      };
      if (st.any_live)
        gaussian_path(st, grid, quiet, score);
      else
        score(0, zero);
      // A saturated fold keeps its last solution for the remaining lambdas.
      for (std::size_t l = last; l < grid.size(); ++l)
        cv_loss[l] += last_loss;
    }
    chosen = static_cast<std::size_t>(
      std::min_element(cv_loss.begin(), cv_loss.end()) - cv_loss.begin());
  }
  return make_linear_model(full, x_shift, y_shift, solutions[chosen], grid[chosen]);
}

namespace {

struct LogitScaled
{
  Eigen::MatrixXd xs;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::vector<char> live;
};

LogitScaled scale_features(const Eigen::MatrixXd& x)
{
  const Eigen::Index m = x.rows();
  const Eigen::Index r = x.cols();
  LogitScaled out;
  out.mean = r > 0 ? Eigen::VectorXd(x.colwise().mean().transpose())
                   : Eigen::VectorXd::Zero(0);
  out.scale = Eigen::VectorXd::Ones(r);
  out.live.assign(static_cast<std::size_t>(r), 0);
  out.xs = x;
  if (r > 0)
    out.xs.rowwise() -= out.mean.transpose();
  for (Eigen::Index j = 0; j < r; ++j) {
    const double var = out.xs.col(j).squaredNorm() / static_cast<double>(m);
    if (!negligible_variance(var, out.mean[j])) {
      out.scale[j] = std::sqrt(var);
      out.xs.col(j) /= out.scale[j];
      out.live[static_cast<std::size_t>(j)] = 1;
    } else {
      out.xs.col(j).setZero();
    }
  }
  return out;
}

double logit_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& eta)
{
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = std::clamp(eta[i], -30.0, 30.0);
    // -log p = log(1 + exp(-e)), -log(1 - p) = log(1 + exp(e))
    dev += y[i] > 0.5 ? std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
  }
  return 2.0 * dev;
}

// Penalized IRLS. Each step solves the weighted least-squares lasso in
// covariance mode, with the intercept profiled out by weighted centering.
// Warm-started through (b0, beta).
void logit_solve(const LogitScaled& d,
                 const Eigen::VectorXd& y,
                 double lambda,
                 double& b0,
                 Eigen::VectorXd& beta,
                 const LassoOptions& opt)
{
  const Eigen::Index m = y.size();
  const Eigen::Index r = beta.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  LassoOptions inner = opt;
  inner.on_sweep = nullptr;

  Eigen::VectorXd eta = d.xs * beta;
  eta.array() += b0;
  Eigen::VectorXd w(m), z(m);
  Standardized q;
  q.gram.resize(r, r);

  for (int outer = 0; outer < 100; ++outer) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double p = sigmoid(eta[i]);
      w[i] = std::max(p * (1.0 - p), 1e-5);
      z[i] = eta[i] + (y[i] - p) / w[i];
    }
    const double sw = w.sum();
    const Eigen::VectorXd xbar = d.xs.transpose() * w / sw;
    const double zbar = w.dot(z) / sw;
    const Eigen::MatrixXd xw = d.xs.array().colwise() * w.array().sqrt();
    q.gram.setZero();
    q.gram.selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose(), inv_m);
    q.gram = q.gram.selfadjointView<Eigen::Lower>();
    q.gram.noalias() -= (sw * inv_m) * xbar * xbar.transpose();
    q.c = inv_m * (d.xs.transpose() * w.cwiseProduct(z)) - (sw * inv_m * zbar) * xbar;
    q.live = d.live;
    for (Eigen::Index j = 0; j < r; ++j) {
      if (!(q.gram(j, j) > 0.0))
        q.live[static_cast<std::size_t>(j)] = 0;
    }

    const Eigen::VectorXd beta_old = beta;
    const double b0_old = b0;
    Eigen::VectorXd grad = q.c - q.gram * beta;
    gram_solve(q, lambda, beta, grad, inner);
    b0 = zbar - xbar.dot(beta);

    eta = d.xs * beta;
    eta.array() += b0;
    const double change = std::max(
      r > 0 ? (beta - beta_old).cwiseAbs().maxCoeff() : 0.0, std::abs(b0 - b0_old));
    if (change < opt.tolerance)
      break;
  }
}

LogisticLassoModel make_logistic_model(const LogitScaled& d,
                                       double b0,
                                       const Eigen::VectorXd& beta,
                                       double lambda)
{
  LogisticLassoModel model;
  model.intercept = b0;
  model.coefficients = beta;
  model.lambda = lambda;
  model.feature_means = d.mean;
  model.feature_scales = d.scale;
  return model;
}

// Fits the path over `grid`, stopping once the deviance ratio saturates.
// Returns the number of grid points fitted; `on_point` sees each solution.
template<typename OnPoint>
std::size_t logit_path(const LogitScaled& d,
                       const Eigen::VectorXd& y,
                       const std::vector<double>& grid,
                       const LassoOptions& opt,
                       OnPoint&& on_point)
{
  const Eigen::Index r = d.xs.cols();
  const double ybar = y.mean();
  double b0 = std::log(ybar / (1.0 - ybar));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(r);
  const double null_dev =
    logit_deviance(y, Eigen::VectorXd::Constant(y.size(), b0));
  for (std::size_t l = 0; l < grid.size(); ++l) {
    logit_solve(d, y, grid[l], b0, beta, opt);
    on_point(l, b0, beta);
    Eigen::VectorXd eta = d.xs * beta;
    eta.array() += b0;
    const double ratio = 1.0 - logit_deviance(y, eta) / null_dev;
    if (ratio > opt.max_deviance_ratio)
      return l + 1;
  }
  return grid.size();
}

} // namespace

LogisticLassoModel fit_logistic_lasso(const Eigen::MatrixXd& features,
                                      const Eigen::VectorXd& labels,
                                      const std::vector<double>& grid_in,
                                      int cv_folds,
                                      std::uint64_t seed,
                                      const LassoOptions& options)
{
  if (features.rows() != labels.size())
    throw InputError("logistic lasso: features and labels disagree in length");
  const Eigen::Index m = labels.size();
  double positives = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0)
      throw InputError("logistic lasso: labels must be 0 or 1");
    positives += labels[i];
  }
  if (positives == 0.0 || positives == static_cast<double>(m))
    throw InputError("logistic lasso: single-class labels");

  const LogitScaled full = scale_features(features);
  const Eigen::Index r = features.cols();
  const double ybar = positives / static_cast<double>(m);
  const bool any_live =
    std::any_of(full.live.begin(), full.live.end(), [](char c) { return c; });
  if (!any_live)
    return make_logistic_model(
      full, std::log(ybar / (1.0 - ybar)), Eigen::VectorXd::Zero(r), 0.0);

  std::vector<double> grid = grid_in;
  if (grid.empty()) {
    const Eigen::VectorXd centered = labels.array() - ybar;
    const double lmax =
      (full.xs.transpose() * centered).cwiseAbs().maxCoeff() / static_cast<double>(m);
    grid = lambda_grid(lmax, options.n_lambda, options.lambda_min_ratio);
  }

  // Full-data path: fixes the (possibly truncated) grid and keeps every
  // solution so the chosen one needs no refit.
  std::vector<std::pair<double, Eigen::VectorXd>> solutions;
  const std::size_t fitted =
    logit_path(full, labels, grid, options,
               [&](std::size_t, double b0, const Eigen::VectorXd& beta) {
                 solutions.emplace_back(b0, beta);
               });
  grid.resize(fitted);

  std::size_t chosen = 0;
  if (grid.size() > 1) {
    const int nf = static_cast<int>(std::min<Eigen::Index>(cv_folds, m));
    const auto fold = content_folds(features, labels,
                                    Eigen::VectorXd::Ones(m), nf, seed);
    std::vector<double> cv_dev(grid.size(), 0.0);
    for (int k = 0; k < nf; ++k) {
      std::vector<Eigen::Index> train_idx, valid_idx;
      for (Eigen::Index i = 0; i < m; ++i)
        (fold[static_cast<std::size_t>(i)] == k ? valid_idx : train_idx).push_back(i);
      const Eigen::VectorXd ytrain = labels(train_idx);
      const double pos = ytrain.sum();
      if (pos == 0.0 || pos == static_cast<double>(ytrain.size()))
        continue;
      const LogitScaled dk = scale_features(features(train_idx, Eigen::all));
      const Eigen::MatrixXd xv = features(valid_idx, Eigen::all);
      const Eigen::VectorXd yv = labels(valid_idx);
      std::size_t last = 0;
      Eigen::VectorXd last_eta;
      auto score = [&](std::size_t l, double b0, const Eigen::VectorXd& beta) {
        const Eigen::VectorXd b = beta.cwiseQuotient(dk.scale);
        last_eta = xv * b;
        last_eta.array() += b0 - b.dot(dk.mean);
        cv_dev[l] += logit_deviance(yv, last_eta);
        last = l + 1;
      };
      logit_path(dk, ytrain, grid, options, score);
      // A saturated fold keeps its last solution for the remaining lambdas.
      for (std::size_t l = last; l < grid.size(); ++l)
        cv_dev[l] += logit_deviance(yv, last_eta);
    }
    chosen = static_cast<std::size_t>(
      std::min_element(cv_dev.begin(), cv_dev.end()) - cv_dev.begin());
  }
  return make_logistic_model(full, solutions[chosen].first,
                             solutions[chosen].second, grid[chosen]);
}

} // namespace didcont
