#include "didcont/nuisance.hpp"
#include "didcont/errors.hpp"
#include "didcont/kernel.hpp"
#include "didcont/rng.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace didcont {

namespace {

double normal_pdf(double z)
{
  return boost::math::constants::one_div_root_two_pi<double>() *
         std::exp(-0.5 * z * z);
}

// Seed slots; rho/mu streams depend on the period only so that a
// degenerate estimand (d_t == d'_t) reproduces identical fits.
enum Slot : std::uint64_t
{
  slot_mu_pre = 1,
  slot_mu_post = 2,
  slot_density_pre = 3,
  slot_density_post = 4,
  slot_period = 5,
  slot_m = 6,
  slot_density = 7,
};

std::string cell_name(double dose, const std::string& period)
{
  std::ostringstream out;
  out << "empty local cell (dose " << dose << ", period " << period << ")";
  return out.str();
}

LassoModel fit_local_mean(const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& targets,
                          const Eigen::VectorXd& doses,
                          double at,
                          double h,
                          const EstimationConfig& config,
                          std::uint64_t seed,
                          const std::string& period_label)
{
  const Eigen::VectorXd w = omega_weights(doses, at, h, config.kernel);
  if (!(w.sum() > 0.0))
    throw EstimationError(cell_name(at, period_label));
  return fit_lasso(features, targets, w, {}, config.lasso_cv_folds, seed);
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m,
                        const std::vector<Eigen::Index>& rows)
{
  return m(rows, Eigen::all);
}

} // namespace

CondDensityModel fit_cond_density(const Eigen::MatrixXd& features,
                                  const Eigen::VectorXd& doses,
                                  DensityFamily family,
                                  const std::vector<double>& lambda_grid,
                                  int cv_folds,
                                  std::uint64_t seed)
{
  if (features.rows() != doses.size())
    throw InputError("density model: features and doses disagree in length");
  if (doses.size() == 0)
    throw InputError("density model: no observations");
  Eigen::VectorXd target = doses;
  if (family == DensityFamily::loglinear_normal) {
    for (Eigen::Index i = 0; i < doses.size(); ++i) {
      if (!(doses[i] > 0.0))
        throw InputError("loglinear density model requires positive doses");
      target[i] = std::log(doses[i]);
    }
  }
  CondDensityModel model;
  model.family = family;
  model.mean_model =
    fit_lasso(features, target, Eigen::VectorXd::Ones(doses.size()),
              lambda_grid, cv_folds, seed);
  const Eigen::VectorXd resid = target - model.mean_model.predict(features);
  model.sigma = std::max(
    std::sqrt(resid.squaredNorm() / static_cast<double>(resid.size())),
    sigma_floor);
  return model;
}

namespace {

double density_given_mean(DensityFamily family, double mu, double sigma, double d)
{
  if (family == DensityFamily::linear_normal)
    return normal_pdf((d - mu) / sigma) / sigma;
  if (!(d > 0.0))
    return 0.0;
  return normal_pdf((std::log(d) - mu) / sigma) / (d * sigma);
}

void check_dose(const CondDensityModel& model, double d)
{
  if (model.family == DensityFamily::loglinear_normal && !(d > 0.0))
    throw InputError("loglinear density evaluated at a nonpositive dose");
}

} // namespace

double density_at_unfloored(const CondDensityModel& model,
                            const Eigen::Ref<const Eigen::RowVectorXd>& row,
                            double d)
{
  return density_given_mean(
    model.family, model.mean_model.predict_row(row), model.sigma, d);
}

double density_at_row(const CondDensityModel& model,
                      const Eigen::Ref<const Eigen::RowVectorXd>& row,
                      double d)
{
  check_dose(model, d);
  return std::max(density_at_unfloored(model, row, d), density_floor);
}

Eigen::VectorXd density_at(const CondDensityModel& model,
                           const Eigen::MatrixXd& features,
                           double d)
{
  check_dose(model, d);
  const Eigen::VectorXd mu = model.mean_model.predict(features);
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i)
    out[i] = std::max(density_given_mean(model.family, mu[i], model.sigma, d),
                      density_floor);
  return out;
}

Eigen::Index NuisanceSet::size() const
{
  return design == Design::rcs ? mu_treat_pre.size() : m_control.size();
}

NuisanceSet NuisanceSet::allocate(Design design, Eigen::Index n)
{
  NuisanceSet s;
  s.design = design;
  if (design == Design::rcs) {
    for (auto* v : { &s.mu_treat_pre, &s.mu_control_post, &s.mu_control_pre,
                     &s.rho_treat_post, &s.rho_treat_pre, &s.rho_control_post,
                     &s.rho_control_pre })
      v->setZero(n);
  } else {
    for (auto* v : { &s.m_control, &s.p_treat, &s.p_control })
      v->setZero(n);
  }
  return s;
}

namespace {

template<typename F>
void for_each_slot(Design design, F&& f)
{
  if (design == Design::rcs) {
    f(&NuisanceSet::mu_treat_pre);
    f(&NuisanceSet::mu_control_post);
    f(&NuisanceSet::mu_control_pre);
    f(&NuisanceSet::rho_treat_post);
    f(&NuisanceSet::rho_treat_pre);
    f(&NuisanceSet::rho_control_post);
    f(&NuisanceSet::rho_control_pre);
  } else {
    f(&NuisanceSet::m_control);
    f(&NuisanceSet::p_treat);
    f(&NuisanceSet::p_control);
  }
}

} // namespace

void NuisanceSet::scatter(const NuisanceSet& part,
                          const std::vector<Eigen::Index>& rows)
{
  for_each_slot(design, [&](Eigen::VectorXd NuisanceSet::*slot) {
    (this->*slot)(rows) = part.*slot;
  });
}

NuisanceSet NuisanceSet::gather(const std::vector<Eigen::Index>& rows) const
{
  NuisanceSet out;
  out.design = design;
  for_each_slot(design, [&](Eigen::VectorXd NuisanceSet::*slot) {
    out.*slot = (this->*slot)(rows);
  });
  return out;
}

NuisanceSet estimate_nuisances_rcs(const RepeatedCrossSectionSample& train,
                                   const Eigen::MatrixXd& eval_features,
                                   const EstimandSpec& estimand,
                                   const EstimationConfig& config,
                                   double h,
                                   std::uint64_t seed)
{
  const Eigen::MatrixXd features = nuisance_features(train.history, train.x);
  if (eval_features.cols() != features.cols())
    throw InputError("evaluation features do not match training features");
  const int post = estimand.t;
  const int pre = estimand.t - 1;
  std::vector<Eigen::Index> post_rows, pre_rows;
  Eigen::VectorXd is_post(train.n());
  for (Eigen::Index i = 0; i < train.n(); ++i) {
    const int label = train.period[static_cast<std::size_t>(i)];
    is_post[i] = label == post ? 1.0 : 0.0;
    if (label == post)
      post_rows.push_back(i);
    else if (label == pre)
      pre_rows.push_back(i);
    else
      throw InputError("period " + std::to_string(label) +
                       " is neither t nor t-1; relabel first");
  }
  if (post_rows.empty())
    throw EstimationError("no training observations in period t");
  if (pre_rows.empty())
    throw EstimationError("no training observations in period t-1");

  const Eigen::MatrixXd f_post = rows_of(features, post_rows);
  const Eigen::MatrixXd f_pre = rows_of(features, pre_rows);
  const Eigen::VectorXd y_post = train.y(post_rows);
  const Eigen::VectorXd y_pre = train.y(pre_rows);
  const Eigen::VectorXd d_post = train.d(post_rows);
  const Eigen::VectorXd d_pre = train.d(pre_rows);
  const std::string post_name = std::to_string(post);
  const std::string pre_name = std::to_string(pre);
  const int cv = config.lasso_cv_folds;

  NuisanceSet out = NuisanceSet::allocate(Design::rcs, eval_features.rows());

  const LassoModel mu_treat_pre =
    fit_local_mean(f_pre, y_pre, d_pre, estimand.d_treat, h, config,
                   derive_seed(seed, { slot_mu_pre }), pre_name);
  out.mu_treat_pre = mu_treat_pre.predict(eval_features);
  if (estimand.d_control == estimand.d_treat) {
    out.mu_control_pre = out.mu_treat_pre;
  } else {
    out.mu_control_pre =
      fit_local_mean(f_pre, y_pre, d_pre, estimand.d_control, h, config,
                     derive_seed(seed, { slot_mu_pre }), pre_name)
        .predict(eval_features);
  }
  out.mu_control_post =
    fit_local_mean(f_post, y_post, d_post, estimand.d_control, h, config,
                   derive_seed(seed, { slot_mu_post }), post_name)
      .predict(eval_features);

  // Checks that the treated-dose cell of period t is populated too; its mean
  // is not a nuisance but the score divides by its kernel mass.
  if (!(omega_weights(d_post, estimand.d_treat, h, config.kernel).sum() > 0.0))
    throw EstimationError(cell_name(estimand.d_treat, post_name));

  const CondDensityModel dens_post =
    fit_cond_density(f_post, d_post, config.ps_family, {}, cv,
                     derive_seed(seed, { slot_density_post }));
  const CondDensityModel dens_pre =
    fit_cond_density(f_pre, d_pre, config.ps_family, {}, cv,
                     derive_seed(seed, { slot_density_pre }));
  const LogisticLassoModel period_model = fit_logistic_lasso(
    features, is_post, {}, cv, derive_seed(seed, { slot_period }));

  const Eigen::VectorXd pr_post = period_model.predict_proba(eval_features);
  const Eigen::VectorXd pr_pre = (1.0 - pr_post.array()).matrix();
  out.rho_treat_post =
    density_at(dens_post, eval_features, estimand.d_treat).cwiseProduct(pr_post);
  out.rho_treat_pre =
    density_at(dens_pre, eval_features, estimand.d_treat).cwiseProduct(pr_pre);
  out.rho_control_post =
    density_at(dens_post, eval_features, estimand.d_control).cwiseProduct(pr_post);
  out.rho_control_pre =
    density_at(dens_pre, eval_features, estimand.d_control).cwiseProduct(pr_pre);
  return out;
}

NuisanceSet estimate_nuisances_panel(const PanelSample& train,
                                     const Eigen::MatrixXd& eval_features,
                                     const EstimandSpec& estimand,
                                     const EstimationConfig& config,
                                     double h,
                                     std::uint64_t seed)
{
  const Eigen::MatrixXd features = nuisance_features(train.history, train.x);
  if (eval_features.cols() != features.cols())
    throw InputError("evaluation features do not match training features");
  const Eigen::VectorXd dy = train.y_post - train.y_pre;

  if (!(omega_weights(train.d, estimand.d_treat, h, config.kernel).sum() > 0.0))
    throw EstimationError(cell_name(estimand.d_treat, "panel"));

  NuisanceSet out = NuisanceSet::allocate(Design::panel, eval_features.rows());
  out.m_control = fit_local_mean(features, dy, train.d, estimand.d_control, h,
                                 config, derive_seed(seed, { slot_m }), "panel")
                    .predict(eval_features);
  const CondDensityModel dens =
    fit_cond_density(features, train.d, config.ps_family, {},
                     config.lasso_cv_folds, derive_seed(seed, { slot_density }));
  out.p_treat = density_at(dens, eval_features, estimand.d_treat);
  out.p_control = estimand.d_control == estimand.d_treat
                    ? out.p_treat
                    : density_at(dens, eval_features, estimand.d_control);
  return out;
}

} // namespace didcont
