#include "didcont/model.hpp"
#include "didcont/errors.hpp"
#include "didcont/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace didcont {

int Table::find(const std::string& name) const
{
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name)
      return static_cast<int>(k);
  }
  return -1;
}

void Table::add(std::string name, std::vector<double> values)
{
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

namespace {

template<typename A, typename B>
bool same(const A& a, const B& b)
{
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

} // namespace

bool RepeatedCrossSectionSample::operator==(
  const RepeatedCrossSectionSample& o) const
{
  return same(y, o.y) && same(d, o.d) && same(history, o.history) &&
         same(x, o.x) && period == o.period && history_lags == o.history_lags;
}

bool PanelSample::operator==(const PanelSample& o) const
{
  return same(y_post, o.y_post) && same(y_pre, o.y_pre) && same(d, o.d) &&
         same(history, o.history) && same(x, o.x) &&
         history_lags == o.history_lags;
}

void EstimationConfig::validate() const
{
  if (folds < 2)
    throw InputError("folds must be at least 2");
  if (bandwidth && !(*bandwidth > 0.0))
    throw InputError("bandwidth must be positive");
  if (!(undersmooth_factor > 0.0))
    throw InputError("undersmooth factor must be positive");
  if (!(trim_threshold > 0.0 && trim_threshold <= 1.0))
    throw InputError("trim threshold must lie in (0, 1]");
  if (lasso_cv_folds < 2)
    throw InputError("lasso cv folds must be at least 2");
}

double EstimationConfig::bandwidth_for(Eigen::Index n) const
{
  if (bandwidth)
    return *bandwidth;
  return rule_of_thumb_bandwidth(n, undersmooth_factor);
}

std::string to_string(KernelFamily family)
{
  return family == KernelFamily::epanechnikov ? "epanechnikov" : "gaussian";
}

std::string to_string(DensityFamily family)
{
  return family == DensityFamily::linear_normal ? "linear" : "loglinear";
}

std::string to_string(Design design)
{
  return design == Design::rcs ? "rcs" : "panel";
}

KernelFamily parse_kernel_family(const std::string& name)
{
  if (name == "epanechnikov")
    return KernelFamily::epanechnikov;
  if (name == "gaussian")
    return KernelFamily::gaussian;
  throw InputError("unknown kernel '" + name + "'");
}

DensityFamily parse_density_family(const std::string& name)
{
  if (name == "linear" || name == "linear_normal")
    return DensityFamily::linear_normal;
  if (name == "loglinear" || name == "loglinear_normal")
    return DensityFamily::loglinear_normal;
  throw InputError("unknown propensity model '" + name + "'");
}

Design parse_design(const std::string& name)
{
  if (name == "rcs")
    return Design::rcs;
  if (name == "panel")
    return Design::panel;
  throw InputError("unknown design '" + name + "'");
}

namespace {

// Returns the numeric suffix of `name` after `prefix`, or -1 if `name` is not
// of the form prefix<digits>.
int numbered_suffix(const std::string& name, const std::string& prefix)
{
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
    return -1;
  const std::string tail = name.substr(prefix.size());
  if (!std::all_of(tail.begin(), tail.end(), [](unsigned char c) {
        return std::isdigit(c);
      }))
    return -1;
  return std::stoi(tail);
}

struct ColumnLayout
{
  std::vector<int> history_cols;
  std::vector<int> history_lags;
  std::vector<int> x_cols;
};

ColumnLayout classify_columns(const Table& raw,
                              const std::set<std::string>& required)
{
  if (raw.names.size() != raw.columns.size())
    throw InputError("column names and data disagree");
  const std::size_t n = raw.rows();
  for (const auto& col : raw.columns) {
    if (col.size() != n)
      throw InputError("mismatched column lengths");
  }
  for (const auto& name : required) {
    if (raw.find(name) < 0)
      throw InputError("missing column '" + name + "'");
  }
  std::set<std::string> seen;
  ColumnLayout layout;
  for (std::size_t k = 0; k < raw.names.size(); ++k) {
    const std::string& name = raw.names[k];
    if (!seen.insert(name).second)
      throw InputError("duplicate column '" + name + "'");
    if (required.count(name))
      continue;
    if (int lag = numbered_suffix(name, "d_lag"); lag >= 1) {
      layout.history_cols.push_back(static_cast<int>(k));
      layout.history_lags.push_back(lag);
    } else if (numbered_suffix(name, "x") >= 0) {
      layout.x_cols.push_back(static_cast<int>(k));
    } else {
      throw InputError("unexpected column '" + name + "'");
    }
  }
  return layout;
}

void require_finite(const std::vector<double>& v, const std::string& what)
{
  for (double value : v) {
    if (!std::isfinite(value))
      throw InputError("non-finite " + what);
  }
}

void require_nonnegative(const std::vector<double>& v, const std::string& what)
{
  for (double value : v) {
    if (value < 0.0)
      throw InputError("negative " + what);
  }
}

Eigen::MatrixXd gather(const Table& raw,
                       const std::vector<int>& cols,
                       const std::vector<std::size_t>& rows)
{
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& col = raw.columns[cols[c]];
    for (std::size_t r = 0; r < rows.size(); ++r)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
        col[rows[r]];
  }
  return out;
}

Eigen::VectorXd gather(const std::vector<double>& col,
                       const std::vector<std::size_t>& rows)
{
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    out[static_cast<Eigen::Index>(r)] = col[rows[r]];
  return out;
}

void check_common(const Table& raw, const ColumnLayout& layout)
{
  for (int c : layout.history_cols) {
    require_finite(raw.columns[c], "dose history");
    require_nonnegative(raw.columns[c], "dose history");
  }
  for (int c : layout.x_cols)
    require_finite(raw.columns[c], "covariate");
}

} // namespace

RepeatedCrossSectionSample validate_rcs(const Table& raw,
                                        const std::optional<EstimandSpec>& estimand)
{
  const auto layout = classify_columns(raw, { "y", "d", "t" });
  const auto& y = raw.columns[raw.find("y")];
  const auto& d = raw.columns[raw.find("d")];
  const auto& t = raw.columns[raw.find("t")];
  require_finite(y, "outcome");
  require_finite(d, "dose");
  require_finite(t, "period");
  require_nonnegative(d, "dose");
  check_common(raw, layout);
  for (double value : t) {
    if (value != std::round(value) || std::abs(value) > 1e9)
      throw InputError("period labels must be integers");
  }

  std::vector<std::size_t> rows;
  if (estimand) {
    const int post = estimand->t;
    const int pre = estimand->t - estimand->lag - 1;
    bool has_post = false;
    bool has_pre = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const int label = static_cast<int>(t[i]);
      if (label == post || label == pre) {
        rows.push_back(i);
        has_post = has_post || label == post;
        has_pre = has_pre || label == pre;
      }
    }
    if (!has_post || !has_pre)
      throw InputError("needs two periods: data must contain periods " +
                       std::to_string(pre) + " and " + std::to_string(post));
  } else {
    std::set<int> labels;
    for (std::size_t i = 0; i < t.size(); ++i) {
      rows.push_back(i);
      labels.insert(static_cast<int>(t[i]));
    }
    if (labels.size() < 2)
      throw InputError("needs two periods");
  }

  RepeatedCrossSectionSample s;
  s.y = gather(y, rows);
  s.d = gather(d, rows);
  s.history = gather(raw, layout.history_cols, rows);
  s.x = gather(raw, layout.x_cols, rows);
  s.history_lags = layout.history_lags;
  s.period.reserve(rows.size());
  for (std::size_t r : rows)
    s.period.push_back(static_cast<int>(t[r]));
  return s;
}

PanelSample validate_panel(const Table& raw)
{
  const auto layout = classify_columns(raw, { "y_pre", "y_post", "d" });
  const auto& y_pre = raw.columns[raw.find("y_pre")];
  const auto& y_post = raw.columns[raw.find("y_post")];
  const auto& d = raw.columns[raw.find("d")];
  require_finite(y_pre, "outcome");
  require_finite(y_post, "outcome");
  require_finite(d, "dose");
  require_nonnegative(d, "dose");
  check_common(raw, layout);

  std::vector<std::size_t> rows(raw.rows());
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i] = i;
  PanelSample s;
  s.y_pre = gather(y_pre, rows);
  s.y_post = gather(y_post, rows);
  s.d = gather(d, rows);
  s.history = gather(raw, layout.history_cols, rows);
  s.x = gather(raw, layout.x_cols, rows);
  s.history_lags = layout.history_lags;
  return s;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v)
{
  return { v.data(), v.data() + v.size() };
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j)
{
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out[static_cast<std::size_t>(i)] = m(i, j);
  return out;
}

void append_history_and_x(Table& table,
                          const Eigen::MatrixXd& history,
                          const std::vector<int>& lags,
                          const Eigen::MatrixXd& x)
{
  for (Eigen::Index k = 0; k < history.cols(); ++k)
    table.add("d_lag" + std::to_string(lags[static_cast<std::size_t>(k)]),
              column(history, k));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    table.add("x" + std::to_string(j + 1), column(x, j));
}

void check_history_leak(const std::vector<int>& lags, int lag)
{
  for (int l : lags) {
    if (l <= lag)
      throw InputError("history leaks post-treatment doses (column d_lag" +
                       std::to_string(l) + " with lag " + std::to_string(lag) +
                       ")");
  }
}

std::vector<int> shift_lags(std::vector<int> lags, int lag)
{
  for (int& l : lags)
    l -= lag;
  return lags;
}

} // namespace

Table to_table(const RepeatedCrossSectionSample& s)
{
  Table table;
  table.add("y", to_std(s.y));
  table.add("d", to_std(s.d));
  std::vector<double> t(s.period.begin(), s.period.end());
  table.add("t", std::move(t));
  append_history_and_x(table, s.history, s.history_lags, s.x);
  return table;
}

Table to_table(const PanelSample& s)
{
  Table table;
  table.add("y_pre", to_std(s.y_pre));
  table.add("y_post", to_std(s.y_post));
  table.add("d", to_std(s.d));
  append_history_and_x(table, s.history, s.history_lags, s.x);
  return table;
}

std::pair<RepeatedCrossSectionSample, EstimandSpec> relabel_lagged(
  const RepeatedCrossSectionSample& sample,
  const EstimandSpec& estimand)
{
  if (estimand.lag < 0)
    throw InputError("lag must be nonnegative");
  if (estimand.lag == 0)
    return { sample, estimand };
  check_history_leak(sample.history_lags, estimand.lag);

  const int post = estimand.t;
  const int pre = estimand.t - estimand.lag - 1;
  std::vector<std::size_t> rows;
  bool has_post = false;
  bool has_pre = false;
  for (std::size_t i = 0; i < sample.period.size(); ++i) {
    const int label = sample.period[i];
    if (label == post || label == pre) {
      rows.push_back(i);
      has_post = has_post || label == post;
      has_pre = has_pre || label == pre;
    }
  }
  if (!has_post)
    throw InputError("required period " + std::to_string(post) + " absent");
  if (!has_pre)
    throw InputError("required period " + std::to_string(pre) + " absent");

  RepeatedCrossSectionSample out;
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.y.resize(m);
  out.d.resize(m);
  out.history.resize(m, sample.history.cols());
  out.x.resize(m, sample.x.cols());
  out.period.resize(rows.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto i = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
    out.y[r] = sample.y[i];
    out.d[r] = sample.d[i];
    out.history.row(r) = sample.history.row(i);
    out.x.row(r) = sample.x.row(i);
    out.period[static_cast<std::size_t>(r)] =
      sample.period[static_cast<std::size_t>(i)] == post ? post : post - 1;
  }
  out.history_lags = shift_lags(sample.history_lags, estimand.lag);

  EstimandSpec relabeled = estimand;
  relabeled.lag = 0;
  return { std::move(out), relabeled };
}

std::pair<PanelSample, EstimandSpec> relabel_lagged(const PanelSample& sample,
                                                    const EstimandSpec& estimand)
{
  if (estimand.lag < 0)
    throw InputError("lag must be nonnegative");
  if (estimand.lag == 0)
    return { sample, estimand };
  check_history_leak(sample.history_lags, estimand.lag);
  PanelSample out = sample;
  out.history_lags = shift_lags(sample.history_lags, estimand.lag);
  EstimandSpec relabeled = estimand;
  relabeled.lag = 0;
  return { std::move(out), relabeled };
}

Eigen::MatrixXd nuisance_features(const Eigen::MatrixXd& history,
                                  const Eigen::MatrixXd& x)
{
  Eigen::MatrixXd out(x.rows(), history.cols() + x.cols());
  if (history.cols() > 0)
    out.leftCols(history.cols()) = history;
  if (x.cols() > 0)
    out.rightCols(x.cols()) = x;
  return out;
}

} // namespace didcont
