#include "didcont/report.hpp"
#include "didcont/errors.hpp"

namespace didcont {

using nlohmann::json;

std::vector<std::string> group_labels(Design design)
{
  if (design == Design::panel)
    return { "(d_t)", "(d'_t)" };
  return { "(d_t, t)", "(d_t, t-1)", "(d'_t, t)", "(d'_t, t-1)" };
}

namespace {

json optional_real(const std::optional<double>& v)
{
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key)
{
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<double>();
}

} // namespace

json to_json(const RunReport& r)
{
  json j;
  j["schema_version"] = r.schema_version;
  j["design"] = to_string(r.design);
  j["n"] = r.n;
  j["estimand"] = { { "d_treat", r.estimand.d_treat },
                    { "d_control", r.estimand.d_control },
                    { "t", r.estimand.t },
                    { "lag", r.estimand.lag } };
  j["config"] = { { "folds", r.config.folds },
                  { "kernel", to_string(r.config.kernel) },
                  { "bandwidth", optional_real(r.config.bandwidth) },
                  { "undersmooth_factor", r.config.undersmooth_factor },
                  { "trim_threshold", r.config.trim_threshold },
                  { "ps_family", to_string(r.config.ps_family) },
                  { "lasso_cv_folds", r.config.lasso_cv_folds },
                  { "seed", r.config.seed } };
  j["inference"] = { { "alpha", r.inference.alpha },
                     { "bootstrap", r.inference.bootstrap } };
  const AtetEstimate& e = r.estimate;
  j["estimate"] = { { "delta_hat", e.delta_hat },
                    { "se", e.se },
                    { "ci_low", e.ci_low },
                    { "ci_high", e.ci_high },
                    { "boot_ci_low", optional_real(e.boot_ci_low) },
                    { "boot_ci_high", optional_real(e.boot_ci_high) },
                    { "h_used", e.h_used },
                    { "n_effective", e.n_effective } };
  j["trimmed"] = json::array();
  for (std::size_t g = 0; g < e.n_trimmed_per_group.size(); ++g)
    j["trimmed"].push_back(
      { { "group", g < r.group_labels.size() ? r.group_labels[g] : std::to_string(g) },
        { "count", e.n_trimmed_per_group[g] } });
  if (r.duration_seconds)
    j["duration_seconds"] = *r.duration_seconds;
  return j;
}

RunReport report_from_json(const json& j)
{
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != report_schema_version)
      throw InputError("unsupported report schema version " +
                       std::to_string(r.schema_version));
    r.design = parse_design(j.at("design").get<std::string>());
    r.n = j.at("n").get<Eigen::Index>();

    const json& es = j.at("estimand");
    r.estimand.d_treat = es.at("d_treat").get<double>();
    r.estimand.d_control = es.at("d_control").get<double>();
    r.estimand.t = es.at("t").get<int>();
    r.estimand.lag = es.at("lag").get<int>();

    const json& c = j.at("config");
    r.config.folds = c.at("folds").get<int>();
    r.config.kernel = parse_kernel_family(c.at("kernel").get<std::string>());
    r.config.bandwidth = read_optional(c, "bandwidth");
    r.config.undersmooth_factor = c.at("undersmooth_factor").get<double>();
    r.config.trim_threshold = c.at("trim_threshold").get<double>();
    r.config.ps_family = parse_density_family(c.at("ps_family").get<std::string>());
    r.config.lasso_cv_folds = c.at("lasso_cv_folds").get<int>();
    r.config.seed = c.at("seed").get<std::uint64_t>();

    r.inference.alpha = j.at("inference").at("alpha").get<double>();
    r.inference.bootstrap = j.at("inference").at("bootstrap").get<int>();

    const json& e = j.at("estimate");
    r.estimate.delta_hat = e.at("delta_hat").get<double>();
    r.estimate.se = e.at("se").get<double>();
    r.estimate.ci_low = e.at("ci_low").get<double>();
    r.estimate.ci_high = e.at("ci_high").get<double>();
    r.estimate.boot_ci_low = read_optional(e, "boot_ci_low");
    r.estimate.boot_ci_high = read_optional(e, "boot_ci_high");
    r.estimate.h_used = e.at("h_used").get<double>();
    r.estimate.n_effective = e.at("n_effective").get<int>();
    for (const json& t : j.at("trimmed")) {
      r.group_labels.push_back(t.at("group").get<std::string>());
      r.estimate.n_trimmed_per_group.push_back(t.at("count").get<int>());
    }
    r.duration_seconds = read_optional(j, "duration_seconds");
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

bool RunReport::operator==(const RunReport& o) const
{
  const auto& a = estimate;
  const auto& b = o.estimate;
  return schema_version == o.schema_version && design == o.design && n == o.n &&
         estimand == o.estimand && config.folds == o.config.folds &&
         config.kernel == o.config.kernel && config.bandwidth == o.config.bandwidth &&
         config.undersmooth_factor == o.config.undersmooth_factor &&
         config.trim_threshold == o.config.trim_threshold &&
         config.ps_family == o.config.ps_family &&
         config.lasso_cv_folds == o.config.lasso_cv_folds &&
         config.seed == o.config.seed && inference.alpha == o.inference.alpha &&
         inference.bootstrap == o.inference.bootstrap &&
         a.delta_hat == b.delta_hat && a.se == b.se && a.ci_low == b.ci_low &&
         a.ci_high == b.ci_high && a.boot_ci_low == b.boot_ci_low &&
         a.boot_ci_high == b.boot_ci_high && a.h_used == b.h_used &&
         a.n_effective == b.n_effective &&
         a.n_trimmed_per_group == b.n_trimmed_per_group &&
         group_labels == o.group_labels && duration_seconds == o.duration_seconds;
}

} // namespace didcont
