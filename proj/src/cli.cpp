#include "didcont/cli.hpp"
#include "didcont/errors.hpp"
#include "didcont/io.hpp"
#include "didcont/pipeline.hpp"
#include "didcont/report.hpp"
#include "didcont/rng.hpp"
#include "didcont/simulation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace didcont {

namespace {

struct EstimateArgs
{
  std::string data;
  std::string design;
  double d = 0.0;
  double dprime = 0.0;
  int t = 1;
  int lag = 0;
  std::optional<double> bandwidth;
  double undersmooth = 1.0;
  std::string kernel = "epanechnikov";
  int folds = 3;
  double trim = 0.1;
  std::string ps_model = "linear";
  int bootstrap = 0;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::string out = "table";
  bool timing = false;
};

struct SimulateArgs
{
  std::string design;
  long n = 0;
  long p = 100;
  int reps = 0;
  std::vector<std::string> methods;
  std::uint64_t seed = 1;
  std::string out = "table";
  std::string emit_data;
  int bootstrap = 0;
  int folds = 3;
  std::string panel_noise = "per-period";
};

std::string interval(double lo, double hi)
{
  std::ostringstream s;
  s << std::setprecision(6) << "[" << lo << ", " << hi << "]";
  return s.str();
}

constexpr int label_width = 22;

void print_estimate_table(std::ostream& out, const RunReport& r)
{
  const AtetEstimate& e = r.estimate;
  const int level = static_cast<int>(std::lround(100.0 * (1.0 - r.inference.alpha)));
  std::ostringstream s;
  s << std::setprecision(6);
  s << std::left;
  s << std::setw(label_width) << "design" << to_string(r.design) << "\n";
  s << std::setw(label_width) << "n" << r.n << "\n";
  s << std::setw(label_width) << "estimand" << "d=" << r.estimand.d_treat
    << " vs d'=" << r.estimand.d_control << ", t=" << r.estimand.t
    << ", lag=" << r.estimand.lag << "\n";
  s << std::setw(label_width) << "bandwidth" << e.h_used << "\n";
  s << std::setw(label_width) << "delta_hat" << e.delta_hat << "\n";
  s << std::setw(label_width) << "se" << e.se << "\n";
  s << std::setw(label_width) << ("ci " + std::to_string(level) + "%")
    << interval(e.ci_low, e.ci_high) << "\n";
  if (e.boot_ci_low)
    s << std::setw(label_width) << ("boot ci " + std::to_string(level) + "%")
      << interval(*e.boot_ci_low, *e.boot_ci_high) << "\n";
  s << std::setw(label_width) << "used rows" << e.n_effective << "\n";
  for (std::size_t g = 0; g < e.n_trimmed_per_group.size(); ++g)
    s << std::setw(label_width) << ("trimmed " + r.group_labels[g])
      << e.n_trimmed_per_group[g] << "\n";
  if (r.duration_seconds)
    s << std::setw(label_width) << "seconds" << *r.duration_seconds << "\n";
  out << s.str();
}

void print_estimate_csv(std::ostream& out, const RunReport& r)
{
  const AtetEstimate& e = r.estimate;
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  out << "design,n,d,dprime,t,lag,delta_hat,se,ci_low,ci_high,boot_ci_low,"
         "boot_ci_high,h_used,n_effective\n";
  out << to_string(r.design) << ',' << r.n << ',' << format_real(r.estimand.d_treat)
      << ',' << format_real(r.estimand.d_control) << ',' << r.estimand.t << ','
      << r.estimand.lag << ',' << format_real(e.delta_hat) << ','
      << format_real(e.se) << ',' << format_real(e.ci_low) << ','
      << format_real(e.ci_high) << ',' << opt(e.boot_ci_low) << ','
      << opt(e.boot_ci_high) << ',' << format_real(e.h_used) << ','
      << e.n_effective << '\n';
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out)
{
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.design = parse_design(a.design);
  r.estimand = { a.d, a.dprime, a.t, a.lag };
  r.config.folds = a.folds;
  r.config.kernel = parse_kernel_family(a.kernel);
  r.config.bandwidth = a.bandwidth;
  r.config.undersmooth_factor = a.undersmooth;
  r.config.trim_threshold = a.trim;
  r.config.ps_family = parse_density_family(a.ps_model);
  r.config.seed = a.seed;
  r.inference = { a.alpha, a.bootstrap };
  r.group_labels = group_labels(r.design);
  r.config.validate();
  if (r.estimand.d_treat <= 0.0)
    throw InputError("--d must be positive");
  if (r.estimand.d_control < 0.0)
    throw InputError("--dprime must be non-negative");
  if (r.estimand.lag < 0)
    throw InputError("--lag must be non-negative");

  const Table table = read_csv(a.data);
  if (r.design == Design::panel) {
    const PanelSample s = validate_panel(table);
    r.n = s.n();
    r.estimate = run_estimation(s, r.estimand, r.config, r.inference);
  } else {
    const RepeatedCrossSectionSample s = validate_rcs(table, r.estimand);
    r.n = s.n();
    r.estimate = run_estimation(s, r.estimand, r.config, r.inference);
  }
  if (a.timing)
    r.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (a.out == "json")
    out << to_json(r).dump() << "\n";
  else if (a.out == "csv")
    print_estimate_csv(out, r);
  else
    print_estimate_table(out, r);
  return exit_ok;
}

nlohmann::json row_json(const McSummaryRow& row, const SimulateArgs& a)
{
  nlohmann::json j{ { "schema_version", report_schema_version },
                    { "design", to_string(row.design) },
                    { "method", row.method },
                    { "n", row.n },
                    { "p", a.p },
                    { "reps", row.reps },
                    { "failures", row.failures },
                    { "seed", a.seed },
                    { "bias", row.bias },
                    { "std", row.std },
                    { "rmse", row.rmse },
                    { "avse", row.avse },
                    { "cover", row.cover } };
  j["boot_cover"] = row.boot_cover ? nlohmann::json(*row.boot_cover) : nlohmann::json(nullptr);
  return j;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
  const Design design = parse_design(a.design);
  if (a.reps < 2)
    throw InputError("reps >= 2 required");
  if (a.n < 1 || a.p < 1)
    throw InputError("--n and --p must be positive");
  std::vector<std::string> methods = a.methods;
  if (methods.empty())
    methods = { "lasso" };
  for (const auto& m : methods)
    method_spec(m);

  const PanelNoise noise =
    a.panel_noise == "per-unit" ? PanelNoise::per_unit : PanelNoise::per_period;
  if (!a.emit_data.empty()) {
    // the dataset of replication 0
    const std::uint64_t data_seed = derive_seed(a.seed, { 0, 0 });
    write_csv_file(a.emit_data,
                   design == Design::panel ? to_table(gen_panel_dgp(a.n, a.p, data_seed, noise))
                                           : to_table(gen_rcs_dgp(a.n, a.p, data_seed)));
  }

  EstimationConfig base;
  base.folds = a.folds;
  McOptions options;
  options.bootstrap = a.bootstrap;
  options.panel_noise = noise;
  std::vector<McSummaryRow> rows;
  for (const auto& m : methods)
    rows.push_back(monte_carlo(design, a.n, a.p, a.reps, m, base, a.seed, options));

  if (a.out == "json") {
    for (const auto& row : rows)
      out << row_json(row, a).dump() << "\n";
  } else if (a.out == "csv") {
    out << "design,method,n,reps,failures,bias,std,rmse,avse,cover,boot_cover\n";
    for (const auto& row : rows)
      out << to_string(row.design) << ',' << row.method << ',' << row.n << ','
          << row.reps << ',' << row.failures << ',' << format_real(row.bias) << ','
          << format_real(row.std) << ',' << format_real(row.rmse) << ','
          << format_real(row.avse) << ',' << format_real(row.cover) << ','
          << (row.boot_cover ? format_real(*row.boot_cover) : "") << '\n';
  } else {
    std::ostringstream s;
    s << std::left << std::setw(7) << "design" << std::setw(10) << "method"
      << std::right << std::setw(7) << "n" << std::setw(6) << "reps" << std::setw(6)
      << "fail" << std::setw(9) << "bias" << std::setw(9) << "std" << std::setw(9)
      << "rmse" << std::setw(9) << "avse" << std::setw(9) << "cover";
    if (a.bootstrap > 0)
      s << std::setw(9) << "bcover";
    s << "\n" << std::fixed << std::setprecision(3);
    for (const auto& row : rows) {
      s << std::left << std::setw(7) << to_string(row.design) << std::setw(10)
        << row.method << std::right << std::setw(7) << row.n << std::setw(6)
        << row.reps << std::setw(6) << row.failures << std::setw(9) << row.bias
        << std::setw(9) << row.std << std::setw(9) << row.rmse << std::setw(9)
        << row.avse << std::setw(9) << row.cover;
      if (row.boot_cover)
        s << std::setw(9) << *row.boot_cover;
      s << "\n";
    }
    out << s.str();
  }
  return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Continuous-dose difference-in-differences ATET estimation", "didcont" };
  app.require_subcommand(1);

  EstimateArgs ea;
  CLI::App* est = app.add_subcommand("estimate", "Estimate an ATET from a CSV file");
  est->add_option("--data", ea.data, "Input CSV")->required();
  est->add_option("--design", ea.design, "rcs or panel")
    ->required()
    ->check(CLI::IsMember({ "rcs", "panel" }));
  est->add_option("--d", ea.d, "Treatment dose d")->required();
  est->add_option("--dprime", ea.dprime, "Control dose d'")->required();
  est->add_option("--t", ea.t, "Outcome period label")->capture_default_str();
  est->add_option("--lag", ea.lag, "Lag s between dose and outcome")->capture_default_str();
  est->add_option("--bandwidth", ea.bandwidth, "Kernel bandwidth (default: rule of thumb)");
  est->add_option("--undersmooth", ea.undersmooth, "Divides the rule-of-thumb bandwidth")
    ->capture_default_str();
  est->add_option("--kernel", ea.kernel, "epanechnikov or gaussian")
    ->capture_default_str()
    ->check(CLI::IsMember({ "epanechnikov", "gaussian" }));
  est->add_option("--folds", ea.folds, "Cross-fitting folds")->capture_default_str();
  est->add_option("--trim", ea.trim, "Trimming threshold on normalized weights")
    ->capture_default_str();
  est->add_option("--ps-model", ea.ps_model, "linear or loglinear dose density")
    ->capture_default_str()
    ->check(CLI::IsMember({ "linear", "loglinear" }));
  est->add_option("--bootstrap", ea.bootstrap, "Multiplier bootstrap replications (0 = off)")
    ->capture_default_str();
  est->add_option("--alpha", ea.alpha, "1 - confidence level")->capture_default_str();
  est->add_option("--seed", ea.seed, "Random seed")->capture_default_str();
  est->add_option("--out", ea.out, "table, json or csv")
    ->capture_default_str()
    ->check(CLI::IsMember({ "table", "json", "csv" }));
  est->add_flag("--timing", ea.timing, "Report wall-clock duration");

  SimulateArgs sa;
  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo study on the built-in designs");
  sim->add_option("--design", sa.design, "rcs or panel")
    ->required()
    ->check(CLI::IsMember({ "rcs", "panel" }));
  sim->add_option("--n", sa.n, "Sample size")->required();
  sim->add_option("--p", sa.p, "Number of covariates")->capture_default_str();
  sim->add_option("--reps", sa.reps, "Replications")->required();
  sim->add_option("--method", sa.methods, "lasso, lnorm, under, ln_under (repeatable)")
    ->check(CLI::IsMember(method_labels()));
  sim->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  sim->add_option("--out", sa.out, "table, json or csv")
    ->capture_default_str()
    ->check(CLI::IsMember({ "table", "json", "csv" }));
  sim->add_option("--emit-data", sa.emit_data, "Write the first replication's data as CSV");
  sim->add_option("--bootstrap", sa.bootstrap, "Bootstrap replications per run (0 = off)")
    ->capture_default_str();
  sim->add_option("--folds", sa.folds, "Cross-fitting folds")->capture_default_str();
  sim->add_option("--panel-noise", sa.panel_noise, "Panel outcome error W: per-period or per-unit")
    ->capture_default_str()
    ->check(CLI::IsMember({ "per-period", "per-unit" }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = est->parsed() ? est : sim->parsed() ? sim : &app;
    err << failed->help();
    return exit_input_error;
  }

  try {
    return est->parsed() ? cmd_estimate(ea, out) : cmd_simulate(sa, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << "\n";
    return exit_estimation_error;
  }
}

} // namespace didcont
