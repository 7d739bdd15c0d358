#include "cli.hpp"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "dgsmlab/error.hpp"
#include "dgsmlab/pipeline.hpp"
#include "dgsmlab/report.hpp"
#include "dgsmlab/reproduce.hpp"

namespace dgsmlab::cli {

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string output;
  std::string format;
};

// A failure that already knows its exit code.
struct Failure {
  int code;
  std::string kind;
  std::string message;
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void status_ok(std::ostream& err, const std::string& detail) {
  err << "status: ok" << (detail.empty() ? "" : " " + detail) << "\n";
}

int status_fail(std::ostream& err, const Failure& f) {
  err << "status: error code=" << f.code << " kind=" << f.kind << " message=\""
      << one_line(f.message) << "\"\n";
  return f.code;
}

std::size_t resolve_workers(const GlobalFlags& flags, std::optional<std::size_t> from_config) {
  if (flags.workers) {
    if (*flags.workers == 0) throw Failure{kConfigError, "config", "--workers must be >= 1"};
    return *flags.workers;
  }
  if (const char* env = std::getenv("DGSM_LAB_WORKERS"); env && *env) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != std::string(env).size() || v == 0) {
      throw Failure{kConfigError, "config", "DGSM_LAB_WORKERS must be a positive integer"};
    }
    return static_cast<std::size_t>(v);
  }
  if (from_config) return *from_config;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes the report to <dir>/<stem>.<ext>, or to `out` when dir is empty.
std::string emit(const SensitivityReport& report, OutputFormat format,
                 const std::filesystem::path& dir, const std::string& stem, std::ostream& out) {
  const std::string body = format == OutputFormat::Csv ? to_csv(report) : to_json(report);
  if (dir.empty()) {
    out << body;
    return "-";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));
  std::ofstream file(path, std::ios::binary);
  file << body;
  file.close();
  if (!file) throw Failure{kConfigError, "io", "cannot write '" + path.string() + "'"};
  return path.string();
}

OutputFormat resolve_format(const GlobalFlags& flags, std::optional<OutputFormat> from_config) {
  if (!flags.format.empty()) {
    const auto f = parse_format(flags.format);
    if (!f) throw Failure{kConfigError, "config", "--format must be csv or json"};
    return *f;
  }
  return from_config.value_or(OutputFormat::Csv);
}

// Maps library exceptions raised while running a model to exit codes.
template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Failure&) {
    throw;
  } catch (const ConfigError& e) {
    throw Failure{kConfigError, "config", e.what()};
  } catch (const CapacityError& e) {
    throw Failure{kCapacityError, "capacity", e.what()};
  } catch (const UnsupportedMeasureError& e) {
    throw Failure{kCapacityError, "unsupported_measure", e.what()};
  } catch (const EvaluationError& e) {
    std::string msg = e.what();
    if (!e.diagnostics().empty()) msg += " | stderr: " + e.diagnostics();
    throw Failure{kEvaluationError, "evaluation", msg};
  } catch (const DegenerateModelError& e) {
    throw Failure{kEvaluationError, "degenerate_model", e.what()};
  } catch (const Error& e) {
    throw Failure{kEvaluationError, "evaluation", e.what()};
  }
}

int cmd_analyze(const GlobalFlags& flags, const std::string& positional_config, std::ostream& out,
                std::ostream& err) {
  const std::string path = !positional_config.empty() ? positional_config : flags.config;
  if (path.empty()) throw Failure{kConfigError, "config", "analyze needs --config PATH"};

  RunConfig cfg;
  ResolvedModel resolved;
  try {
    cfg = load_config(path);
    resolved = resolve(cfg);
  } catch (const ConfigError& e) {
    throw Failure{kConfigError, "config", e.what()};
  } catch (const Error& e) {
    throw Failure{kConfigError, "config", e.what()};
  }

  AnalysisPlan plan;
  plan.model = resolved.model;
  plan.space = resolved.space;
  plan.n_sobol = cfg.n_sobol;
  plan.n_dgsm = cfg.n_dgsm;
  plan.replicates = cfg.replicates;
  plan.seed = flags.seed.value_or(cfg.seed);
  plan.sobol_sampler = cfg.sobol_sampler;
  plan.dgsm_sampler = cfg.dgsm_sampler;
  plan.gradient = cfg.gradient;
  plan.constant_policy = cfg.constant_policy;
  plan.skip_first_point = cfg.skip_first_point;
  plan.workers = resolve_workers(flags, cfg.workers);
  const OutputFormat format = resolve_format(flags, cfg.format);
  const std::filesystem::path dir =
      !flags.output.empty() ? std::filesystem::path(flags.output) : cfg.output_dir.value_or("");

  SensitivityReport report = guarded([&] { return run_analysis(plan); });
  report.timestamp = utc_timestamp();
  const std::string where = emit(report, format, dir, report.model, out);
  status_ok(err, "command=analyze model=" + report.model + " output=" + where);
  return kOk;
}

int cmd_cheeger(const std::string& family, const std::vector<std::string>& params, bool numeric,
                bool analytic, bool both, double tol, std::ostream& out, std::ostream& err) {
  std::map<std::string, double> values;
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Failure{kConfigError, "config", "parameter '" + kv + "' is not key=value"};
    }
    try {
      std::size_t pos = 0;
      const std::string v = kv.substr(eq + 1);
      values[kv.substr(0, eq)] = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw Failure{kConfigError, "config", "parameter '" + kv + "' has a non-numeric value"};
    }
  }
  if (!(tol > 0.0)) throw Failure{kConfigError, "config", "--tol must be positive"};
  Marginal m = [&] {
    try {
      return make_marginal(family, values);
    } catch (const ConfigError& e) {
      throw Failure{kConfigError, "config", e.what()};
    }
  }();

  std::ostringstream body;
  body.precision(10);
  body << "distribution: " << describe(m) << "\n";
  const bool policy_line = both || (!numeric && !analytic);
  guarded([&] {
    if (policy_line) {
      const PoincareConstant pc = poincare_constant(m, ConstantPolicy::PreferSharp);
      body << "constant (prefer_sharp): C1=" << pc.c1 << " C=" << pc.c
           << " method=" << to_string(pc.method) << "\n";
    }
    if (analytic || both) {
      if (const auto c1 = cheeger_analytic(m)) {
        body << "analytic cheeger: C1=" << *c1 << " C=" << 4.0 * *c1 * *c1 << "\n";
      } else if (!both) {
        throw UnsupportedMeasureError("no tabulated Cheeger constant for " +
                                      std::string(family_name(m)));
      } else {
        body << "analytic cheeger: none tabulated\n";
      }
    }
    if (numeric || both) {
      const CheegerSearch s = cheeger_search(m, tol);
      body << "numeric cheeger: C1=" << s.c1 << " C=" << 4.0 * s.c1 * s.c1
           << " at x=" << s.location << "\n";
    }
    return 0;
  });
  out << body.str();
  status_ok(err, "command=cheeger family=" + std::string(family_name(m)));
  return kOk;
}

int cmd_bench(const GlobalFlags& flags, const std::string& id, double budget,
              std::size_t replicates, std::ostream& out, std::ostream& err) {
  const auto table = parse_table(id);
  if (!table) {
    throw Failure{kConfigError, "config",
                  "unknown table '" + id + "' (expected morris, flood-overflow or flood-cost)"};
  }
  if (!(budget > 0.0)) throw Failure{kConfigError, "config", "--budget must be positive"};
  if (replicates < 1) throw Failure{kConfigError, "config", "--replicates must be >= 1"};
  ReproductionBudget b;
  b.budget = budget;
  b.replicates = replicates;
  if (flags.seed) b.seed = *flags.seed;
  b.workers = resolve_workers(flags, std::nullopt);
  const TableReproduction result = guarded([&] { return reproduce_table(*table, b); });
  out << result.render();
  if (!flags.output.empty()) {
    emit(result.report, resolve_format(flags, std::nullopt), flags.output, std::string(id), out);
  }
  std::size_t failed = 0;
  for (const auto& c : result.checks) failed += c.passed ? 0 : 1;
  if (failed > 0) {
    err << "status: fail code=" << kBenchFailed << " command=bench table=" << id
        << " failed_checks=" << failed << "/" << result.checks.size() << "\n";
    return kBenchFailed;
  }
  status_ok(err, "command=bench table=" + id + " checks=" + std::to_string(result.checks.size()));
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sobol' indices, DGSM and Poincare-constant bounds for global sensitivity analysis",
               "dgsm-lab"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--seed", flags.seed, "Base seed (overrides the config)");
  app.add_option("--workers", flags.workers,
                 "Parallel model-evaluation workers (env DGSM_LAB_WORKERS; default: processors)");
  app.add_option("--output", flags.output, "Directory for report files (default: stdout)");
  app.add_option("--format", flags.format, "Report format: csv or json");

  auto* analyze = app.add_subcommand("analyze", "Run the full Sobol' + DGSM pipeline");
  std::string config_positional;
  analyze->add_option("config", config_positional, "JSON run configuration");

  auto* cheeger = app.add_subcommand("cheeger", "Cheeger and Poincare constants of a marginal");
  std::string family;
  std::vector<std::string> params;
  bool numeric = false, analytic = false, both = false;
  double tol = 1e-10;
  cheeger->add_option("family", family, "Distribution family, e.g. weibull")->required();
  cheeger->add_option("params", params, "Parameters as key=value, e.g. k=2 lambda=0.5");
  auto* o_num = cheeger->add_flag("--numeric", numeric, "Numeric supremum only");
  auto* o_ana = cheeger->add_flag("--analytic", analytic, "Tabulated closed form only");
  auto* o_both = cheeger->add_flag("--both", both, "Sharp constant, closed form and numeric");
  o_num->excludes(o_ana)->excludes(o_both);
  o_ana->excludes(o_both);
  cheeger->add_option("--tol", tol, "Relative tolerance of the numeric search");

  auto* bench = app.add_subcommand("bench", "Reproduce a published table and check tolerances");
  std::string table_id;
  double budget = 1.0;
  std::size_t replicates = 20;
  bench->add_option("table", table_id, "morris, flood-overflow or flood-cost")->required();
  bench->add_option("--budget", budget, "Sample-size factor; below 1 uses desk tolerances");
  bench->add_option("--replicates", replicates, "Pick-freeze replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    status_ok(err, "command=help");
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    status_ok(err, "command=help");
    return kOk;
  } catch (const CLI::ParseError& e) {
    return status_fail(err, {kConfigError, "usage", e.what()});
  }

  try {
    if (analyze->parsed()) return cmd_analyze(flags, config_positional, out, err);
    if (cheeger->parsed()) {
      return cmd_cheeger(family, params, numeric, analytic, both, tol, out, err);
    }
    if (bench->parsed()) return cmd_bench(flags, table_id, budget, replicates, out, err);
    return status_fail(err, {kConfigError, "usage", "no subcommand"});
  } catch (const Failure& f) {
    return status_fail(err, f);
  } catch (const std::exception& e) {
    return status_fail(err, {kEvaluationError, "internal", e.what()});
  }
}

}  // namespace dgsmlab::cli
