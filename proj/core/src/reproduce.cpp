#include "dgsmlab/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "dgsmlab/error.hpp"
#include "dgsmlab/pipeline.hpp"

namespace dgsmlab {

namespace {

const std::vector<ReferenceRow> kMorris = {
    {"X1", 0.043, 0.173, 2043.820, 0.101, 0.209},  {"X2", 0.007, 0.029, 2856.580, 0.01, 0.029},
    {"X3", 0.066, 0.165, 31653.270, 0.250, 7.981}, {"X4", 0.002, 0.134, 2025.950, 0.333, 0.680},
    {"X5", 0.035, 0.055, 4203.060, 0.360, 1.526},  {"X6", 0.039, 0.114, 1337.100, 0.101, 0.137},
    {"X7", 0.068, 0.069, 6605.960, 0.101, 0.675},  {"X8", 0.156, 0.157, 1826.390, 0.101, 0.187},
    {"X9", 0.189, 0.192, 2249.770, 0.101, 0.230},  {"X10", 0.145, 0.146, 1730.400, 0.101, 0.177},
    {"X11", 0.000, 0.002, 22.630, 0.101, 0.002},   {"X12", 0.000, 0.000, 23.940, 0.01, 0.000},
    {"X13", 0.000, 0.001, 17.670, 0.250, 0.004},   {"X14", 0.001, 0.003, 42.850, 0.333, 0.014},
    {"X15", 0.000, 0.001, 19.870, 0.360, 0.007},   {"X16", 0.000, 0.002, 18.860, 0.101, 0.002},
    {"X17", 0.000, 0.002, 21.400, 0.101, 0.002},   {"X18", 0.000, 0.002, 19.950, 0.101, 0.002},
    {"X19", 0.000, 0.004, 54.380, 0.101, 0.006},   {"X20", 0.000, 0.004, 42.250, 0.101, 0.004},
};

const std::vector<ReferenceRow> kFloodOverflow = {
    {"Q", 0.343, 0.353, 1.296e-06, 0.0, 2.807},  {"Ks", 0.130, 0.139, 3.286e-03, 0.0, 0.198},
    {"Zv", 0.185, 0.186, 1.123e+00, 0.0, 0.561}, {"Zm", 0.003, 0.003, 2.279e-02, 0.0, 0.011},
    {"Hd", 0.276, 0.276, 8.389e-01, 0.0, 0.340}, {"Cb", 0.036, 0.036, 8.389e-01, 0.0, 0.105},
    {"L", 0.000, 0.000, 2.147e-08, 0.0, 0.000},  {"B", 0.000, 0.000, 2.386e-05, 0.0, 0.000},
};

const std::vector<ReferenceRow> kFloodCost = {
    {"Q", 0.346, 0.460, 1.3906e-06, 0.0, 3.011e+00}, {"Ks", 0.172, 0.269, 8.5307e-03, 0.0, 5.129e-01},
    {"Zv", 0.187, 0.229, 1.3891e+00, 0.0, 6.932e-01}, {"Zm", 0.006, 0.012, 4.6038e-02, 0.0, 2.29e-02},
    {"Hd", 0.118, 0.179, 1.5366e+00, 0.0, 6.227e-01}, {"Cb", 0.026, 0.039, 9.4628e-01, 0.0, 1.180e-01},
    {"L", 0.000, 0.000, 4.0276e-08, 0.0, 2.009e-06},  {"B", 0.001, 0.001, 4.4788e-05, 0.0, 5.587e-04},
};

std::size_t scaled(double budget, std::size_t full) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(budget * static_cast<double>(full))));
}

ReferenceCheck absolute(std::string name, double observed, double reference, double tol) {
  ReferenceCheck c{std::move(name), observed, reference, tol, false, {}};
  c.passed = std::abs(observed - reference) <= tol;
  return c;
}

ReferenceCheck relative(std::string name, double observed, double reference, double tol) {
  ReferenceCheck c{std::move(name), observed, reference, tol, false, "relative"};
  c.passed = std::abs(observed - reference) <= tol * std::abs(reference);
  return c;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return out;
}

ReferenceCheck top4(const SensitivityReport& report) {
  auto ranked = ranked_names(report, RankKey::Upsilon);
  ranked.resize(std::min<std::size_t>(4, ranked.size()));
  const std::set<std::string> got(ranked.begin(), ranked.end());
  const std::set<std::string> want = {"Q", "Zv", "Hd", "Ks"};
  ReferenceCheck c{"upsilon top-4 = {Q,Zv,Hd,Ks}", 0.0, 0.0, 0.0, got == want, join(ranked)};
  c.observed = c.passed ? 1.0 : 0.0;
  c.reference = 1.0;
  return c;
}

double standard_error_of_mean(const ReplicateSummary& s) {
  return s.replicates > 0 ? s.sd / std::sqrt(static_cast<double>(s.replicates)) : 0.0;
}

std::vector<ReferenceCheck> morris_checks(const SensitivityReport& report) {
  std::vector<ReferenceCheck> checks;
  const auto& ref = kMorris;
  // Constants are compared truncated to the three printed decimals.
  for (std::size_t j = 0; j < 5; ++j) {
    const auto& r = report.inputs[j];
    const double truncated = std::floor(r.constant.c * 1000.0 + 1e-9) / 1000.0;
    ReferenceCheck c{"C " + r.name, r.constant.c, ref[j].c, 0.0,
                     std::abs(truncated - ref[j].c) < 1e-12, "truncated to 3 decimals"};
    checks.push_back(c);
  }
  bool small_upsilon = true, small_total = true;
  double max_upsilon = 0.0, max_total = 0.0;
  for (std::size_t j = 10; j < 20; ++j) {
    max_upsilon = std::max(max_upsilon, report.inputs[j].upsilon);
    max_total = std::max(max_total, report.inputs[j].total.mean);
  }
  small_upsilon = max_upsilon < 0.02;
  small_total = max_total < 0.01;
  checks.push_back({"max upsilon X11-X20 < 0.02", max_upsilon, 0.02, 0.0, small_upsilon, ""});
  checks.push_back({"max ST X11-X20 < 0.01", max_total, 0.01, 0.0, small_total, ""});

  std::size_t influential = 0;
  for (std::size_t j = 0; j < 10; ++j) influential += report.inputs[j].total.mean > 0.02 ? 1 : 0;
  checks.push_back({"#{X1-X10 with ST > 0.02} >= 8", static_cast<double>(influential), 8.0, 0.0,
                    influential >= 8, ""});

  // Bound holds up to three combined standard errors.
  double worst = -1e300;
  std::string worst_name;
  bool bound = true;
  for (const auto& r : report.inputs) {
    const double se = std::hypot(r.upsilon_standard_error, standard_error_of_mean(r.total));
    const double margin = r.total.mean - r.upsilon - 3.0 * se;
    if (margin > worst) {
      worst = margin;
      worst_name = r.name;
    }
    bound = bound && margin <= 0.0;
  }
  checks.push_back({"ST <= upsilon + 3 se (all inputs)", worst, 0.0, 0.0, bound,
                    "largest ST - upsilon - 3se at " + worst_name});

  const double u35 = std::max(report.inputs[2].upsilon, report.inputs[4].upsilon);
  checks.push_back({"upsilon > 1 for X3 or X5", u35, 1.0, 0.0, u35 > 1.0, "uninformative bound"});
  return checks;
}

std::vector<ReferenceCheck> flood_overflow_checks(const SensitivityReport& report, bool desk) {
  const double tol = desk ? 0.05 : 0.02;
  const double nu_tol = desk ? 0.15 : 0.05;
  std::vector<ReferenceCheck> checks;
  for (std::size_t j = 0; j < kFloodOverflow.size(); ++j) {
    const auto& r = report.inputs[j];
    checks.push_back(absolute("S " + r.name, r.first_order.mean, kFloodOverflow[j].s, tol));
    checks.push_back(absolute("ST " + r.name, r.total.mean, kFloodOverflow[j].st, tol));
  }
  // The tabulated nu column is nu / D.
  for (std::size_t j : {0u, 1u, 2u, 4u}) {
    const auto& r = report.inputs[j];
    checks.push_back(
        relative("nu/D " + r.name, r.nu / report.variance, kFloodOverflow[j].nu, nu_tol));
  }
  checks.push_back(top4(report));
  return checks;
}

std::vector<ReferenceCheck> flood_cost_checks(const SensitivityReport& report, bool desk) {
  const auto& in = report.inputs;
  std::vector<ReferenceCheck> checks;
  checks.push_back(absolute("S Q", in[0].first_order.mean, kFloodCost[0].s, desk ? 0.05 : 0.02));
  checks.push_back(absolute("ST Q", in[0].total.mean, kFloodCost[0].st, desk ? 0.05 : 0.03));
  checks.push_back(absolute("ST Ks", in[1].total.mean, kFloodCost[1].st, desk ? 0.05 : 0.03));
  checks.push_back(top4(report));
  return checks;
}

}  // namespace

std::string_view to_string(PublishedTable table) {
  switch (table) {
    case PublishedTable::Morris:
      return "morris";
    case PublishedTable::FloodOverflow:
      return "flood-overflow";
    case PublishedTable::FloodCost:
      return "flood-cost";
  }
  return "unknown";
}

std::optional<PublishedTable> parse_table(std::string_view id) {
  for (auto t : {PublishedTable::Morris, PublishedTable::FloodOverflow, PublishedTable::FloodCost}) {
    if (id == to_string(t)) return t;
  }
  return std::nullopt;
}

const std::vector<ReferenceRow>& reference_rows(PublishedTable table) {
  switch (table) {
    case PublishedTable::Morris:
      return kMorris;
    case PublishedTable::FloodOverflow:
      return kFloodOverflow;
    case PublishedTable::FloodCost:
      return kFloodCost;
  }
  return kMorris;
}

bool TableReproduction::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string TableReproduction::render() const {
  std::ostringstream os;
  char line[256];
  const auto& ref = reference_rows(table);
  os << "table " << to_string(table) << "\n";
  std::snprintf(line, sizeof line, "model %s   D = %.6g   n_sobol = %zu x %zu   n_dgsm = %zu\n",
                report.model.c_str(), report.variance, report.n_sobol, report.replicates,
                report.n_dgsm);
  os << line;
  std::snprintf(line, sizeof line, "%-6s %8s %8s %8s %8s %12s %12s %10s %10s\n", "input", "S",
                "S_ref", "ST", "ST_ref", table == PublishedTable::Morris ? "nu" : "nu/D",
                "nu_ref", "upsilon", "ups_ref");
  os << line;
  for (std::size_t j = 0; j < report.inputs.size() && j < ref.size(); ++j) {
    const auto& r = report.inputs[j];
    const double nu = table == PublishedTable::Morris ? r.nu : r.nu / report.variance;
    std::snprintf(line, sizeof line, "%-6s %8.3f %8.3f %8.3f %8.3f %12.4e %12.4e %10.3f %10.3f\n",
                  r.name.c_str(), r.first_order.mean, ref[j].s, r.total.mean, ref[j].st, nu,
                  ref[j].nu, r.upsilon, ref[j].upsilon);
    os << line;
  }
  if (table == PublishedTable::Morris) {
    os << "(Morris references other than C come from unseeded random coefficients: "
          "qualitative only)\n";
  }
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%s  %-36s observed %.6g  reference %.6g", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.observed, c.reference);
    os << line;
    if (c.tolerance > 0.0) {
      std::snprintf(line, sizeof line, "  tol %s%.3g", c.detail == "relative" ? "rel " : "+-",
                    c.tolerance);
      os << line;
    } else if (!c.detail.empty()) {
      os << "  (" << c.detail << ")";
    }
    os << "\n";
  }
  os << (passed() ? "result: PASS" : "result: FAIL") << "\n";
  return os.str();
}

TableReproduction reproduce_table(PublishedTable table, const ReproductionBudget& budget) {
  if (!(budget.budget > 0.0)) throw DomainError("reproduce_table: budget must be positive");
  AnalysisPlan plan;
  plan.replicates = budget.replicates;
  plan.seed = budget.seed;
  plan.workers = budget.workers;
  plan.n_dgsm = 10000;
  const bool desk = budget.budget < 1.0;
  switch (table) {
    case PublishedTable::Morris:
      plan.model = morris_function();
      plan.space = morris_input_space();
      plan.n_sobol = scaled(budget.budget, 10000);
      plan.dgsm_sampler = Generator::MonteCarlo;
      plan.gradient = GradientMethod::forward();
      break;
    case PublishedTable::FloodOverflow:
      plan.model = flood_overflow();
      plan.space = flood_input_space();
      plan.n_sobol = scaled(budget.budget, 100000);
      break;
    case PublishedTable::FloodCost:
      plan.model = flood_cost();
      plan.space = flood_input_space();
      plan.n_sobol = scaled(budget.budget, 100000);
      break;
  }
  TableReproduction out{table, run_analysis(plan), {}};
  switch (table) {
    case PublishedTable::Morris:
      out.checks = morris_checks(out.report);
      break;
    case PublishedTable::FloodOverflow:
      out.checks = flood_overflow_checks(out.report, desk);
      break;
    case PublishedTable::FloodCost:
      out.checks = flood_cost_checks(out.report, desk);
      break;
  }
  return out;
}

}  // namespace dgsmlab
