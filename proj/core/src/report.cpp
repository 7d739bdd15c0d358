#include "dgsmlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dgsmlab/error.hpp"

namespace dgsmlab {

namespace {

using nlohmann::json;

double key_value(const InputRecord& r, RankKey key) {
  switch (key) {
    case RankKey::FirstOrder:
      return r.first_order.mean;
    case RankKey::Total:
      return r.total.mean;
    case RankKey::Nu:
      return r.nu;
    case RankKey::Upsilon:
      return r.upsilon;
  }
  return 0.0;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ConstantMethod method_from_string(const std::string& s) {
  if (s == "sharp") return ConstantMethod::SharpKnown;
  if (s == "analytic_cheeger") return ConstantMethod::AnalyticCheeger;
  if (s == "numeric_cheeger") return ConstantMethod::NumericCheeger;
  throw DomainError("report: unknown constant method '" + s + "'");
}

json summary_json(const ReplicateSummary& s) {
  return {{"mean", s.mean},
          {"sd", s.sd},
          {"replicates", s.replicates},
          {"sd_unavailable", s.sd_unavailable}};
}

ReplicateSummary summary_from(const json& j) {
  ReplicateSummary s;
  s.mean = j.at("mean").get<double>();
  s.sd = j.at("sd").get<double>();
  s.replicates = j.at("replicates").get<std::size_t>();
  s.sd_unavailable = j.at("sd_unavailable").get<bool>();
  return s;
}

}  // namespace

void check_consistency(const SensitivityReport& report) {
  for (const auto& r : report.inputs) {
    const double expected = r.constant.c * r.nu / report.variance;
    const double scale = std::max(std::abs(expected), std::abs(r.upsilon));
    if (std::abs(expected - r.upsilon) > 1e-12 * scale) {
      throw DomainError("report: upsilon of '" + r.name + "' is not C nu / D");
    }
  }
}

std::string_view to_string(RankKey key) {
  switch (key) {
    case RankKey::FirstOrder:
      return "first_order";
    case RankKey::Total:
      return "total";
    case RankKey::Nu:
      return "nu";
    case RankKey::Upsilon:
      return "upsilon";
  }
  return "unknown";
}

std::vector<std::size_t> rank(const SensitivityReport& report, RankKey key) {
  std::vector<std::size_t> order(report.inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key_value(report.inputs[a], key) > key_value(report.inputs[b], key);
  });
  return order;
}

std::vector<std::string> ranked_names(const SensitivityReport& report, RankKey key) {
  std::vector<std::string> names;
  for (std::size_t j : rank(report, key)) names.push_back(report.inputs[j].name);
  return names;
}

Screening screen(const SensitivityReport& report, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("screen: threshold must be positive");
  Screening s;
  for (std::size_t j = 0; j < report.inputs.size(); ++j) {
    const auto& r = report.inputs[j];
    if (r.upsilon < threshold) {
      s.negligible.push_back(j);
    } else {
      s.influential.push_back(j);
      if (r.uninformative_bound()) s.uninformative.push_back(j);
    }
  }
  return s;
}

double ranking_agreement(std::span<const std::size_t> rank_a, std::span<const std::size_t> rank_b) {
  const std::set<std::size_t> a(rank_a.begin(), rank_a.end());
  const std::set<std::size_t> b(rank_b.begin(), rank_b.end());
  if (a != b || a.size() != rank_a.size() || b.size() != rank_b.size()) {
    throw DomainError("ranking_agreement: rankings must order the same inputs");
  }
  const std::size_t n = rank_a.size();
  if (n < 2) return 1.0;
  // Position of each input in each ranking.
  std::vector<std::size_t> ids(a.begin(), a.end());
  const auto position = [&](std::span<const std::size_t> r, std::size_t id) {
    return static_cast<double>(std::find(r.begin(), r.end(), id) - r.begin());
  };
  double sum_d2 = 0.0;
  for (std::size_t id : ids) {
    const double d = position(rank_a, id) - position(rank_b, id);
    sum_d2 += d * d;
  }
  const double nd = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nd * (nd * nd - 1.0));
}

std::string to_csv(const SensitivityReport& report) {
  std::ostringstream os;
  os << "input,S,S_sd,ST,ST_sd,nu,tau,C,upsilon\n";
  for (const auto& r : report.inputs) {
    os << r.name << ',' << fmt6(r.first_order.mean) << ',' << fmt6(r.first_order.sd) << ','
       << fmt6(r.total.mean) << ',' << fmt6(r.total.sd) << ',' << fmt6(r.nu) << ','
       << (r.tau ? fmt6(*r.tau) : std::string{}) << ',' << fmt6(r.constant.c) << ','
       << fmt6(r.upsilon) << '\n';
  }
  return os.str();
}

std::string to_json(const SensitivityReport& report) {
  json inputs = json::array();
  for (const auto& r : report.inputs) {
    json rec = {{"name", r.name},
                {"distribution", r.distribution},
                {"S", summary_json(r.first_order)},
                {"ST", summary_json(r.total)},
                {"nu", r.nu},
                {"nu_se", r.nu_standard_error},
                {"tau", r.tau ? json(*r.tau) : json(nullptr)},
                {"constant",
                 {{"c1", r.constant.c1},
                  {"c", r.constant.c},
                  {"method", std::string(to_string(r.constant.method))}}},
                {"upsilon", r.upsilon},
                {"upsilon_se", r.upsilon_standard_error},
                {"uninformative_bound", r.uninformative_bound()}};
    inputs.push_back(std::move(rec));
  }
  json doc = {{"model", report.model},
              {"variance", report.variance},
              {"n_sobol", report.n_sobol},
              {"n_dgsm", report.n_dgsm},
              {"replicates", report.replicates},
              {"seed", report.seed},
              {"sobol_sampler", report.sobol_sampler},
              {"dgsm_sampler", report.dgsm_sampler},
              {"gradient", report.gradient},
              {"constant_policy", report.constant_policy},
              {"timestamp", report.timestamp},
              {"inputs", std::move(inputs)}};
  return doc.dump(2) + "\n";
}

SensitivityReport report_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("report: invalid JSON: ") + e.what());
  }
  try {
    SensitivityReport report;
    report.model = doc.at("model").get<std::string>();
    report.variance = doc.at("variance").get<double>();
    report.n_sobol = doc.at("n_sobol").get<std::size_t>();
    report.n_dgsm = doc.at("n_dgsm").get<std::size_t>();
    report.replicates = doc.at("replicates").get<std::size_t>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.sobol_sampler = doc.at("sobol_sampler").get<std::string>();
    report.dgsm_sampler = doc.at("dgsm_sampler").get<std::string>();
    report.gradient = doc.at("gradient").get<std::string>();
    report.constant_policy = doc.at("constant_policy").get<std::string>();
    report.timestamp = doc.at("timestamp").get<std::string>();
    for (const auto& rec : doc.at("inputs")) {
      InputRecord r;
      r.name = rec.at("name").get<std::string>();
      r.distribution = rec.at("distribution").get<std::string>();
      r.first_order = summary_from(rec.at("S"));
      r.total = summary_from(rec.at("ST"));
      r.nu = rec.at("nu").get<double>();
      r.nu_standard_error = rec.at("nu_se").get<double>();
      if (!rec.at("tau").is_null()) r.tau = rec.at("tau").get<double>();
      const auto& c = rec.at("constant");
      r.constant = {c.at("c1").get<double>(), c.at("c").get<double>(),
                    method_from_string(c.at("method").get<std::string>())};
      r.upsilon = rec.at("upsilon").get<double>();
      r.upsilon_standard_error = rec.at("upsilon_se").get<double>();
      report.inputs.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw DomainError(std::string("report: malformed document: ") + e.what());
  }
}

std::string render_table(const SensitivityReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "model %s   D = %.6g   n_sobol = %zu x %zu   n_dgsm = %zu\n",
                report.model.c_str(), report.variance, report.n_sobol, report.replicates,
                report.n_dgsm);
  os << line;
  std::snprintf(line, sizeof line, "%-8s %8s %7s %8s %7s %12s %12s %10s %10s\n", "input", "S",
                "sd", "ST", "sd", "nu", "tau", "C", "upsilon");
  os << line;
  for (const auto& r : report.inputs) {
    std::snprintf(line, sizeof line, "%-8s %8.3f %7.3f %8.3f %7.3f %12.4e %12.4g %10.4g %10.3f%s\n",
                  r.name.c_str(), r.first_order.mean, r.first_order.sd, r.total.mean, r.total.sd,
                  r.nu, r.tau.value_or(std::nan("")), r.constant.c, r.upsilon,
                  r.uninformative_bound() ? "  (bound > 1)" : "");
    os << line;
  }
  return os.str();
}

}  // namespace dgsmlab
