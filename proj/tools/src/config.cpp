#include "config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dgsmlab/error.hpp"
#include "dgsmlab/external_model.hpp"
#include "json.hpp"

namespace dgsmlab::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": '" + key + "' is missing or has the wrong type");
  }
}

std::size_t positive_count(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ConfigError("'" + key + "' must be an integer >= 1");
  }
  return v.get<std::size_t>();
}

Generator parse_generator(const std::string& s, const std::string& key) {
  if (s == "monte_carlo" || s == "mc") return Generator::MonteCarlo;
  if (s == "latin_hypercube" || s == "lhs") return Generator::LatinHypercube;
  if (s == "sobol") return Generator::SobolSequence;
  throw ConfigError("'" + key + "': unknown sampler '" + s + "'");
}

GradientMethod parse_gradient(const json& g) {
  std::string method;
  double rel = 1e-4, floor = 1e-8;
  if (g.is_string()) {
    method = g.get<std::string>();
  } else if (g.is_object()) {
    reject_unknown(g, {"method", "relative_step", "absolute_floor"}, "gradient");
    method = get<std::string>(g, "method", "gradient");
    if (g.contains("relative_step")) rel = get<double>(g, "relative_step", "gradient");
    if (g.contains("absolute_floor")) floor = get<double>(g, "absolute_floor", "gradient");
    if (!(rel > 0.0) || !(floor > 0.0)) {
      throw ConfigError("gradient: relative_step and absolute_floor must be positive");
    }
  } else {
    throw ConfigError("'gradient' must be a string or an object");
  }
  if (method == "analytic") return GradientMethod::analytic();
  if (method == "forward") return GradientMethod::forward(rel, floor);
  if (method == "central") return GradientMethod::central(rel, floor);
  throw ConfigError("gradient: unknown method '" + method + "'");
}

ModelSpec parse_model(const json& m, const std::filesystem::path& base_dir) {
  ModelSpec spec;
  if (m.is_string()) {
    spec.name = m.get<std::string>();
  } else if (m.is_object()) {
    reject_unknown(m,
                   {"name", "coefficients", "coeff_seed", "denominator_offset", "command",
                    "workdir", "dimension"},
                   "model");
    spec.name = get<std::string>(m, "name", "model");
    if (m.contains("coefficients")) {
      spec.coefficients = get<std::vector<double>>(m, "coefficients", "model");
    }
    if (m.contains("coeff_seed")) spec.coeff_seed = get<std::uint64_t>(m, "coeff_seed", "model");
    if (m.contains("denominator_offset")) {
      spec.denominator_offset = get<double>(m, "denominator_offset", "model");
    }
    if (m.contains("command")) spec.command = get<std::string>(m, "command", "model");
    if (m.contains("workdir")) spec.workdir = get<std::string>(m, "workdir", "model");
    if (m.contains("dimension")) spec.dimension = positive_count(m, "dimension");
  } else {
    throw ConfigError("'model' must be a string or an object");
  }
  static const std::set<std::string> names = {"flood-overflow", "flood-cost", "morris",
                                              "linear",         "interaction", "external"};
  if (!names.contains(spec.name)) throw ConfigError("model: unknown model '" + spec.name + "'");
  if (spec.name == "linear" && spec.coefficients.empty()) {
    throw ConfigError("model: linear needs a nonempty 'coefficients' array");
  }
  if (spec.name == "external") {
    if (spec.command.empty()) throw ConfigError("model: external needs 'command'");
    if (spec.workdir.empty()) spec.workdir = base_dir.empty() ? "." : base_dir;
    else if (spec.workdir.is_relative() && !base_dir.empty()) spec.workdir = base_dir / spec.workdir;
  }
  return spec;
}

Marginal parse_marginal_json(const json& m, std::size_t index) {
  const std::string where = "inputs[" + std::to_string(index) + "]";
  if (!m.is_object()) throw ConfigError(where + " must be an object");
  const std::string family = get<std::string>(m, "family", where);
  std::map<std::string, double> params;
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (it.key() == "family" || it.key() == "name") continue;
    if (!it.value().is_number()) {
      throw ConfigError(where + ": parameter '" + it.key() + "' must be a number");
    }
    params[it.key()] = it.value().get<double>();
  }
  try {
    return make_marginal(family, params);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  return std::nullopt;
}

Marginal make_marginal(std::string_view family, const std::map<std::string, double>& params) {
  std::set<std::string> used;
  const auto p = [&](const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) {
      throw ConfigError(std::string(family) + ": missing parameter '" + key + "'");
    }
    used.insert(key);
    return it->second;
  };
  const auto opt = [&](const std::string& key, double fallback) {
    return params.contains(key) ? p(key) : fallback;
  };
  const auto build = [&]() -> Marginal {
    if (family == "uniform") return Uniform(p("a"), p("b"));
    if (family == "normal") return Normal(p("mu"), p("sigma"));
    if (family == "truncated_normal") {
      return TruncatedNormal(p("mu"), p("sigma"), p("lo"),
                             opt("hi", std::numeric_limits<double>::infinity()));
    }
    if (family == "exponential") return Exponential(p("lambda"));
    if (family == "beta") return Beta(p("alpha"), p("beta"));
    if (family == "gamma") return GammaDist(p("alpha"), p("beta"));
    if (family == "gumbel") return Gumbel(p("mu"), p("beta"));
    if (family == "truncated_gumbel") return TruncatedGumbel(p("mu"), p("beta"), p("lo"), p("hi"));
    if (family == "weibull") return Weibull(p("k"), p("lambda"));
    if (family == "triangular") return Triangular(p("a"), p("c"), p("b"));
    throw ConfigError("unknown distribution family '" + std::string(family) + "'");
  };
  Marginal m = [&] {
    try {
      return build();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();
  for (const auto& [key, value] : params) {
    if (!used.contains(key)) {
      throw ConfigError(std::string(family) + ": unknown parameter '" + key + "'");
    }
  }
  return m;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(doc,
                 {"model", "inputs", "n_sobol", "n_dgsm", "replicates", "seed", "gradient",
                  "sampler", "dgsm_sampler", "skip_first_point", "constant_policy", "workers",
                  "output", "format"},
                 "config");
  if (!doc.contains("model")) throw ConfigError("config: 'model' is required");

  RunConfig cfg;
  cfg.model = parse_model(doc.at("model"), base_dir);
  if (doc.contains("inputs")) {
    const auto& arr = doc.at("inputs");
    if (!arr.is_array() || arr.empty()) throw ConfigError("'inputs' must be a nonempty array");
    std::vector<std::string> names;
    std::vector<Marginal> marginals;
    for (std::size_t j = 0; j < arr.size(); ++j) {
      marginals.push_back(parse_marginal_json(arr[j], j));
      names.push_back(arr[j].contains("name")
                          ? get<std::string>(arr[j], "name", "inputs[" + std::to_string(j) + "]")
                          : "X" + std::to_string(j + 1));
    }
    cfg.inputs = InputSpace(std::move(names), std::move(marginals));
  }
  if (doc.contains("n_sobol")) {
    cfg.n_sobol = positive_count(doc, "n_sobol");
    if (cfg.n_sobol < 2) throw ConfigError("'n_sobol' must be at least 2");
  }
  if (doc.contains("n_dgsm")) cfg.n_dgsm = positive_count(doc, "n_dgsm");
  if (doc.contains("replicates")) cfg.replicates = positive_count(doc, "replicates");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be an unsigned integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("gradient")) {
    const auto& g = doc.at("gradient");
    if (!(g.is_string() && g.get<std::string>() == "auto")) cfg.gradient = parse_gradient(g);
  }
  if (doc.contains("sampler")) {
    cfg.sobol_sampler = parse_generator(get<std::string>(doc, "sampler", "config"), "sampler");
  }
  if (doc.contains("dgsm_sampler")) {
    cfg.dgsm_sampler =
        parse_generator(get<std::string>(doc, "dgsm_sampler", "config"), "dgsm_sampler");
  }
  if (doc.contains("skip_first_point")) {
    cfg.skip_first_point = get<bool>(doc, "skip_first_point", "config");
  }
  if (doc.contains("constant_policy")) {
    const auto p = get<std::string>(doc, "constant_policy", "config");
    if (p == "prefer_sharp") cfg.constant_policy = ConstantPolicy::PreferSharp;
    else if (p == "cheeger_only") cfg.constant_policy = ConstantPolicy::CheegerOnly;
    else throw ConfigError("'constant_policy' must be prefer_sharp or cheeger_only");
  }
  if (doc.contains("workers")) cfg.workers = positive_count(doc, "workers");
  if (doc.contains("output")) {
    std::filesystem::path dir = get<std::string>(doc, "output", "config");
    if (dir.is_relative() && !base_dir.empty()) dir = base_dir / dir;
    cfg.output_dir = dir;
  }
  if (doc.contains("format")) {
    cfg.format = parse_format(get<std::string>(doc, "format", "config"));
    if (!cfg.format) throw ConfigError("'format' must be csv or json");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

ResolvedModel resolve(const RunConfig& config) {
  const ModelSpec& m = config.model;
  ResolvedModel out;
  InputSpace standard;
  if (m.name == "flood-overflow") {
    out.model = flood_overflow();
    standard = flood_input_space();
  } else if (m.name == "flood-cost") {
    out.model = flood_cost();
    standard = flood_input_space();
  } else if (m.name == "morris") {
    try {
      out.model = morris_function(m.coeff_seed, m.denominator_offset);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
    standard = morris_input_space();
  } else if (m.name == "linear") {
    out.model = linear_model(m.coefficients);
    standard = unit_cube(m.coefficients.size());
  } else if (m.name == "interaction") {
    out.model = interaction_model();
    standard = unit_cube(2);
  } else {
    const std::size_t d = m.dimension ? *m.dimension
                          : config.inputs ? config.inputs->dimension()
                                          : 0;
    if (d == 0) throw ConfigError("model: external needs 'dimension' or an 'inputs' list");
    out.model = external_model(m.command, m.workdir, d);
    standard = unit_cube(d);
  }
  out.space = config.inputs ? *config.inputs : standard;
  if (out.space.dimension() != out.model->dimension()) {
    throw ConfigError("model '" + out.model->name() + "' takes " +
                      std::to_string(out.model->dimension()) + " inputs but " +
                      std::to_string(out.space.dimension()) + " are configured");
  }
  return out;
}

}  // namespace dgsmlab::cli
