#pragma once

// JSON run configuration for `dgsm-lab analyze`.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/models.hpp"
#include "dgsmlab/sampling.hpp"

namespace dgsmlab::cli {

enum class OutputFormat { Csv, Json };

std::optional<OutputFormat> parse_format(std::string_view s);

struct ModelSpec {
  std::string name;  // flood-overflow, flood-cost, morris, linear, interaction, external
  std::vector<double> coefficients;       // linear
  std::uint64_t coeff_seed = MorrisFunction::kDefaultSeed;
  double denominator_offset = MorrisFunction::kDefaultOffset;
  std::string command;                    // external
  std::filesystem::path workdir;          // external; relative to the config file
  std::optional<std::size_t> dimension;   // external (else taken from inputs)
};

struct RunConfig {
  ModelSpec model;
  std::optional<InputSpace> inputs;  // empty: the model's standard input space
  std::size_t n_sobol = 10000;
  std::size_t n_dgsm = 10000;
  std::size_t replicates = 20;
  std::uint64_t seed = 12345;
  std::optional<GradientMethod> gradient;  // empty: auto
  Generator sobol_sampler = Generator::MonteCarlo;
  Generator dgsm_sampler = Generator::SobolSequence;
  bool skip_first_point = true;
  ConstantPolicy constant_policy = ConstantPolicy::PreferSharp;
  std::optional<std::size_t> workers;
  std::optional<std::filesystem::path> output_dir;
  std::optional<OutputFormat> format;
};

// Both throw ConfigError with a message naming the offending key.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Builds a marginal from a family name and named parameters, e.g.
// ("weibull", {k: 2, lambda: 0.5}). Unknown families or keys throw ConfigError.
Marginal make_marginal(std::string_view family, const std::map<std::string, double>& params);

struct ResolvedModel {
  ModelPtr model;
  InputSpace space;
};
// Instantiates the model; checks that input count matches its dimension.
ResolvedModel resolve(const RunConfig& config);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dgsmlab::cli
