#pragma once

// Per-input sensitivity tables: ranking, screening and serialization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/estimators.hpp"

namespace dgsmlab {

struct InputRecord {
  std::string name;
  std::string distribution;
  ReplicateSummary first_order;  // S_j over replicates
  ReplicateSummary total;        // ST_j over replicates
  double nu = 0.0;
  double nu_standard_error = 0.0;
  std::optional<double> tau;
  PoincareConstant constant;
  double upsilon = 0.0;
  double upsilon_standard_error = 0.0;

  // Upsilon above one bounds nothing an index does not already satisfy.
  bool uninformative_bound() const noexcept { return upsilon > 1.0; }
};

struct SensitivityReport {
  std::string model;
  double variance = 0.0;  // D used in upsilon
  std::size_t n_sobol = 0;
  std::size_t n_dgsm = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::string sobol_sampler;
  std::string dgsm_sampler;
  std::string gradient;
  std::string constant_policy;
  std::string timestamp;  // ISO-8601 UTC; empty when not stamped
  std::vector<InputRecord> inputs;
};

// Re-checks upsilon = C nu / D for every record (relative 1e-12); throws
// DomainError on mismatch.
void check_consistency(const SensitivityReport& report);

enum class RankKey { FirstOrder, Total, Nu, Upsilon };

std::string_view to_string(RankKey key);

// Input indices in descending order of `key`; ties keep input order.
std::vector<std::size_t> rank(const SensitivityReport& report, RankKey key);
std::vector<std::string> ranked_names(const SensitivityReport& report, RankKey key);

inline constexpr double kDefaultScreeningThreshold = 0.02;

struct Screening {
  std::vector<std::size_t> influential;
  std::vector<std::size_t> negligible;     // upsilon < threshold
  std::vector<std::size_t> uninformative;  // influential with upsilon > 1
};

// Input j is negligible iff upsilon_j < threshold (> 0).
Screening screen(const SensitivityReport& report, double threshold = kDefaultScreeningThreshold);

// Spearman correlation between two rankings (orderings of the same indices).
// Throws DomainError when the index sets differ.
double ranking_agreement(std::span<const std::size_t> rank_a, std::span<const std::size_t> rank_b);

// CSV columns: input,S,S_sd,ST,ST_sd,nu,tau,C,upsilon; 6 significant digits;
// empty tau when not computed.
std::string to_csv(const SensitivityReport& report);
// Nested JSON with metadata; doubles round-trip exactly.
std::string to_json(const SensitivityReport& report);
SensitivityReport report_from_json(std::string_view text);

// Fixed-width text table for terminals.
std::string render_table(const SensitivityReport& report);

}  // namespace dgsmlab
