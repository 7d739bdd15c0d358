#pragma once

// Sample estimators of variance-based (Sobol') and derivative-based (DGSM)
// sensitivity measures, and the DGSM upper bound on total indices.
//
// All reductions run sequentially in row order, so results are identical for
// any worker count used to produce the evaluations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/matrix.hpp"
#include "dgsmlab/sampling.hpp"

namespace dgsmlab {

// Point estimate with its Monte Carlo standard error (sd of the per-row
// terms over sqrt(n), divided by the same normalization as the estimate).
struct IndexEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct SobolEstimate {
  double variance = 0.0;
  std::size_t n = 0;
  std::vector<IndexEstimate> first_order;
  std::vector<IndexEstimate> total;
};

struct DgsmEstimate {
  double variance = 0.0;  // D used to normalize upsilon
  std::size_t n = 0;
  std::vector<IndexEstimate> nu;
  std::vector<std::optional<double>> tau;
  std::vector<PoincareConstant> constants;
  std::vector<IndexEstimate> upsilon;  // C nu / D, error C se(nu) / D
};

struct ReplicateSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t replicates = 0;
  // Set when sd carries no information: a single replicate, or a
  // deterministic estimation that returned identical values.
  bool sd_unavailable = false;
};

// Unbiased variance of the 2n pooled outputs (divisor 2n - 1).
double estimate_variance(std::span<const double> ya, std::span<const double> yb);

// First-order index, Sobol' product form centred on the pooled mean:
//   S_j = (1/n) sum_i (yB_i - f0) (yABj_i - yA_i) / D.
IndexEstimate first_order_sobol(std::span<const double> ya, std::span<const double> yb,
                                std::span<const double> yab_j, double variance);

// Total index, Jansen form: ST_j = (1/(2n)) sum_i (yA_i - yABj_i)^2 / D.
IndexEstimate total_sobol(std::span<const double> ya, std::span<const double> yab_j,
                          double variance);

// Variance plus every first-order and total index of a pick-freeze run.
SobolEstimate estimate_sobol(std::span<const double> ya, std::span<const double> yb,
                             const std::vector<std::vector<double>>& yab);

// nu_j = (1/n) sum_i (df/dx_j)^2 over the rows of an n x d gradient matrix.
std::vector<IndexEstimate> dgsm_nu(const Matrix& gradients);

using WeightFunction = std::function<double(double)>;

// w(x) = (1 - 3x + 3x^2) / 6. For functions linear in each Uniform[0,1]
// input, the weighted measure equals the total-effect variance.
double uniform_total_effect_weight(double x);

// tau_j = (1/n) sum_i (df/dx_j)^2 w(x_ij), evaluated at the unscaled inputs.
std::vector<double> dgsm_tau(const Matrix& gradients, const Matrix& points,
                             const WeightFunction& weight = uniform_total_effect_weight);

// C nu / D; throws DegenerateModelError when D is not positive.
double upsilon(double nu, const PoincareConstant& constant, double variance);

// Runs `estimate` once per replicate with the sampling module's seed policy
// and summarizes every returned index by mean and sample standard deviation.
// All replicates must return the same number of values.
std::vector<ReplicateSummary> replicate(
    const std::function<std::vector<double>(const ReplicateSeeds&)>& estimate,
    std::size_t replicates, std::uint64_t seed_base);

ReplicateSummary summarize(std::span<const double> values);

}  // namespace dgsmlab
