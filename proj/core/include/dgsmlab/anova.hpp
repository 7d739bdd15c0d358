#pragma once

// Deterministic reference values by tensorized Gauss-Legendre quadrature in
// probability space (x_j = quantile_j(p), p in (0,1)). Used as an oracle for
// the sampling estimators on low-dimensional problems.

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/estimators.hpp"
#include "dgsmlab/models.hpp"

namespace dgsmlab {

struct AnovaComponent {
  unsigned mask = 0;           // bit j set when input j belongs to the subset
  double variance = 0.0;       // D_u
  double total_variance = 0.0; // D_u^tot = sum over supersets v of D_v
  double first_order = 0.0;    // S_u
  double total = 0.0;          // S_Tu
};

struct AnovaDecomposition {
  std::size_t dimension = 0;
  double mean = 0.0;      // f_0
  double variance = 0.0;  // D
  std::vector<AnovaComponent> components;  // every nonempty subset, ordered by mask
  // Largest |E[f_u f_v]| over distinct nonempty u, v, relative to D.
  double max_orthogonality_residual = 0.0;

  const AnovaComponent& component(unsigned mask) const;
  const AnovaComponent& component(std::initializer_list<std::size_t> inputs) const;
};

inline constexpr std::size_t kAnovaMaxDimension = 3;

// Hoeffding components f_u = E[f | x_u] - sum_{v strictly in u} f_v on a
// nodes_per_dim^d grid. Throws CapacityError for d > 3.
AnovaDecomposition anova_oracle(const Model& model, const InputSpace& space,
                                std::size_t nodes_per_dim = 64);

// D_j^tot = 1/2 E[(f(x) - f(x'_j, x_~j))^2] by quadrature on d + 1 axes.
// Throws CapacityError when nodes^(d+1) exceeds 2^25 points.
double total_variance_quadrature(const Model& model, const InputSpace& space, std::size_t input,
                                 std::size_t nodes_per_dim);

struct QuadratureDgsm {
  std::vector<double> nu;
  std::vector<double> tau;
};

// nu_j and tau_j from the analytic gradient on a nodes^d grid (same point cap).
QuadratureDgsm dgsm_quadrature(const Model& model, const InputSpace& space,
                               std::size_t nodes_per_dim,
                               const WeightFunction& weight = uniform_total_effect_weight);

}  // namespace dgsmlab
