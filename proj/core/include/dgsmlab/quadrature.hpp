#pragma once

#include <cstddef>
#include <vector>

namespace dgsmlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [0, 1]; weights sum to 1. Exact for
// polynomials of degree <= 2n - 1. Nodes are strictly interior.
QuadratureRule gauss_legendre_unit(std::size_t n);

}  // namespace dgsmlab
