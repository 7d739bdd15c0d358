#pragma once

#include <array>
#include <cstdint>

namespace dgsmlab::detail {

struct SobolPolynomial {
  std::uint32_t degree;
  std::uint32_t coefficients;  // interior coefficients a, Joe-Kuo convention
  std::array<std::uint32_t, 16> initial;  // m_1 .. m_degree
};

// Rows for dimensions 2 .. kSobolMaxDimension; dimension 1 is the van der
// Corput sequence and has no entry.
extern const SobolPolynomial kSobolPolynomials[255];

}  // namespace dgsmlab::detail
