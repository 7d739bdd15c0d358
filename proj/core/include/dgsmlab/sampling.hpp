#pragma once

// Point sets in [0,1)^d and the pick-freeze design built from them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/matrix.hpp"

namespace dgsmlab {

enum class Generator { MonteCarlo, LatinHypercube, SobolSequence };

std::string_view to_string(Generator generator);

// Digital shift: every coordinate of the Sobol' integer point is XORed with a
// seeded random word. Keeps the net structure, makes replicates independent.
enum class QmcRandomization { None, DigitalShift };

struct SamplingOptions {
  bool skip_first_point = true;  // Sobol' only: drop the origin.
  QmcRandomization randomization = QmcRandomization::None;
};

struct UnitSample {
  Matrix points;  // n x d, entries in [0, 1)
  Generator generator = Generator::MonteCarlo;
  std::uint64_t seed = 0;
};

// Largest dimension of the embedded Joe-Kuo direction-number table.
inline constexpr std::size_t kSobolMaxDimension = 256;

// Gray-code Sobol' generator on 32-bit integers.
class SobolEngine {
 public:
  explicit SobolEngine(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  // Writes the next integer point; the first call yields the origin.
  void next(std::span<std::uint32_t> out);

 private:
  std::size_t dimension_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> directions_;  // dimension x 32
  std::vector<std::uint32_t> state_;
};

// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
inline double to_unit(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

UnitSample generate_unit(Generator generator, std::size_t n, std::size_t d, std::uint64_t seed,
                         const SamplingOptions& options = {});

// Inverse-CDF transform column by column; u is clamped to [1e-12, 1 - 1e-12].
Matrix transform(const UnitSample& u, const InputSpace& space);
Matrix transform(const Matrix& u, const InputSpace& space);

struct PickFreezeDesign {
  Matrix a;
  Matrix b;
  std::vector<Matrix> ab;  // ab[j]: a with column j taken from b

  std::size_t rows() const noexcept { return a.rows(); }
  std::size_t dimension() const noexcept { return a.cols(); }
  // n (d + 2)
  std::size_t evaluation_count() const noexcept { return rows() * (dimension() + 2); }
};

PickFreezeDesign pick_freeze(const UnitSample& ua, const UnitSample& ub, const InputSpace& space);
// Same construction on already-transformed matrices.
PickFreezeDesign pick_freeze(Matrix a, Matrix b);

// Replicate r draws A from seed_base + 2r and B from seed_base + 2r + 1.
struct ReplicateSeeds {
  std::size_t replicate;
  std::uint64_t a;
  std::uint64_t b;
};
ReplicateSeeds replicate_seeds(std::uint64_t seed_base, std::size_t replicate);

struct UnitPair {
  UnitSample a;
  UnitSample b;
};

// Unit samples for one pick-freeze replicate. Monte Carlo and LHS use the two
// replicate seeds independently. Sobol' draws one 2d-dimensional sequence and
// splits it (A = first d coordinates, B = last d); a digital shift seeded from
// the replicate's A seed is applied when `total_replicates` > 1.
UnitPair replicate_unit_pair(Generator generator, std::size_t n, std::size_t d,
                             std::uint64_t seed_base, std::size_t replicate,
                             std::size_t total_replicates, bool skip_first_point = true);

}  // namespace dgsmlab
