#include "dgsmlab/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dgsmlab/error.hpp"
#include "sobol_directions.hpp"

namespace dgsmlab {

namespace {

constexpr int kSobolBits = 32;
constexpr double kClamp = 1e-12;

// Unbiased integer in [0, bound) by rejection; std::uniform_int_distribution
// is implementation-defined and would break cross-platform reproducibility.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

void check_shape(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw DomainError("sampling: need n >= 1 and d >= 1");
}

Matrix monte_carlo(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix out(n, d);
  for (double& v : out.data()) v = to_unit(rng());
  return out;
}

Matrix latin_hypercube(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix out(n, d);
  std::vector<std::size_t> perm(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[bounded(rng, i)]);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(perm[i]) + to_unit(rng())) * inv_n;
      // Guard the top stratum against rounding up to 1.
      out(i, j) = std::min(u, std::nextafter(1.0, 0.0));
    }
  }
  return out;
}

Matrix sobol(std::size_t n, std::size_t d, std::uint64_t seed, const SamplingOptions& options) {
  SobolEngine engine(d);
  std::vector<std::uint32_t> shift(d, 0u);
  if (options.randomization == QmcRandomization::DigitalShift) {
    std::mt19937_64 rng(seed);
    for (auto& s : shift) s = static_cast<std::uint32_t>(rng() >> 32);
  }
  std::vector<std::uint32_t> point(d);
  if (options.skip_first_point) engine.next(point);
  Matrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    engine.next(point);
    for (std::size_t j = 0; j < d; ++j) {
      out(i, j) = static_cast<double>(point[j] ^ shift[j]) * 0x1.0p-32;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Generator generator) {
  switch (generator) {
    case Generator::MonteCarlo:
      return "monte_carlo";
    case Generator::LatinHypercube:
      return "latin_hypercube";
    case Generator::SobolSequence:
      return "sobol";
  }
  return "unknown";
}

SobolEngine::SobolEngine(std::size_t dimension)
    : dimension_(dimension), directions_(dimension * kSobolBits), state_(dimension, 0u) {
  if (dimension == 0) throw DomainError("sobol: dimension must be positive");
  if (dimension > kSobolMaxDimension) {
    throw CapacityError("sobol: dimension " + std::to_string(dimension) +
                        " exceeds the direction-number table (" +
                        std::to_string(kSobolMaxDimension) + ")");
  }
  for (int k = 0; k < kSobolBits; ++k) directions_[k] = 1u << (31 - k);
  for (std::size_t j = 1; j < dimension; ++j) {
    const auto& poly = detail::kSobolPolynomials[j - 1];
    const int s = static_cast<int>(poly.degree);
    std::uint32_t* v = &directions_[j * kSobolBits];
    for (int k = 0; k < std::min(s, kSobolBits); ++k) v[k] = poly.initial[k] << (31 - k);
    for (int k = s; k < kSobolBits; ++k) {
      v[k] = v[k - s] ^ (v[k - s] >> s);
      for (int l = 1; l < s; ++l) {
        v[k] ^= ((poly.coefficients >> (s - 1 - l)) & 1u) * v[k - l];
      }
    }
  }
}

void SobolEngine::next(std::span<std::uint32_t> out) {
  if (out.size() != dimension_) throw ShapeError("sobol: output span has the wrong dimension");
  if (index_ == 0) {
    std::fill(out.begin(), out.end(), 0u);
    ++index_;
    return;
  }
  if (index_ >= (std::uint64_t{1} << kSobolBits)) {
    throw CapacityError("sobol: sequence exhausted after 2^32 points");
  }
  // Gray code: flip the direction of the lowest zero bit of index - 1.
  const int c = std::countr_one(index_ - 1);
  for (std::size_t j = 0; j < dimension_; ++j) {
    state_[j] ^= directions_[j * kSobolBits + static_cast<std::size_t>(c)];
    out[j] = state_[j];
  }
  ++index_;
}

UnitSample generate_unit(Generator generator, std::size_t n, std::size_t d, std::uint64_t seed,
                         const SamplingOptions& options) {
  check_shape(n, d);
  UnitSample u;
  u.generator = generator;
  u.seed = seed;
  switch (generator) {
    case Generator::MonteCarlo:
      u.points = monte_carlo(n, d, seed);
      break;
    case Generator::LatinHypercube:
      u.points = latin_hypercube(n, d, seed);
      break;
    case Generator::SobolSequence:
      u.points = sobol(n, d, seed, options);
      break;
  }
  return u;
}

Matrix transform(const Matrix& u, const InputSpace& space) {
  if (u.cols() != space.dimension()) {
    throw ShapeError("transform: sample has " + std::to_string(u.cols()) +
                     " columns, input space has " + std::to_string(space.dimension()));
  }
  Matrix x(u.rows(), u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const Marginal& m = space.marginals[j];
    for (std::size_t i = 0; i < u.rows(); ++i) {
      x(i, j) = quantile(m, std::clamp(u(i, j), kClamp, 1.0 - kClamp));
    }
  }
  return x;
}

Matrix transform(const UnitSample& u, const InputSpace& space) {
  return transform(u.points, space);
}

PickFreezeDesign pick_freeze(Matrix a, Matrix b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("pick_freeze: A and B must have the same shape");
  }
  PickFreezeDesign design;
  design.ab.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Matrix hybrid = a;
    for (std::size_t i = 0; i < a.rows(); ++i) hybrid(i, j) = b(i, j);
    design.ab.push_back(std::move(hybrid));
  }
  design.a = std::move(a);
  design.b = std::move(b);
  return design;
}

PickFreezeDesign pick_freeze(const UnitSample& ua, const UnitSample& ub, const InputSpace& space) {
  if (ua.points.rows() != ub.points.rows() || ua.points.cols() != ub.points.cols()) {
    throw ShapeError("pick_freeze: unit samples must have the same shape");
  }
  return pick_freeze(transform(ua, space), transform(ub, space));
}

ReplicateSeeds replicate_seeds(std::uint64_t seed_base, std::size_t replicate) {
  const std::uint64_t r = replicate;
  return {replicate, seed_base + 2 * r, seed_base + 2 * r + 1};
}

UnitPair replicate_unit_pair(Generator generator, std::size_t n, std::size_t d,
                             std::uint64_t seed_base, std::size_t replicate,
                             std::size_t total_replicates, bool skip_first_point) {
  check_shape(n, d);
  const ReplicateSeeds seeds = replicate_seeds(seed_base, replicate);
  if (generator != Generator::SobolSequence) {
    return {generate_unit(generator, n, d, seeds.a), generate_unit(generator, n, d, seeds.b)};
  }
  SamplingOptions options;
  options.skip_first_point = skip_first_point;
  options.randomization =
      total_replicates > 1 ? QmcRandomization::DigitalShift : QmcRandomization::None;
  const UnitSample joint = generate_unit(generator, n, 2 * d, seeds.a, options);
  UnitPair pair{{Matrix(n, d), generator, seeds.a}, {Matrix(n, d), generator, seeds.b}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      pair.a.points(i, j) = joint.points(i, j);
      pair.b.points(i, j) = joint.points(i, d + j);
    }
  }
  return pair;
}

}  // namespace dgsmlab
