#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dgsmlab/error.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

TEST(Sobol, FirstPointsInOneDimension) {
  const auto u = generate_unit(Generator::SobolSequence, 2, 1, 0, {.skip_first_point = false});
  EXPECT_EQ(u.points(0, 0), 0.0);
  EXPECT_EQ(u.points(1, 0), 0.5);
  const auto skipped = generate_unit(Generator::SobolSequence, 3, 1, 0);
  EXPECT_EQ(skipped.points(0, 0), 0.5);
  EXPECT_EQ(skipped.points(1, 0), 0.75);
  EXPECT_EQ(skipped.points(2, 0), 0.25);
}

TEST(Sobol, KnownSecondDimension) {
  // Second coordinate of the standard sequence: 0, .5, .25, .75, .375, .875.
  const auto u = generate_unit(Generator::SobolSequence, 6, 2, 0, {.skip_first_point = false});
  const double want[] = {0.0, 0.5, 0.25, 0.75, 0.375, 0.875};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(u.points(i, 1), want[i]) << i;
}

TEST(Sobol, EachCoordinateIsAPermutationOfTheDyadicGrid) {
  // The first 2^m points (origin included) hit every cell of width 2^-m once.
  const std::size_t n = 1024, d = 40;
  const auto u = generate_unit(Generator::SobolSequence, n, d, 0, {.skip_first_point = false});
  for (std::size_t j = 0; j < d; ++j) {
    std::set<long> cells;
    for (std::size_t i = 0; i < n; ++i) cells.insert(std::lround(std::floor(u.points(i, j) * n)));
    EXPECT_EQ(cells.size(), n) << j;
  }
}

TEST(Sobol, CoordinateMeansAreBalanced) {
  const auto u = generate_unit(Generator::SobolSequence, 1024, 5, 0);
  for (std::size_t j = 0; j < 5; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < 1024; ++i) s += u.points(i, j);
    EXPECT_NEAR(s / 1024.0, 0.5, 1e-3);
  }
}

TEST(Sobol, SupportsHighDimensionsAndRejectsBeyondTable) {
  EXPECT_NO_THROW(generate_unit(Generator::SobolSequence, 8, 21, 0));
  EXPECT_NO_THROW(generate_unit(Generator::SobolSequence, 8, kSobolMaxDimension, 0));
  EXPECT_THROW(generate_unit(Generator::SobolSequence, 8, kSobolMaxDimension + 1, 0),
               CapacityError);
}

TEST(Sobol, DigitalShiftKeepsStratification) {
  SamplingOptions opt{.skip_first_point = false, .randomization = QmcRandomization::DigitalShift};
  const auto a = generate_unit(Generator::SobolSequence, 256, 3, 11, opt);
  const auto b = generate_unit(Generator::SobolSequence, 256, 3, 12, opt);
  EXPECT_NE(a.points, b.points);
  for (std::size_t j = 0; j < 3; ++j) {
    std::set<long> cells;
    for (std::size_t i = 0; i < 256; ++i) cells.insert(std::lround(std::floor(a.points(i, j) * 256)));
    EXPECT_EQ(cells.size(), 256u);
  }
}

TEST(LatinHypercube, OnePointPerStratum) {
  const auto u = generate_unit(Generator::LatinHypercube, 10, 3, 7);
  for (std::size_t j = 0; j < 3; ++j) {
    std::set<int> deciles;
    for (std::size_t i = 0; i < 10; ++i) deciles.insert(static_cast<int>(u.points(i, j) * 10));
    EXPECT_EQ(deciles.size(), 10u);
  }
}

TEST(MonteCarlo, MeanWithinThreeSigma) {
  const auto u = generate_unit(Generator::MonteCarlo, 10000, 2, 2024);
  double s = 0;
  for (std::size_t i = 0; i < 10000; ++i) s += u.points(i, 0);
  EXPECT_NEAR(s / 10000.0, 0.5, 0.015);
}

TEST(Generators, DeterministicAndInUnitInterval) {
  for (auto g : {Generator::MonteCarlo, Generator::LatinHypercube, Generator::SobolSequence}) {
    const auto a = generate_unit(g, 500, 4, 99);
    const auto b = generate_unit(g, 500, 4, 99);
    EXPECT_EQ(a.points, b.points) << to_string(g);
    EXPECT_EQ(a.generator, g);
    EXPECT_EQ(a.seed, 99u);
    for (double v : a.points.data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
  EXPECT_NE(generate_unit(Generator::MonteCarlo, 5, 2, 1).points,
            generate_unit(Generator::MonteCarlo, 5, 2, 2).points);
}

TEST(Generators, RejectEmptyShapes) {
  EXPECT_THROW(generate_unit(Generator::MonteCarlo, 0, 2, 1), DomainError);
  EXPECT_THROW(generate_unit(Generator::MonteCarlo, 2, 0, 1), DomainError);
}

TEST(ToUnit, Extremes) {
  EXPECT_EQ(to_unit(0), 0.0);
  EXPECT_LT(to_unit(~std::uint64_t{0}), 1.0);
}

TEST(Transform, KnownValues) {
  Matrix half(4, 3, 0.5);
  half(0, 2) = 0.8413;
  const InputSpace space({Uniform(7, 9), Exponential(4), Normal(0, 1)});
  const Matrix x = transform(half, space);
  EXPECT_DOUBLE_EQ(x(1, 0), 8.0);
  EXPECT_NEAR(x(1, 1), 0.17329, 1e-5);
  EXPECT_NEAR(x(0, 2), 1.0, 1e-3);
}

TEST(Transform, ClampsEndpointsAndPreservesOrder) {
  Matrix u(3, 1);
  u(0, 0) = 0.0;
  u(1, 0) = 0.5;
  u(2, 0) = 1.0;
  const Matrix x = transform(u, InputSpace({Normal(0, 1)}));
  EXPECT_TRUE(std::isfinite(x(0, 0)));
  EXPECT_TRUE(std::isfinite(x(2, 0)));
  EXPECT_LT(x(0, 0), x(1, 0));
  EXPECT_LT(x(1, 0), x(2, 0));
  const auto mc = generate_unit(Generator::MonteCarlo, 200, 1, 3);
  const Matrix t = transform(mc, InputSpace({Exponential(2)}));
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t k = 0; k < 200; ++k) {
      if (mc.points(i, 0) < mc.points(k, 0)) EXPECT_LE(t(i, 0), t(k, 0));
    }
  }
}

TEST(Transform, ShapeMismatch) {
  EXPECT_THROW(transform(Matrix(2, 2), InputSpace({Uniform(0, 1)})), ShapeError);
}

TEST(PickFreeze, SubstitutesOneColumn) {
  Matrix a(1, 2), b(1, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  b(0, 0) = 3;
  b(0, 1) = 4;
  const auto d = pick_freeze(a, b);
  EXPECT_EQ(d.ab[0](0, 0), 3);
  EXPECT_EQ(d.ab[0](0, 1), 2);
  EXPECT_EQ(d.ab[1](0, 0), 1);
  EXPECT_EQ(d.ab[1](0, 1), 4);
  EXPECT_EQ(d.evaluation_count(), 4u);
}

TEST(PickFreeze, OneDimensionalSubstituteIsB) {
  const auto ua = generate_unit(Generator::MonteCarlo, 50, 1, 1);
  const auto ub = generate_unit(Generator::MonteCarlo, 50, 1, 2);
  const auto d = pick_freeze(ua, ub, InputSpace({Normal(0, 1)}));
  EXPECT_EQ(d.ab[0], d.b);
}

TEST(PickFreeze, InvariantsAndCount) {
  const std::size_t n = 64, dim = 5;
  const auto ua = generate_unit(Generator::MonteCarlo, n, dim, 1);
  const auto ub = generate_unit(Generator::MonteCarlo, n, dim, 2);
  const auto d = pick_freeze(ua, ub, InputSpace(std::vector<Marginal>(dim, Uniform(0, 1))));
  EXPECT_EQ(d.evaluation_count(), n * (dim + 2));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        EXPECT_EQ(d.ab[j](i, k), k == j ? d.b(i, k) : d.a(i, k));
      }
    }
  }
}

TEST(PickFreeze, ShapeMismatch) {
  EXPECT_THROW(pick_freeze(Matrix(3, 2), Matrix(4, 2)), ShapeError);
  EXPECT_THROW(pick_freeze(Matrix(3, 2), Matrix(3, 3)), ShapeError);
}

TEST(Replicates, SeedPolicy) {
  const auto s = replicate_seeds(100, 3);
  EXPECT_EQ(s.a, 106u);
  EXPECT_EQ(s.b, 107u);
  const auto p = replicate_unit_pair(Generator::MonteCarlo, 10, 2, 100, 3, 20);
  EXPECT_EQ(p.a.points, generate_unit(Generator::MonteCarlo, 10, 2, 106).points);
  EXPECT_EQ(p.b.points, generate_unit(Generator::MonteCarlo, 10, 2, 107).points);
}

TEST(Replicates, SobolSplitAndShift) {
  const auto single = replicate_unit_pair(Generator::SobolSequence, 16, 3, 5, 0, 1);
  const auto joint = generate_unit(Generator::SobolSequence, 16, 6, 0);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(single.a.points(i, j), joint.points(i, j));
      EXPECT_EQ(single.b.points(i, j), joint.points(i, j + 3));
    }
  }
  const auto r0 = replicate_unit_pair(Generator::SobolSequence, 16, 3, 5, 0, 4);
  const auto r1 = replicate_unit_pair(Generator::SobolSequence, 16, 3, 5, 1, 4);
  EXPECT_NE(r0.a.points, r1.a.points);
}
