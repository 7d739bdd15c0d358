#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgsmlab/error.hpp"
#include "dgsmlab/models.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

namespace {

const std::vector<double> kFloodPoint = {1013, 30, 50, 55, 8, 55.5, 5000, 300};

// Central differences with step 1e-6 relative, written independently of
// gradient().
std::vector<double> central(const Model& m, std::vector<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(std::abs(x[j]), 1e-2);
    const double x0 = x[j];
    x[j] = x0 + h;
    const double fp = m.evaluate(x);
    x[j] = x0 - h;
    const double fm = m.evaluate(x);
    x[j] = x0;
    g[j] = (fp - fm) / (2 * h);
  }
  return g;
}

void expect_gradient_matches_central(const Model& m, const InputSpace& space) {
  const Matrix pts = transform(generate_unit(Generator::MonteCarlo, 100, space.dimension(), 77),
                               space);
  std::vector<double> analytic(space.dimension());
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    std::vector<double> x(pts.row(i).begin(), pts.row(i).end());
    m.gradient(x, analytic);
    const auto fd = central(m, x);
    double scale = 0;
    for (double v : analytic) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < x.size(); ++j) {
      EXPECT_NEAR(analytic[j], fd[j], 1e-5 * std::max(std::abs(analytic[j]), 1e-3 * scale))
          << m.name() << " row " << i << " input " << j;
    }
  }
}

}  // namespace

TEST(Linear, ValueAndGradient) {
  const auto m = linear_model({1, 1});
  EXPECT_DOUBLE_EQ(m->evaluate(std::vector<double>{0.3, 0.7}), 1.0);
  EXPECT_EQ(m->name(), "linear");
  const auto g = gradient(*m, std::vector<double>{5, -2}, GradientMethod::analytic());
  EXPECT_EQ(g, (std::vector<double>{1, 1}));
  const auto fd = gradient(*linear_model({2, -3, 0.5}), std::vector<double>{0.1, 0.4, 0.9},
                           GradientMethod::forward());
  EXPECT_NEAR(fd[0], 2, 1e-6);
  EXPECT_NEAR(fd[1], -3, 1e-6);
  EXPECT_NEAR(fd[2], 0.5, 1e-6);
}

TEST(Interaction, ValueAndSymmetry) {
  const auto m = interaction_model();
  EXPECT_EQ(m->evaluate(std::vector<double>{0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(m->evaluate(std::vector<double>{0.2, 0.7}),
                   m->evaluate(std::vector<double>{0.7, 0.2}));
  expect_gradient_matches_central(*m, unit_cube(2));
}

TEST(Flood, OverflowHandPoint) {
  const auto m = flood_overflow();
  const double h = std::pow(1013.0 / (300 * 30 * std::sqrt(5.0 / 5000)), 0.6);
  EXPECT_NEAR(h, 2.1421, 1e-4);
  EXPECT_NEAR(m->evaluate(kFloodPoint), 50 + h - 8 - 55.5, 1e-12);
  EXPECT_NEAR(m->evaluate(kFloodPoint), -11.358, 1e-3);
}

TEST(Flood, OverflowGradient) {
  const auto m = flood_overflow();
  std::vector<double> g(8);
  m->gradient(kFloodPoint, g);
  EXPECT_EQ(g[kHd], -1.0);
  EXPECT_EQ(g[kCb], -1.0);
  const auto fd = gradient(*m, kFloodPoint, GradientMethod::forward());
  for (std::size_t j = 0; j < 8; ++j) {
    if (j != kZm) EXPECT_NEAR(fd[j], g[j], 1e-4 * std::abs(g[j])) << j;
  }
  // Zm: the step 5.5e-3 is large against Zm - Zv = 5, so the forward
  // difference is off by its leading truncation term h/2 f'' with
  // f'' = 0.39 H / (Zm - Zv)^2 (about 7e-4 relative). Pin that term.
  const double h = 1e-4 * kFloodPoint[kZm];
  const double u = kFloodPoint[kZm] - kFloodPoint[kZv];
  const double big_h = m->evaluate(kFloodPoint) - kFloodPoint[kZv] + kFloodPoint[kHd] + kFloodPoint[kCb];
  const double predicted = 0.5 * h * 0.39 * big_h / (u * u);
  EXPECT_NEAR(fd[kZm] - g[kZm], predicted, 0.01 * predicted);
  expect_gradient_matches_central(*m, flood_input_space());
}

TEST(Flood, OverflowMonotonicity) {
  const auto m = flood_overflow();
  const Matrix pts = transform(generate_unit(Generator::MonteCarlo, 500, 8, 5), flood_input_space());
  std::vector<double> g(8);
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    m->gradient(pts.row(i), g);
    EXPECT_GT(g[kQ], 0.0);
    EXPECT_LT(g[kKs], 0.0);
    EXPECT_EQ(g[kHd], -1.0);
  }
}

TEST(Flood, OverflowDomainErrors) {
  const auto m = flood_overflow();
  auto x = kFloodPoint;
  x[kZm] = x[kZv];
  EXPECT_THROW(m->evaluate(x), DomainError);
  x = kFloodPoint;
  x[kQ] = 0;
  EXPECT_THROW(m->evaluate(x), DomainError);
  x = kFloodPoint;
  x[kB] = -1;
  EXPECT_THROW(m->evaluate(x), DomainError);
}

TEST(Flood, CostExamples) {
  const auto cost = flood_cost();
  EXPECT_FALSE(cost->has_gradient());
  const double s = flood_overflow()->evaluate(kFloodPoint);
  const double expected = 0.2 + 0.8 * (1 - std::exp(-1000 / std::pow(s, 4))) + 0.4;
  EXPECT_NEAR(cost->evaluate(kFloodPoint), expected, 1e-12);
  EXPECT_NEAR(cost->evaluate(kFloodPoint), 0.6467, 1e-3);

  auto x = kFloodPoint;
  x[kCb] = 40;  // S > 0
  EXPECT_GT(flood_overflow()->evaluate(x), 0.0);
  EXPECT_DOUBLE_EQ(cost->evaluate(x), 1.4);
  x[kHd] = 9;
  EXPECT_GT(flood_overflow()->evaluate(x), 0.0);
  EXPECT_DOUBLE_EQ(cost->evaluate(x), 1.45);
}

TEST(Flood, CostAtZeroOverflowTakesLimit) {
  auto x = kFloodPoint;
  const double s = flood_overflow()->evaluate(x);
  x[kCb] += s;  // S == 0 up to round-off; nudge until exactly zero
  for (int k = 0; k < 8 && flood_overflow()->evaluate(x) != 0.0; ++k) {
    x[kCb] = std::nextafter(x[kCb], flood_overflow()->evaluate(x) > 0 ? 1e9 : -1e9);
  }
  ASSERT_EQ(flood_overflow()->evaluate(x), 0.0);
  EXPECT_DOUBLE_EQ(flood_cost()->evaluate(x), 1.0 + 0.4);
}

TEST(Flood, InputSpaceLaws) {
  const auto space = flood_input_space();
  ASSERT_EQ(space.dimension(), 8u);
  EXPECT_EQ(space.names[0], "Q");
  EXPECT_EQ(space.names[7], "B");
  EXPECT_TRUE(std::holds_alternative<TruncatedGumbel>(space.marginals[kQ]));
  EXPECT_TRUE(std::holds_alternative<TruncatedNormal>(space.marginals[kKs]));
  EXPECT_TRUE(std::holds_alternative<Uniform>(space.marginals[kHd]));
}

TEST(Morris, CentrePointClassicalVariant) {
  const MorrisFunction m(42, 1.0);
  EXPECT_NEAR(m.transformed(2, 0.5), 2 * (1.1 / 3.0 - 0.5), 1e-15);
  EXPECT_NEAR(m.transformed(2, 0.5), -0.2667, 1e-4);
  EXPECT_EQ(m.transformed(0, 0.5), 0.0);

  // Only inputs 3, 5, 7 are nonzero at the centre.
  const double w = m.transformed(2, 0.5);
  // b_35 = -15 is fixed; b_37 and b_57 are random; no third- or fourth-order
  // term survives because every one of them involves an input with w = 0.
  const double expected =
      3 * 20 * w + (-15 + m.second_order(2, 6) + m.second_order(4, 6)) * w * w;
  const std::vector<double> x(20, 0.5);
  EXPECT_NEAR(m.evaluate(x), expected, 1e-12);
}

TEST(Morris, FixedCoefficients) {
  const MorrisFunction m;
  EXPECT_EQ(m.denominator_offset(), 0.1);
  EXPECT_EQ(m.coeff_seed(), 42u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(m.first_order(i), 20.0);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) EXPECT_EQ(m.second_order(i, j), -15.0);
  }
  EXPECT_NE(m.first_order(10), 20.0);
  EXPECT_NE(m.second_order(0, 6), -15.0);
}

TEST(Morris, Reproducible) {
  const MorrisFunction a(7), b(7), c(8);
  std::mt19937_64 rng(1);
  std::vector<double> x(20);
  for (auto& v : x) v = std::uniform_real_distribution<double>(0, 1)(rng);
  EXPECT_EQ(a.evaluate(x), b.evaluate(x));
  EXPECT_NE(a.evaluate(x), c.evaluate(x));
}

TEST(Morris, CoefficientStreamIsPinned) {
  // First random coefficient b_11 for seed 42: inverse normal CDF of
  // ((w >> 11) + 0.5) 2^-53 with w the first mt19937_64 output.
  std::mt19937_64 rng(42);
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  const MorrisFunction m(42);
  // Standard normal quantile through the library's own Normal law.
  EXPECT_NEAR(m.first_order(10), quantile(Normal(0, 1), u), 1e-14);
}

TEST(Morris, GradientMatchesCentralDifferences) {
  expect_gradient_matches_central(MorrisFunction(42, 0.1), morris_input_space());
  expect_gradient_matches_central(MorrisFunction(3, 1.0), morris_input_space());
}

TEST(Morris, InputSpacePattern) {
  const auto s = morris_input_space();
  ASSERT_EQ(s.dimension(), 20u);
  for (std::size_t k : {0u, 10u}) {
    EXPECT_TRUE(std::holds_alternative<Uniform>(s.marginals[k]));
    EXPECT_TRUE(std::holds_alternative<Normal>(s.marginals[k + 1]));
    EXPECT_TRUE(std::holds_alternative<Exponential>(s.marginals[k + 2]));
    EXPECT_TRUE(std::holds_alternative<Gumbel>(s.marginals[k + 3]));
    EXPECT_TRUE(std::holds_alternative<Weibull>(s.marginals[k + 4]));
  }
  EXPECT_EQ(s.names[19], "X20");
}

TEST(Gradient, ForwardFloorAtZero) {
  const auto sq = function_model("square", 1, [](std::span<const double> x) { return x[0] * x[0]; });
  const auto g = gradient(*sq, std::vector<double>{0.0}, GradientMethod::forward());
  EXPECT_NEAR(g[0], 1e-8, 1e-12);
  const auto c = gradient(*sq, std::vector<double>{0.0}, GradientMethod::central());
  EXPECT_NEAR(c[0], 0.0, 1e-15);
}

TEST(Gradient, AnalyticRequiresCapability) {
  EXPECT_THROW(gradient(*flood_cost(), kFloodPoint, GradientMethod::analytic()), CapabilityError);
  EXPECT_EQ(default_gradient_method(*flood_cost()).kind, GradientMethod::Kind::ForwardFD);
  EXPECT_EQ(default_gradient_method(*flood_overflow()).kind, GradientMethod::Kind::Analytic);
}

TEST(Gradient, BatchedMatchesPointwiseForAnyWorkerCount) {
  const auto m = flood_overflow();
  const Matrix pts = transform(generate_unit(Generator::MonteCarlo, 300, 8, 9), flood_input_space());
  const Matrix g1 = gradients(*m, pts, GradientMethod::forward(), 1);
  const Matrix g4 = gradients(*m, pts, GradientMethod::forward(), 4);
  EXPECT_EQ(g1, g4);
  for (std::size_t i : {0u, 150u, 299u}) {
    const auto gi = gradient(*m, pts.row(i), GradientMethod::forward());
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(g1(i, j), gi[j]);
  }
}

TEST(EvaluateRows, IndependentOfWorkerCount) {
  const MorrisFunction m;
  const Matrix pts = transform(generate_unit(Generator::MonteCarlo, 1001, 20, 4), morris_input_space());
  EXPECT_EQ(m.evaluate_rows(pts, 1), m.evaluate_rows(pts, 7));
}
