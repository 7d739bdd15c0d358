#pragma once

// Scalar models f : R^d -> R, their gradients, and the built-in test cases.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgsmlab/distributions.hpp"
#include "dgsmlab/matrix.hpp"

namespace dgsmlab {

class Model {
 public:
  virtual ~Model() = default;

  virtual const std::string& name() const = 0;
  virtual std::size_t dimension() const = 0;
  // Must be deterministic and reentrant.
  virtual double evaluate(std::span<const double> x) const = 0;

  virtual bool has_gradient() const { return false; }
  // Throws CapabilityError unless has_gradient().
  virtual void gradient(std::span<const double> x, std::span<double> out) const;

  // One output per row. The default splits rows into `workers` contiguous
  // blocks evaluated on separate threads; outputs are written by row index, so
  // the result does not depend on the worker count.
  virtual std::vector<double> evaluate_rows(const Matrix& x, std::size_t workers = 1) const;
};

using ModelPtr = std::shared_ptr<const Model>;

// Wraps callables; used for ad-hoc test functions.
ModelPtr function_model(std::string name, std::size_t dimension,
                        std::function<double(std::span<const double>)> evaluate,
                        std::function<void(std::span<const double>, std::span<double>)> gradient = {});

// ---------------------------------------------------------------------------
// Gradients

struct GradientMethod {
  enum class Kind { Analytic, ForwardFD, CentralFD };

  Kind kind = Kind::ForwardFD;
  // Step h_j = max(relative_step |x_j|, absolute_floor).
  double relative_step = 1e-4;
  double absolute_floor = 1e-8;

  static GradientMethod analytic() { return {Kind::Analytic, 0.0, 0.0}; }
  static GradientMethod forward(double relative_step = 1e-4, double absolute_floor = 1e-8) {
    return {Kind::ForwardFD, relative_step, absolute_floor};
  }
  static GradientMethod central(double relative_step = 1e-4, double absolute_floor = 1e-8) {
    return {Kind::CentralFD, relative_step, absolute_floor};
  }
};

// Analytic when the model provides it, forward differences otherwise.
GradientMethod default_gradient_method(const Model& model);

std::vector<double> gradient(const Model& model, std::span<const double> x,
                             const GradientMethod& method);

// Gradients at every row of `points` (n x d). Finite differences are
// evaluated through evaluate_rows in row blocks, so external models see a few
// large batches instead of n (d + 1) single calls.
Matrix gradients(const Model& model, const Matrix& points, const GradientMethod& method,
                 std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Built-in models

// f(x) = sum_j a_j x_j.
ModelPtr linear_model(std::vector<double> coefficients);

// f(x1, x2) = x1 + x2 + x1 x2.
ModelPtr interaction_model();

// Twenty-input Morris screening function
//
//   y = b0 + sum b_i w_i + sum_{i<j} b_ij w_i w_j + sum_{i<j<l} b_ijl w_i w_j w_l
//          + sum_{i<j<l<s} b_ijls w_i w_j w_l w_s
//
// with w_i = 2 (x_i - 1/2), except for inputs 3, 5 and 7 where
// w_i = 2 (1.1 x_i / (x_i + offset) - 1/2). Fixed coefficients: b_i = 20 for
// i <= 10, b_ij = -15 for i < j <= 6, b_ijl = -10 for i < j < l <= 5,
// b_1234 = 5. The remaining first- and second-order coefficients are standard
// normal draws (inverse CDF of mt19937_64 uniforms seeded by `coeff_seed`, in
// the order b_11..b_20 then pairs (i, j) lexicographically); the remaining
// third- and fourth-order coefficients are 0, and b0 = 0.
//
// The classical transform uses offset 0.1; offset 1.0 is the other variant in
// circulation.
class MorrisFunction final : public Model {
 public:
  static constexpr std::size_t kDimension = 20;
  static constexpr std::uint64_t kDefaultSeed = 42;
  static constexpr double kDefaultOffset = 0.1;

  explicit MorrisFunction(std::uint64_t coeff_seed = kDefaultSeed,
                          double denominator_offset = kDefaultOffset);

  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return kDimension; }
  double evaluate(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> out) const override;

  double first_order(std::size_t i) const { return first_[i]; }
  double second_order(std::size_t i, std::size_t j) const { return second_[i * kDimension + j]; }
  double denominator_offset() const noexcept { return offset_; }
  std::uint64_t coeff_seed() const noexcept { return seed_; }

  // w_i(x_i) and dw_i/dx_i.
  double transformed(std::size_t i, double x) const;
  double transformed_derivative(std::size_t i, double x) const;

 private:
  std::string name_ = "morris";
  std::uint64_t seed_;
  double offset_;
  std::array<double, kDimension> first_{};
  std::vector<double> second_;  // upper triangle, i < j
};

ModelPtr morris_function(std::uint64_t coeff_seed = MorrisFunction::kDefaultSeed,
                         double denominator_offset = MorrisFunction::kDefaultOffset);

// Inputs of the flood models, in order.
enum FloodInput : std::size_t { kQ = 0, kKs, kZv, kZm, kHd, kCb, kL, kB };

// Overflow S = Zv + H - Hd - Cb, H = (Q / (B Ks sqrt((Zm - Zv) / L)))^0.6.
// Throws DomainError when Zm <= Zv or Q, Ks, B, L are not positive.
ModelPtr flood_overflow();

// Cost Cp = 1{S > 0} + [0.2 + 0.8 (1 - exp(-1000 / S^4))] 1{S <= 0}
//           + (Hd 1{Hd > 8} + 8 1{Hd <= 8}) / 20.
// At S = 0 the bracket takes its limit value 1. No analytic gradient.
ModelPtr flood_cost();

// River flood input laws: Q truncated Gumbel(1013, 558) on [500, 3000],
// Ks truncated normal(30, 8) on [15, inf), Zv T(49, 50, 51), Zm T(54, 55, 56),
// Hd U[7, 9], Cb T(55, 55.5, 56), L T(4990, 5000, 5010), B T(295, 300, 305).
InputSpace flood_input_space();

// Morris inputs: the pattern U[0,1], N(0.5, 0.1), E(4), Gumbel(0.2, 0.2),
// Weibull(2, 0.5), then U[0,1] five times, repeated for inputs 11-20.
InputSpace morris_input_space();

// Uniform[0,1]^d with names X1..Xd.
InputSpace unit_cube(std::size_t d);

}  // namespace dgsmlab
