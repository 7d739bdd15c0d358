#include "dgsmlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "dgsmlab/error.hpp"

namespace dgsmlab {

void Model::gradient(std::span<const double>, std::span<double>) const {
  throw CapabilityError("model '" + name() + "' has no analytic gradient");
}

std::vector<double> Model::evaluate_rows(const Matrix& x, std::size_t workers) const {
  if (x.cols() != dimension()) {
    throw ShapeError("model '" + name() + "' expects " + std::to_string(dimension()) +
                     " inputs, got " + std::to_string(x.cols()));
  }
  const std::size_t n = x.rows();
  std::vector<double> y(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) y[i] = evaluate(x.row(i));
    return y;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) y[i] = evaluate(x.row(i));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return y;
}

namespace {

class FunctionModel final : public Model {
 public:
  FunctionModel(std::string name, std::size_t dimension,
                std::function<double(std::span<const double>)> evaluate,
                std::function<void(std::span<const double>, std::span<double>)> gradient)
      : name_(std::move(name)),
        dimension_(dimension),
        evaluate_(std::move(evaluate)),
        gradient_(std::move(gradient)) {}

  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return dimension_; }
  double evaluate(std::span<const double> x) const override { return evaluate_(x); }
  bool has_gradient() const override { return static_cast<bool>(gradient_); }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    if (!gradient_) Model::gradient(x, out);
    gradient_(x, out);
  }

 private:
  std::string name_;
  std::size_t dimension_;
  std::function<double(std::span<const double>)> evaluate_;
  std::function<void(std::span<const double>, std::span<double>)> gradient_;
};

class LinearModel final : public Model {
 public:
  explicit LinearModel(std::vector<double> a) : a_(std::move(a)) {
    if (a_.empty()) throw DomainError("linear_model: need at least one coefficient");
  }

  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return a_.size(); }
  double evaluate(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t j = 0; j < a_.size(); ++j) s += a_[j] * x[j];
    return s;
  }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    std::copy(a_.begin(), a_.end(), out.begin());
  }

 private:
  std::string name_ = "linear";
  std::vector<double> a_;
};

class InteractionModel final : public Model {
 public:
  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return 2; }
  double evaluate(std::span<const double> x) const override { return x[0] + x[1] + x[0] * x[1]; }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    out[0] = 1.0 + x[1];
    out[1] = 1.0 + x[0];
  }

 private:
  std::string name_ = "interaction";
};

struct FloodState {
  double h;      // river height
  double slope;  // (Zm - Zv) / L
};

FloodState flood_height(std::span<const double> x) {
  const double q = x[kQ], ks = x[kKs], zv = x[kZv], zm = x[kZm], l = x[kL], b = x[kB];
  if (!(zm > zv)) throw DomainError("flood: need Zm > Zv");
  if (!(q > 0.0 && ks > 0.0 && b > 0.0 && l > 0.0)) {
    throw DomainError("flood: need positive Q, Ks, B and L");
  }
  const double slope = (zm - zv) / l;
  return {std::pow(q / (b * ks * std::sqrt(slope)), 0.6), slope};
}

double overflow(std::span<const double> x) {
  return x[kZv] + flood_height(x).h - x[kHd] - x[kCb];
}

class FloodOverflow final : public Model {
 public:
  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return 8; }
  double evaluate(std::span<const double> x) const override { return overflow(x); }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    const double h = flood_height(x).h;
    const double drop = x[kZm] - x[kZv];
    out[kQ] = 0.6 * h / x[kQ];
    out[kKs] = -0.6 * h / x[kKs];
    out[kZv] = 1.0 + 0.3 * h / drop;
    out[kZm] = -0.3 * h / drop;
    out[kHd] = -1.0;
    out[kCb] = -1.0;
    out[kL] = 0.3 * h / x[kL];
    out[kB] = -0.6 * h / x[kB];
  }

 private:
  std::string name_ = "flood_overflow";
};

class FloodCost final : public Model {
 public:
  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return 8; }
  double evaluate(std::span<const double> x) const override {
    const double s = overflow(x);
    double cost = 0.0;
    if (s > 0.0) {
      cost = 1.0;
    } else if (s == 0.0) {
      cost = 1.0;  // limit of 0.2 + 0.8 (1 - exp(-1000 / S^4)) as S -> 0
    } else {
      const double s2 = s * s;
      cost = 0.2 + 0.8 * (-std::expm1(-1000.0 / (s2 * s2)));
    }
    const double hd = x[kHd];
    return cost + (hd > 8.0 ? hd : 8.0) / 20.0;
  }

 private:
  std::string name_ = "flood_cost";
};

}  // namespace

ModelPtr function_model(std::string name, std::size_t dimension,
                        std::function<double(std::span<const double>)> evaluate,
                        std::function<void(std::span<const double>, std::span<double>)> gradient) {
  return std::make_shared<FunctionModel>(std::move(name), dimension, std::move(evaluate),
                                         std::move(gradient));
}

ModelPtr linear_model(std::vector<double> coefficients) {
  return std::make_shared<LinearModel>(std::move(coefficients));
}

ModelPtr interaction_model() { return std::make_shared<InteractionModel>(); }

ModelPtr flood_overflow() { return std::make_shared<FloodOverflow>(); }

ModelPtr flood_cost() { return std::make_shared<FloodCost>(); }

// ---------------------------------------------------------------------------
// Morris

namespace {

constexpr std::size_t kMorrisD = MorrisFunction::kDimension;

bool rational_input(std::size_t i) { return i == 2 || i == 4 || i == 6; }

// Fixed third-order block: inputs 1..5 (zero-based 0..4) pairwise distinct.
constexpr double kThird = -10.0;
constexpr double kFourth = 5.0;

}  // namespace

MorrisFunction::MorrisFunction(std::uint64_t coeff_seed, double denominator_offset)
    : seed_(coeff_seed), offset_(denominator_offset), second_(kMorrisD * kMorrisD, 0.0) {
  if (!(denominator_offset > 0.0)) throw DomainError("morris: offset must be positive");
  std::mt19937_64 rng(coeff_seed);
  const auto standard_normal = [&rng] {
    // Midpoint of the 53-bit cell keeps u strictly inside (0, 1).
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  };
  for (std::size_t i = 0; i < kMorrisD; ++i) first_[i] = i < 10 ? 20.0 : standard_normal();
  for (std::size_t i = 0; i < kMorrisD; ++i) {
    for (std::size_t j = i + 1; j < kMorrisD; ++j) {
      second_[i * kMorrisD + j] = j < 6 ? -15.0 : standard_normal();
    }
  }
}

double MorrisFunction::transformed(std::size_t i, double x) const {
  if (rational_input(i)) return 2.0 * (1.1 * x / (x + offset_) - 0.5);
  return 2.0 * (x - 0.5);
}

double MorrisFunction::transformed_derivative(std::size_t i, double x) const {
  if (rational_input(i)) {
    const double den = x + offset_;
    return 2.2 * offset_ / (den * den);
  }
  return 2.0;
}

double MorrisFunction::evaluate(std::span<const double> x) const {
  std::array<double, kMorrisD> w{};
  for (std::size_t i = 0; i < kMorrisD; ++i) w[i] = transformed(i, x[i]);
  double y = 0.0;
  for (std::size_t i = 0; i < kMorrisD; ++i) {
    double inner = first_[i];
    for (std::size_t j = i + 1; j < kMorrisD; ++j) inner += second_[i * kMorrisD + j] * w[j];
    y += inner * w[i];
  }
  double third = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      for (std::size_t l = j + 1; l < 5; ++l) third += w[i] * w[j] * w[l];
    }
  }
  y += kThird * third;
  y += kFourth * w[0] * w[1] * w[2] * w[3];
  return y;
}

void MorrisFunction::gradient(std::span<const double> x, std::span<double> out) const {
  std::array<double, kMorrisD> w{};
  for (std::size_t i = 0; i < kMorrisD; ++i) w[i] = transformed(i, x[i]);
  for (std::size_t k = 0; k < kMorrisD; ++k) {
    double dy = first_[k];
    for (std::size_t j = 0; j < kMorrisD; ++j) {
      if (j < k) dy += second_[j * kMorrisD + k] * w[j];
      if (j > k) dy += second_[k * kMorrisD + j] * w[j];
    }
    if (k < 5) {
      double pairs = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
          if (i != k && j != k) pairs += w[i] * w[j];
        }
      }
      dy += kThird * pairs;
    }
    if (k < 4) {
      double prod = 1.0;
      for (std::size_t i = 0; i < 4; ++i) {
        if (i != k) prod *= w[i];
      }
      dy += kFourth * prod;
    }
    out[k] = dy * transformed_derivative(k, x[k]);
  }
}

ModelPtr morris_function(std::uint64_t coeff_seed, double denominator_offset) {
  return std::make_shared<MorrisFunction>(coeff_seed, denominator_offset);
}

// ---------------------------------------------------------------------------
// Input spaces

InputSpace flood_input_space() {
  return InputSpace({"Q", "Ks", "Zv", "Zm", "Hd", "Cb", "L", "B"},
                    {TruncatedGumbel(1013.0, 558.0, 500.0, 3000.0),
                     TruncatedNormal(30.0, 8.0, 15.0), Triangular(49.0, 50.0, 51.0),
                     Triangular(54.0, 55.0, 56.0), Uniform(7.0, 9.0),
                     Triangular(55.0, 55.5, 56.0), Triangular(4990.0, 5000.0, 5010.0),
                     Triangular(295.0, 300.0, 305.0)});
}

InputSpace morris_input_space() {
  std::vector<Marginal> marginals;
  marginals.reserve(kMorrisD);
  for (int block = 0; block < 2; ++block) {
    marginals.emplace_back(Uniform(0.0, 1.0));
    marginals.emplace_back(Normal(0.5, 0.1));
    marginals.emplace_back(Exponential(4.0));
    marginals.emplace_back(Gumbel(0.2, 0.2));
    marginals.emplace_back(Weibull(2.0, 0.5));
    for (int k = 0; k < 5; ++k) marginals.emplace_back(Uniform(0.0, 1.0));
  }
  return InputSpace(std::move(marginals));
}

InputSpace unit_cube(std::size_t d) {
  return InputSpace(std::vector<Marginal>(d, Uniform(0.0, 1.0)));
}

// ---------------------------------------------------------------------------
// Gradients

GradientMethod default_gradient_method(const Model& model) {
  return model.has_gradient() ? GradientMethod::analytic() : GradientMethod::forward();
}

namespace {

double fd_step(const GradientMethod& method, double x) {
  return std::max(method.relative_step * std::abs(x), method.absolute_floor);
}

void validate(const GradientMethod& method) {
  if (method.kind != GradientMethod::Kind::Analytic &&
      !(method.relative_step > 0.0 && method.absolute_floor > 0.0)) {
    throw DomainError("gradient: finite-difference steps must be positive");
  }
}

}  // namespace

std::vector<double> gradient(const Model& model, std::span<const double> x,
                             const GradientMethod& method) {
  Matrix points(1, x.size());
  std::copy(x.begin(), x.end(), points.row(0).begin());
  const Matrix g = gradients(model, points, method, 1);
  return {g.row(0).begin(), g.row(0).end()};
}

Matrix gradients(const Model& model, const Matrix& points, const GradientMethod& method,
                 std::size_t workers) {
  validate(method);
  const std::size_t n = points.rows();
  const std::size_t d = model.dimension();
  if (points.cols() != d) {
    throw ShapeError("gradients: points have " + std::to_string(points.cols()) +
                     " columns, model '" + model.name() + "' expects " + std::to_string(d));
  }
  Matrix out(n, d);
  if (method.kind == GradientMethod::Kind::Analytic) {
    if (!model.has_gradient()) {
      throw CapabilityError("model '" + model.name() + "' has no analytic gradient");
    }
    for (std::size_t i = 0; i < n; ++i) model.gradient(points.row(i), out.row(i));
    return out;
  }

  const bool central = method.kind == GradientMethod::Kind::CentralFD;
  const std::size_t per_point = central ? 2 * d : d + 1;
  constexpr std::size_t kBlock = 4096;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t stop = std::min(n, start + kBlock);
    Matrix stencil((stop - start) * per_point, d);
    for (std::size_t i = start; i < stop; ++i) {
      const auto x = points.row(i);
      std::size_t r = (i - start) * per_point;
      if (!central) {
        std::copy(x.begin(), x.end(), stencil.row(r++).begin());
      }
      for (std::size_t j = 0; j < d; ++j) {
        const double h = fd_step(method, x[j]);
        auto plus = stencil.row(r++);
        std::copy(x.begin(), x.end(), plus.begin());
        plus[j] += h;
        if (central) {
          auto minus = stencil.row(r++);
          std::copy(x.begin(), x.end(), minus.begin());
          minus[j] -= h;
        }
      }
    }
    const std::vector<double> y = model.evaluate_rows(stencil, workers);
    for (std::size_t i = start; i < stop; ++i) {
      const auto x = points.row(i);
      const std::size_t base = (i - start) * per_point;
      for (std::size_t j = 0; j < d; ++j) {
        // Use the step actually representable in floating point.
        const double h = fd_step(method, x[j]);
        if (central) {
          const double hp = (x[j] + h) - x[j];
          const double hm = x[j] - (x[j] - h);
          out(i, j) = (y[base + 2 * j] - y[base + 2 * j + 1]) / (hp + hm);
        } else {
          const double hp = (x[j] + h) - x[j];
          out(i, j) = (y[base + 1 + j] - y[base]) / hp;
        }
      }
    }
  }
  return out;
}

}  // namespace dgsmlab
