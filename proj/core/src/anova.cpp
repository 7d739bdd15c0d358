#include "dgsmlab/anova.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dgsmlab/error.hpp"
#include "dgsmlab/quadrature.hpp"

namespace dgsmlab {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 25;

// Tensor grid in probability space: node values per axis and weights.
struct TensorGrid {
  std::size_t nodes = 0;
  std::size_t dimension = 0;
  std::vector<std::vector<double>> x;  // x[j][k] = quantile_j(p_k)
  std::vector<double> w;

  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t j = 0; j < dimension; ++j) s *= nodes;
    return s;
  }
  // Axis indices of a flat index (axis 0 fastest).
  void unflatten(std::size_t idx, std::vector<std::size_t>& k) const {
    for (std::size_t j = 0; j < dimension; ++j) {
      k[j] = idx % nodes;
      idx /= nodes;
    }
  }
};

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (p > kMaxGridPoints / base) {
      throw CapacityError("quadrature grid of " + std::to_string(base) + "^" +
                          std::to_string(exp) + " points exceeds the limit");
    }
    p *= base;
  }
  return p;
}

TensorGrid make_grid(const InputSpace& space, std::size_t nodes) {
  if (nodes == 0) throw DomainError("quadrature: need at least one node per dimension");
  const QuadratureRule rule = gauss_legendre_unit(nodes);
  TensorGrid g;
  g.nodes = nodes;
  g.dimension = space.dimension();
  g.w = rule.weights;
  g.x.resize(g.dimension);
  for (std::size_t j = 0; j < g.dimension; ++j) {
    g.x[j].resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) g.x[j][k] = quantile(space.marginals[j], rule.nodes[k]);
  }
  return g;
}

Matrix grid_points(const TensorGrid& g) {
  Matrix pts(g.size(), g.dimension);
  std::vector<std::size_t> k(g.dimension);
  for (std::size_t idx = 0; idx < pts.rows(); ++idx) {
    g.unflatten(idx, k);
    for (std::size_t j = 0; j < g.dimension; ++j) pts(idx, j) = g.x[j][k[j]];
  }
  return pts;
}

void check_model(const Model& model, const InputSpace& space) {
  if (model.dimension() != space.dimension()) {
    throw ShapeError("quadrature: model '" + model.name() + "' has dimension " +
                     std::to_string(model.dimension()) + ", input space has " +
                     std::to_string(space.dimension()));
  }
}

// Flat index of the projection of k onto the axes in `mask`.
std::size_t project(const std::vector<std::size_t>& k, unsigned mask, std::size_t nodes) {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (mask & (1u << j)) {
      idx += k[j] * stride;
      stride *= nodes;
    }
  }
  return idx;
}

double weight_over(const std::vector<std::size_t>& k, unsigned mask, const std::vector<double>& w) {
  double p = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (mask & (1u << j)) p *= w[k[j]];
  }
  return p;
}

}  // namespace

const AnovaComponent& AnovaDecomposition::component(unsigned mask) const {
  for (const auto& c : components) {
    if (c.mask == mask) return c;
  }
  throw DomainError("anova: no component with mask " + std::to_string(mask));
}

const AnovaComponent& AnovaDecomposition::component(std::initializer_list<std::size_t> inputs) const {
  unsigned mask = 0;
  for (std::size_t j : inputs) mask |= 1u << j;
  return component(mask);
}

AnovaDecomposition anova_oracle(const Model& model, const InputSpace& space,
                                std::size_t nodes_per_dim) {
  check_model(model, space);
  const std::size_t d = space.dimension();
  if (d == 0 || d > kAnovaMaxDimension) {
    throw CapacityError("anova_oracle: supports 1 to 3 inputs, got " + std::to_string(d));
  }
  const TensorGrid grid = make_grid(space, nodes_per_dim);
  checked_power(nodes_per_dim, d);
  const std::vector<double> f = model.evaluate_rows(grid_points(grid));
  const std::size_t total = grid.size();
  const unsigned full = (1u << d) - 1u;
  const std::size_t n = grid.nodes;

  // Conditional expectations g_u(x_u) = E[f | x_u] on the u-subgrid.
  std::vector<std::vector<double>> cond(full + 1);
  std::vector<std::size_t> k(d);
  for (unsigned u = 0; u <= full; ++u) {
    cond[u].assign(checked_power(n, static_cast<std::size_t>(std::popcount(u))), 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      grid.unflatten(idx, k);
      cond[u][project(k, u, n)] += weight_over(k, full & ~u, grid.w) * f[idx];
    }
  }

  // Components by inclusion-exclusion: f_u = sum_{v subset u} (-1)^{|u|-|v|} g_v.
  std::vector<std::vector<double>> comp(full + 1);
  for (unsigned u = 0; u <= full; ++u) {
    comp[u].assign(cond[u].size(), 0.0);
    std::vector<std::size_t> ku(d, 0);
    for (std::size_t pidx = 0; pidx < comp[u].size(); ++pidx) {
      // Expand the u-subgrid index back to axis indices.
      std::size_t rest = pidx;
      for (std::size_t j = 0; j < d; ++j) {
        if (u & (1u << j)) {
          ku[j] = rest % n;
          rest /= n;
        } else {
          ku[j] = 0;
        }
      }
      double value = 0.0;
      for (unsigned v = u;; v = (v - 1) & u) {
        const int sign = ((std::popcount(u) - std::popcount(v)) % 2 == 0) ? 1 : -1;
        value += sign * cond[v][project(ku, v, n)];
        if (v == 0) break;
      }
      comp[u][pidx] = value;
    }
  }

  AnovaDecomposition out;
  out.dimension = d;
  out.mean = cond[0][0];
  double variance = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    grid.unflatten(idx, k);
    const double c = f[idx] - out.mean;
    variance += weight_over(k, full, grid.w) * c * c;
  }
  out.variance = variance;

  std::vector<double> dvar(full + 1, 0.0);
  for (unsigned u = 1; u <= full; ++u) {
    double s = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      grid.unflatten(idx, k);
      const std::size_t p = project(k, u, n);
      // Weights of the axes outside u sum to one.
      s += weight_over(k, full, grid.w) * comp[u][p] * comp[u][p];
    }
    dvar[u] = s;
  }

  double residual = 0.0;
  for (unsigned u = 1; u <= full; ++u) {
    for (unsigned v = u + 1; v <= full; ++v) {
      double s = 0.0;
      for (std::size_t idx = 0; idx < total; ++idx) {
        grid.unflatten(idx, k);
        s += weight_over(k, full, grid.w) * comp[u][project(k, u, n)] * comp[v][project(k, v, n)];
      }
      residual = std::max(residual, std::abs(s));
    }
  }
  out.max_orthogonality_residual = variance > 0.0 ? residual / variance : residual;

  for (unsigned u = 1; u <= full; ++u) {
    AnovaComponent c;
    c.mask = u;
    c.variance = dvar[u];
    for (unsigned v = 1; v <= full; ++v) {
      if ((v & u) == u) c.total_variance += dvar[v];
    }
    if (variance > 0.0) {
      c.first_order = c.variance / variance;
      c.total = c.total_variance / variance;
    }
    out.components.push_back(c);
  }
  return out;
}

double total_variance_quadrature(const Model& model, const InputSpace& space, std::size_t input,
                                 std::size_t nodes_per_dim) {
  check_model(model, space);
  const std::size_t d = space.dimension();
  if (input >= d) throw DomainError("total_variance_quadrature: input index out of range");
  checked_power(nodes_per_dim, d + 1);
  const TensorGrid grid = make_grid(space, nodes_per_dim);
  const std::vector<double> f = model.evaluate_rows(grid_points(grid));
  const std::size_t n = grid.nodes;
  std::size_t stride = 1;
  for (std::size_t j = 0; j < input; ++j) stride *= n;

  std::vector<std::size_t> k(d);
  double s = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    grid.unflatten(idx, k);
    const double w = weight_over(k, (1u << d) - 1u, grid.w);
    const std::size_t base = idx - k[input] * stride;
    for (std::size_t kp = 0; kp < n; ++kp) {
      const double diff = f[idx] - f[base + kp * stride];
      s += w * grid.w[kp] * 0.5 * diff * diff;
    }
  }
  return s;
}

QuadratureDgsm dgsm_quadrature(const Model& model, const InputSpace& space,
                               std::size_t nodes_per_dim, const WeightFunction& weight) {
  check_model(model, space);
  const std::size_t d = space.dimension();
  checked_power(nodes_per_dim, d);
  const TensorGrid grid = make_grid(space, nodes_per_dim);
  const Matrix pts = grid_points(grid);
  const Matrix g = gradients(model, pts, GradientMethod::analytic());
  QuadratureDgsm out{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<std::size_t> k(d);
  for (std::size_t idx = 0; idx < pts.rows(); ++idx) {
    grid.unflatten(idx, k);
    const double w = weight_over(k, (1u << d) - 1u, grid.w);
    for (std::size_t j = 0; j < d; ++j) {
      const double sq = g(idx, j) * g(idx, j);
      out.nu[j] += w * sq;
      out.tau[j] += w * sq * weight(pts(idx, j));
    }
  }
  return out;
}

}  // namespace dgsmlab
