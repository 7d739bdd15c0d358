#include "dgsmlab/estimators.hpp"

#include <cmath>
#include <string>

#include "dgsmlab/error.hpp"

namespace dgsmlab {

namespace {

// Mean and standard error of a stream of per-row terms (Welford).
struct Accumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  double standard_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

void require_variance(double variance, const char* what) {
  if (!(variance > 0.0)) {
    throw DegenerateModelError(std::string(what) + ": output variance is zero");
  }
}

double pooled_mean(std::span<const double> ya, std::span<const double> yb) {
  double s = 0.0;
  for (double v : ya) s += v;
  for (double v : yb) s += v;
  return s / static_cast<double>(ya.size() + yb.size());
}

}  // namespace

double estimate_variance(std::span<const double> ya, std::span<const double> yb) {
  require_same_length(ya.size(), yb.size(), "estimate_variance");
  if (ya.size() < 2) throw DomainError("estimate_variance: need n >= 2");
  const double mean = pooled_mean(ya, yb);
  double ss = 0.0;
  for (double v : ya) ss += (v - mean) * (v - mean);
  for (double v : yb) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(ya.size() + yb.size() - 1);
}

IndexEstimate first_order_sobol(std::span<const double> ya, std::span<const double> yb,
                                std::span<const double> yab_j, double variance) {
  require_same_length(ya.size(), yb.size(), "first_order_sobol");
  require_same_length(ya.size(), yab_j.size(), "first_order_sobol");
  require_variance(variance, "first_order_sobol");
  const double f0 = pooled_mean(ya, yb);
  Accumulator acc;
  for (std::size_t i = 0; i < ya.size(); ++i) acc.add((yb[i] - f0) * (yab_j[i] - ya[i]));
  return {acc.mean / variance, acc.standard_error() / variance};
}

IndexEstimate total_sobol(std::span<const double> ya, std::span<const double> yab_j,
                          double variance) {
  require_same_length(ya.size(), yab_j.size(), "total_sobol");
  require_variance(variance, "total_sobol");
  Accumulator acc;
  for (std::size_t i = 0; i < ya.size(); ++i) {
    const double diff = ya[i] - yab_j[i];
    acc.add(0.5 * diff * diff);
  }
  return {acc.mean / variance, acc.standard_error() / variance};
}

SobolEstimate estimate_sobol(std::span<const double> ya, std::span<const double> yb,
                             const std::vector<std::vector<double>>& yab) {
  SobolEstimate est;
  est.n = ya.size();
  est.variance = estimate_variance(ya, yb);
  require_variance(est.variance, "estimate_sobol");
  est.first_order.reserve(yab.size());
  est.total.reserve(yab.size());
  for (const auto& column : yab) {
    est.first_order.push_back(first_order_sobol(ya, yb, column, est.variance));
    est.total.push_back(total_sobol(ya, column, est.variance));
  }
  return est;
}

std::vector<IndexEstimate> dgsm_nu(const Matrix& gradients) {
  if (gradients.rows() == 0) throw DomainError("dgsm_nu: need at least one gradient");
  std::vector<IndexEstimate> nu(gradients.cols());
  for (std::size_t j = 0; j < gradients.cols(); ++j) {
    Accumulator acc;
    for (std::size_t i = 0; i < gradients.rows(); ++i) {
      const double g = gradients(i, j);
      acc.add(g * g);
    }
    nu[j] = {acc.mean, acc.standard_error()};
  }
  return nu;
}

double uniform_total_effect_weight(double x) { return (1.0 - 3.0 * x + 3.0 * x * x) / 6.0; }

std::vector<double> dgsm_tau(const Matrix& gradients, const Matrix& points,
                             const WeightFunction& weight) {
  require_same_length(gradients.rows(), points.rows(), "dgsm_tau");
  require_same_length(gradients.cols(), points.cols(), "dgsm_tau");
  if (gradients.rows() == 0) throw DomainError("dgsm_tau: need at least one gradient");
  std::vector<double> tau(gradients.cols(), 0.0);
  for (std::size_t j = 0; j < gradients.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < gradients.rows(); ++i) {
      const double g = gradients(i, j);
      s += g * g * weight(points(i, j));
    }
    tau[j] = s / static_cast<double>(gradients.rows());
  }
  return tau;
}

double upsilon(double nu, const PoincareConstant& constant, double variance) {
  require_variance(variance, "upsilon");
  return constant.c * nu / variance;
}

ReplicateSummary summarize(std::span<const double> values) {
  ReplicateSummary s;
  s.replicates = values.size();
  if (values.empty()) {
    s.sd_unavailable = true;
    return s;
  }
  Accumulator acc;
  for (double v : values) acc.add(v);
  s.mean = acc.mean;
  s.sd = values.size() > 1 ? std::sqrt(acc.m2 / static_cast<double>(values.size() - 1)) : 0.0;
  s.sd_unavailable = values.size() == 1 || s.sd == 0.0;
  return s;
}

std::vector<ReplicateSummary> replicate(
    const std::function<std::vector<double>(const ReplicateSeeds&)>& estimate,
    std::size_t replicates, std::uint64_t seed_base) {
  if (replicates == 0) throw DomainError("replicate: need at least one replicate");
  std::vector<std::vector<double>> runs;
  runs.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    runs.push_back(estimate(replicate_seeds(seed_base, r)));
    if (runs.back().size() != runs.front().size()) {
      throw ShapeError("replicate: replicates returned different numbers of indices");
    }
  }
  std::vector<ReplicateSummary> out(runs.front().size());
  std::vector<double> column(replicates);
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t r = 0; r < replicates; ++r) column[r] = runs[r][k];
    out[k] = summarize(column);
  }
  return out;
}

}  // namespace dgsmlab
