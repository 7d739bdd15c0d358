#include "dgsmlab/pipeline.hpp"

#include <algorithm>
#include <string>

#include "dgsmlab/error.hpp"

namespace dgsmlab {

namespace {

void validate(const AnalysisPlan& plan) {
  if (!plan.model) throw DomainError("analysis: no model");
  if (plan.model->dimension() != plan.space.dimension()) {
    throw ShapeError("analysis: model '" + plan.model->name() + "' takes " +
                     std::to_string(plan.model->dimension()) + " inputs, input space has " +
                     std::to_string(plan.space.dimension()));
  }
  if (plan.n_sobol < 2) throw DomainError("analysis: n_sobol must be at least 2");
  if (plan.n_dgsm < 1) throw DomainError("analysis: n_dgsm must be at least 1");
  if (plan.replicates < 1) throw DomainError("analysis: replicates must be at least 1");
}

}  // namespace

std::string gradient_label(const GradientMethod& method) {
  switch (method.kind) {
    case GradientMethod::Kind::Analytic:
      return "analytic";
    case GradientMethod::Kind::ForwardFD:
      return "forward_fd";
    case GradientMethod::Kind::CentralFD:
      return "central_fd";
  }
  return "unknown";
}

DesignOutputs evaluate_design(const Model& model, const PickFreezeDesign& design,
                              std::size_t workers) {
  const std::size_t n = design.rows();
  const std::size_t d = design.dimension();
  Matrix stacked(n * (d + 2), d);
  const auto copy_block = [&](const Matrix& m, std::size_t block) {
    std::copy(m.data().begin(), m.data().end(), stacked.data().begin() + block * n * d);
  };
  copy_block(design.a, 0);
  copy_block(design.b, 1);
  for (std::size_t j = 0; j < d; ++j) copy_block(design.ab[j], j + 2);

  const std::vector<double> y = model.evaluate_rows(stacked, workers);
  if (y.size() != stacked.rows()) {
    throw EvaluationError("model '" + model.name() + "' returned " + std::to_string(y.size()) +
                              " outputs for " + std::to_string(stacked.rows()) + " rows",
                          "");
  }
  DesignOutputs out;
  const auto block = [&](std::size_t k) {
    return std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(k * n),
                               y.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  };
  out.ya = block(0);
  out.yb = block(1);
  for (std::size_t j = 0; j < d; ++j) out.yab.push_back(block(j + 2));
  return out;
}

SensitivityReport run_analysis(const AnalysisPlan& plan) {
  validate(plan);
  const Model& model = *plan.model;
  const std::size_t d = plan.space.dimension();
  const std::size_t reps = plan.replicates;

  std::vector<std::vector<double>> s(d), st(d);
  std::vector<double> variances;
  for (std::size_t r = 0; r < reps; ++r) {
    const UnitPair pair = replicate_unit_pair(plan.sobol_sampler, plan.n_sobol, d, plan.seed, r,
                                              reps, plan.skip_first_point);
    const PickFreezeDesign design = pick_freeze(pair.a, pair.b, plan.space);
    const DesignOutputs y = evaluate_design(model, design, plan.workers);
    const SobolEstimate est = estimate_sobol(y.ya, y.yb, y.yab);
    variances.push_back(est.variance);
    for (std::size_t j = 0; j < d; ++j) {
      s[j].push_back(est.first_order[j].value);
      st[j].push_back(est.total[j].value);
    }
  }
  const ReplicateSummary variance = summarize(variances);

  SamplingOptions options;
  options.skip_first_point = plan.skip_first_point;
  const UnitSample unit =
      generate_unit(plan.dgsm_sampler, plan.n_dgsm, d, plan.seed + 2 * reps, options);
  const Matrix points = transform(unit, plan.space);
  const GradientMethod method = plan.gradient.value_or(default_gradient_method(model));
  const Matrix grads = gradients(model, points, method, plan.workers);
  const std::vector<IndexEstimate> nu = dgsm_nu(grads);
  std::vector<double> tau;
  if (plan.compute_tau) tau = dgsm_tau(grads, points, plan.weight);

  SensitivityReport report;
  report.model = model.name();
  report.variance = variance.mean;
  report.n_sobol = plan.n_sobol;
  report.n_dgsm = plan.n_dgsm;
  report.replicates = reps;
  report.seed = plan.seed;
  report.sobol_sampler = std::string(to_string(plan.sobol_sampler));
  report.dgsm_sampler = std::string(to_string(plan.dgsm_sampler));
  report.gradient = gradient_label(method);
  report.constant_policy = std::string(to_string(plan.constant_policy));
  for (std::size_t j = 0; j < d; ++j) {
    InputRecord rec;
    rec.name = plan.space.names[j];
    rec.distribution = describe(plan.space.marginals[j]);
    rec.first_order = summarize(s[j]);
    rec.total = summarize(st[j]);
    rec.nu = nu[j].value;
    rec.nu_standard_error = nu[j].standard_error;
    if (plan.compute_tau) rec.tau = tau[j];
    rec.constant = poincare_constant(plan.space.marginals[j], plan.constant_policy);
    rec.upsilon = upsilon(rec.nu, rec.constant, report.variance);
    rec.upsilon_standard_error = rec.constant.c * rec.nu_standard_error / report.variance;
    report.inputs.push_back(std::move(rec));
  }
  check_consistency(report);
  return report;
}

}  // namespace dgsmlab
