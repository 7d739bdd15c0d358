#include "dgsmlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dgsmlab/error.hpp"

namespace dgsmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite(double x) { return std::isfinite(x); }

// Standard normal helpers.
double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}
double normal_isf(double q) { return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q); }

double gumbel_cdf(double mu, double beta, double x) {
  return std::exp(-std::exp(-(x - mu) / beta));
}
double gumbel_pdf(double mu, double beta, double x) {
  const double z = (x - mu) / beta;
  return std::exp(-z - std::exp(-z)) / beta;
}
double gumbel_quantile(double mu, double beta, double p) {
  return mu - beta * std::log(-std::log(p));
}

// Truncated normal in standardized units: mass on [za, zb] handled in the
// tail where it is better conditioned.
struct TruncNormalFrame {
  double za;
  double zb;
  bool upper;  // work with survival functions
  double mass;

  explicit TruncNormalFrame(const TruncatedNormal& t)
      : za((t.lo - t.mu) / t.sigma),
        zb(std::isinf(t.hi) ? kInf : (t.hi - t.mu) / t.sigma),
        upper(za > 0.0),
        mass(upper ? normal_sf(za) - normal_sf(zb) : normal_cdf(zb) - normal_cdf(za)) {}

  double cdf_z(double z) const {
    if (upper) return (normal_sf(za) - normal_sf(z)) / mass;
    return (normal_cdf(z) - normal_cdf(za)) / mass;
  }
  double quantile_z(double p) const {
    if (upper) return normal_isf(normal_sf(za) - p * mass);
    return normal_quantile(normal_cdf(za) + p * mass);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

Uniform::Uniform(double a_, double b_) : a(a_), b(b_) {
  require(finite(a) && finite(b) && a < b, "uniform: need finite a < b");
}

Normal::Normal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  require(finite(mu) && finite(sigma) && sigma > 0.0, "normal: need sigma > 0");
}

TruncatedNormal::TruncatedNormal(double mu_, double sigma_, double lo_, double hi_)
    : mu(mu_), sigma(sigma_), lo(lo_), hi(hi_) {
  require(finite(mu) && finite(sigma) && sigma > 0.0, "truncated normal: need sigma > 0");
  require(!std::isnan(lo) && !std::isnan(hi) && lo < hi, "truncated normal: need lo < hi");
  require(!(std::isinf(lo) && std::isinf(hi)), "truncated normal: use normal for no truncation");
}

Exponential::Exponential(double lambda_) : lambda(lambda_) {
  require(finite(lambda) && lambda > 0.0, "exponential: need lambda > 0");
}

Beta::Beta(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  require(finite(alpha) && finite(beta) && alpha >= 1.0 && beta >= 1.0,
          "beta: need alpha >= 1 and beta >= 1");
}

GammaDist::GammaDist(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  require(finite(alpha) && finite(beta) && alpha > 0.0 && beta > 0.0,
          "gamma: need shape > 0 and scale > 0");
}

Gumbel::Gumbel(double mu_, double beta_) : mu(mu_), beta(beta_) {
  require(finite(mu) && finite(beta) && beta > 0.0, "gumbel: need beta > 0");
}

TruncatedGumbel::TruncatedGumbel(double mu_, double beta_, double lo_, double hi_)
    : mu(mu_), beta(beta_), lo(lo_), hi(hi_) {
  require(finite(mu) && finite(beta) && beta > 0.0, "truncated gumbel: need beta > 0");
  require(!std::isnan(lo) && !std::isnan(hi) && lo < hi, "truncated gumbel: need lo < hi");
}

Weibull::Weibull(double k_, double lambda_) : k(k_), lambda(lambda_) {
  require(finite(k) && finite(lambda) && k >= 1.0 && lambda > 0.0,
          "weibull: need k >= 1 and lambda > 0");
}

Triangular::Triangular(double a_, double c_, double b_) : a(a_), c(c_), b(b_) {
  require(finite(a) && finite(b) && finite(c) && a < b && a <= c && c <= b,
          "triangular: need a <= c <= b and a < b");
}

InputSpace::InputSpace(std::vector<std::string> names_, std::vector<Marginal> marginals_)
    : names(std::move(names_)), marginals(std::move(marginals_)) {
  require(names.size() == marginals.size(), "input space: one name per marginal");
}

InputSpace::InputSpace(std::vector<Marginal> marginals_) : marginals(std::move(marginals_)) {
  names.reserve(marginals.size());
  for (std::size_t j = 0; j < marginals.size(); ++j) names.push_back("X" + std::to_string(j + 1));
}

// ---------------------------------------------------------------------------
// Density, distribution, quantile

std::pair<double, double> support(const Marginal& m) {
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return std::pair{u.a, u.b}; },
          [](const Normal&) { return std::pair{-kInf, kInf}; },
          [](const TruncatedNormal& t) { return std::pair{t.lo, t.hi}; },
          [](const Exponential&) { return std::pair{0.0, kInf}; },
          [](const Beta&) { return std::pair{0.0, 1.0}; },
          [](const GammaDist&) { return std::pair{0.0, kInf}; },
          [](const Gumbel&) { return std::pair{-kInf, kInf}; },
          [](const TruncatedGumbel& t) { return std::pair{t.lo, t.hi}; },
          [](const Weibull&) { return std::pair{0.0, kInf}; },
          [](const Triangular& t) { return std::pair{t.a, t.b}; },
      },
      m);
}

double pdf(const Marginal& m, double x) {
  const auto [lo, hi] = support(m);
  if (std::isnan(x) || x < lo || x > hi) return 0.0;
  return std::visit(
      Overloaded{
          [&](const Uniform& u) { return 1.0 / (u.b - u.a); },
          [&](const Normal& n) { return phi((x - n.mu) / n.sigma) / n.sigma; },
          [&](const TruncatedNormal& t) {
            const TruncNormalFrame f(t);
            return phi((x - t.mu) / t.sigma) / (t.sigma * f.mass);
          },
          [&](const Exponential& e) { return e.lambda * std::exp(-e.lambda * x); },
          [&](const Beta& b) { return boost::math::ibeta_derivative(b.alpha, b.beta, x); },
          [&](const GammaDist& g) {
            if (x == 0.0) {
              if (g.alpha < 1.0) return kInf;
              return g.alpha == 1.0 ? 1.0 / g.beta : 0.0;
            }
            return boost::math::gamma_p_derivative(g.alpha, x / g.beta) / g.beta;
          },
          [&](const Gumbel& g) { return gumbel_pdf(g.mu, g.beta, x); },
          [&](const TruncatedGumbel& t) {
            const double mass = gumbel_cdf(t.mu, t.beta, t.hi) - gumbel_cdf(t.mu, t.beta, t.lo);
            return gumbel_pdf(t.mu, t.beta, x) / mass;
          },
          [&](const Weibull& w) {
            if (x == 0.0) {
              if (w.k < 1.0) return kInf;
              return w.k == 1.0 ? 1.0 / w.lambda : 0.0;
            }
            const double r = x / w.lambda;
            return (w.k / w.lambda) * std::pow(r, w.k - 1.0) * std::exp(-std::pow(r, w.k));
          },
          [&](const Triangular& t) {
            const double width = t.b - t.a;
            if (x < t.c) return 2.0 * (x - t.a) / (width * (t.c - t.a));
            if (x > t.c) return 2.0 * (t.b - x) / (width * (t.b - t.c));
            return 2.0 / width;
          },
      },
      m);
}

double cdf(const Marginal& m, double x) {
  const auto [lo, hi] = support(m);
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return std::visit(
      Overloaded{
          [&](const Uniform& u) { return (x - u.a) / (u.b - u.a); },
          [&](const Normal& n) { return normal_cdf((x - n.mu) / n.sigma); },
          [&](const TruncatedNormal& t) {
            return TruncNormalFrame(t).cdf_z((x - t.mu) / t.sigma);
          },
          [&](const Exponential& e) { return -std::expm1(-e.lambda * x); },
          [&](const Beta& b) { return boost::math::ibeta(b.alpha, b.beta, x); },
          [&](const GammaDist& g) { return boost::math::gamma_p(g.alpha, x / g.beta); },
          [&](const Gumbel& g) { return gumbel_cdf(g.mu, g.beta, x); },
          [&](const TruncatedGumbel& t) {
            const double flo = gumbel_cdf(t.mu, t.beta, t.lo);
            const double fhi = gumbel_cdf(t.mu, t.beta, t.hi);
            return (gumbel_cdf(t.mu, t.beta, x) - flo) / (fhi - flo);
          },
          [&](const Weibull& w) { return -std::expm1(-std::pow(x / w.lambda, w.k)); },
          [&](const Triangular& t) {
            const double width = t.b - t.a;
            if (x <= t.c) return (x - t.a) * (x - t.a) / (width * (t.c - t.a));
            return 1.0 - (t.b - x) * (t.b - x) / (width * (t.b - t.c));
          },
      },
      m);
}

double quantile(const Marginal& m, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: probability must lie in (0, 1), got " + std::to_string(p));
  }
  const double x = std::visit(
      Overloaded{
          [&](const Uniform& u) { return u.a + p * (u.b - u.a); },
          [&](const Normal& n) { return n.mu + n.sigma * normal_quantile(p); },
          [&](const TruncatedNormal& t) {
            return t.mu + t.sigma * TruncNormalFrame(t).quantile_z(p);
          },
          [&](const Exponential& e) { return -std::log1p(-p) / e.lambda; },
          [&](const Beta& b) { return boost::math::ibeta_inv(b.alpha, b.beta, p); },
          [&](const GammaDist& g) { return g.beta * boost::math::gamma_p_inv(g.alpha, p); },
          [&](const Gumbel& g) { return gumbel_quantile(g.mu, g.beta, p); },
          [&](const TruncatedGumbel& t) {
            const double flo = gumbel_cdf(t.mu, t.beta, t.lo);
            const double fhi = gumbel_cdf(t.mu, t.beta, t.hi);
            return gumbel_quantile(t.mu, t.beta, flo + p * (fhi - flo));
          },
          [&](const Weibull& w) { return w.lambda * std::pow(-std::log1p(-p), 1.0 / w.k); },
          [&](const Triangular& t) {
            const double width = t.b - t.a;
            const double fc = (t.c - t.a) / width;
            if (p <= fc) return t.a + std::sqrt(p * width * (t.c - t.a));
            return t.b - std::sqrt((1.0 - p) * width * (t.b - t.c));
          },
      },
      m);
  const auto [lo, hi] = support(m);
  return std::clamp(x, lo, hi);
}

double sample(const Marginal& m, double u) { return quantile(m, u); }

double median(const Marginal& m) {
  return std::visit(
      Overloaded{
          [](const Uniform& u) { return 0.5 * (u.a + u.b); },
          [](const Normal& n) { return n.mu; },
          [](const Exponential& e) { return std::numbers::ln2 / e.lambda; },
          [](const Gumbel& g) { return g.mu - g.beta * std::log(std::numbers::ln2); },
          [](const Weibull& w) { return w.lambda * std::pow(std::numbers::ln2, 1.0 / w.k); },
          [&](const auto&) { return quantile(m, 0.5); },
      },
      m);
}

double potential(const Marginal& m, double x) {
  const auto [lo, hi] = support(m);
  if (std::isnan(x) || x < lo || x > hi) {
    throw DomainError("potential: x = " + std::to_string(x) + " outside the support of " +
                      describe(m));
  }
  const auto minus_log_pdf = [&]() {
    const double density = pdf(m, x);
    if (!(density > 0.0)) {
      throw DomainError("potential: density vanishes at x = " + std::to_string(x));
    }
    return -std::log(density);
  };
  return std::visit(
      Overloaded{
          [&](const Normal& n) {
            const double z = x - n.mu;
            return z * z / (2.0 * n.sigma * n.sigma) + std::log(n.sigma);
          },
          [&](const Exponential& e) { return e.lambda * x - std::log(e.lambda); },
          [&](const Beta& b) {
            return (1.0 - b.alpha) * std::log(x) + (1.0 - b.beta) * std::log1p(-x);
          },
          [&](const GammaDist& g) {
            return (1.0 - g.alpha) * std::log(x) + std::lgamma(g.alpha) + x / g.beta +
                   g.alpha * std::log(g.beta);
          },
          [&](const Gumbel& g) {
            const double z = (x - g.mu) / g.beta;
            return z + std::log(g.beta) + std::exp(-z);
          },
          [&](const Weibull& w) {
            const double r = x / w.lambda;
            return std::log(w.lambda / w.k) + (1.0 - w.k) * std::log(r) + std::pow(r, w.k);
          },
          [&](const auto&) { return minus_log_pdf(); },
      },
      m);
}

std::string_view family_name(const Marginal& m) {
  return std::visit(
      Overloaded{
          [](const Uniform&) { return std::string_view{"uniform"}; },
          [](const Normal&) { return std::string_view{"normal"}; },
          [](const TruncatedNormal&) { return std::string_view{"truncated_normal"}; },
          [](const Exponential&) { return std::string_view{"exponential"}; },
          [](const Beta&) { return std::string_view{"beta"}; },
          [](const GammaDist&) { return std::string_view{"gamma"}; },
          [](const Gumbel&) { return std::string_view{"gumbel"}; },
          [](const TruncatedGumbel&) { return std::string_view{"truncated_gumbel"}; },
          [](const Weibull&) { return std::string_view{"weibull"}; },
          [](const Triangular&) { return std::string_view{"triangular"}; },
      },
      m);
}

std::string describe(const Marginal& m) {
  std::ostringstream os;
  os.precision(6);
  os << family_name(m) << '(';
  std::visit(Overloaded{
                 [&](const Uniform& u) { os << "a=" << u.a << ", b=" << u.b; },
                 [&](const Normal& n) { os << "mu=" << n.mu << ", sigma=" << n.sigma; },
                 [&](const TruncatedNormal& t) {
                   os << "mu=" << t.mu << ", sigma=" << t.sigma << ", lo=" << t.lo
                      << ", hi=" << t.hi;
                 },
                 [&](const Exponential& e) { os << "lambda=" << e.lambda; },
                 [&](const Beta& b) { os << "alpha=" << b.alpha << ", beta=" << b.beta; },
                 [&](const GammaDist& g) { os << "alpha=" << g.alpha << ", beta=" << g.beta; },
                 [&](const Gumbel& g) { os << "mu=" << g.mu << ", beta=" << g.beta; },
                 [&](const TruncatedGumbel& t) {
                   os << "mu=" << t.mu << ", beta=" << t.beta << ", lo=" << t.lo
                      << ", hi=" << t.hi;
                 },
                 [&](const Weibull& w) { os << "k=" << w.k << ", lambda=" << w.lambda; },
                 [&](const Triangular& t) {
                   os << "a=" << t.a << ", c=" << t.c << ", b=" << t.b;
                 },
             },
             m);
  os << ')';
  return os.str();
}

bool is_log_concave(const Marginal& m) {
  return std::visit(Overloaded{
                        [](const GammaDist& g) { return g.alpha >= 1.0; },
                        [](const Weibull& w) { return w.k >= 1.0; },
                        [](const auto&) { return true; },
                    },
                    m);
}

// ---------------------------------------------------------------------------
// Cheeger and Poincaré constants

std::optional<double> cheeger_analytic(const Marginal& m) {
  return std::visit(
      Overloaded{
          [](const Normal& n) -> std::optional<double> { return n.sigma / 2.0; },
          [](const Exponential& e) -> std::optional<double> { return 1.0 / e.lambda; },
          [](const Gumbel& g) -> std::optional<double> { return g.beta / std::numbers::ln2; },
          [](const Weibull& w) -> std::optional<double> {
            if (w.k < 1.0) return std::nullopt;
            return w.lambda * std::pow(std::numbers::ln2, (1.0 - w.k) / w.k) / w.k;
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      m);
}

namespace {

constexpr std::size_t kCheegerGridPoints = 4096;
constexpr double kCheegerTail = 1e-6;

double cheeger_ratio(const Marginal& m, double x) {
  const double f = cdf(m, x);
  return std::min(f, 1.0 - f) / pdf(m, x);
}

// Maximum of the ratio on [lo, hi] by golden-section search.
std::pair<double, double> golden_max(const Marginal& m, double lo, double hi, double width_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = cheeger_ratio(m, x1);
  double f2 = cheeger_ratio(m, x2);
  for (int it = 0; it < 200 && (b - a) > width_tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = cheeger_ratio(m, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = cheeger_ratio(m, x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

CheegerSearch cheeger_search(const Marginal& m, double tol) {
  if (!(tol > 0.0)) throw DomainError("cheeger_numeric: tolerance must be positive");
  if (const auto* g = std::get_if<GammaDist>(&m); g != nullptr && g->alpha < 1.0) {
    throw UnsupportedMeasureError("cheeger_numeric: gamma with shape < 1 has an unbounded density");
  }
  if (const auto* w = std::get_if<Weibull>(&m); w != nullptr && w->k < 1.0) {
    throw UnsupportedMeasureError("cheeger_numeric: weibull with shape < 1 has an unbounded density");
  }

  const double lo = quantile(m, kCheegerTail);
  const double hi = quantile(m, 1.0 - kCheegerTail);

  // The triangular mode is a kink of the density; keep it on the grid so no
  // refinement cell straddles it.
  std::vector<double> grid;
  grid.reserve(kCheegerGridPoints + 1);
  for (std::size_t i = 0; i < kCheegerGridPoints; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(kCheegerGridPoints - 1));
  }
  if (const auto* t = std::get_if<Triangular>(&m); t != nullptr && t->c > lo && t->c < hi) {
    grid.push_back(t->c);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  std::vector<double> ratio(grid.size());
  double best = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double density = pdf(m, grid[i]);
    if (!(density > 0.0) || !std::isfinite(density)) {
      throw UnsupportedMeasureError("cheeger_numeric: density of " + describe(m) +
                                    " is not positive and finite at x = " +
                                    std::to_string(grid[i]));
    }
    ratio[i] = cheeger_ratio(m, grid[i]);
    best = std::max(best, ratio[i]);
  }

  // Leftmost node within round-off of the maximum: flat tails (exponential
  // right of its median) then resolve to the median.
  std::size_t k = 0;
  while (ratio[k] < best * (1.0 - 1e-9)) ++k;

  const double step = (hi - lo) / static_cast<double>(kCheegerGridPoints - 1);
  const double width_tol = tol * step;
  CheegerSearch out{ratio[k], grid[k], step};
  if (k > 0) {
    const auto [x, v] = golden_max(m, grid[k - 1], grid[k], width_tol);
    if (v > out.c1) out = {v, x, step};
  }
  if (k + 1 < grid.size()) {
    const auto [x, v] = golden_max(m, grid[k], grid[k + 1], width_tol);
    if (v > out.c1 * (1.0 + 1e-12)) out = {v, x, step};
  }
  return out;
}

double cheeger_numeric(const Marginal& m, double tol) { return cheeger_search(m, tol).c1; }

std::string_view to_string(ConstantMethod method) {
  switch (method) {
    case ConstantMethod::SharpKnown:
      return "sharp";
    case ConstantMethod::AnalyticCheeger:
      return "analytic_cheeger";
    case ConstantMethod::NumericCheeger:
      return "numeric_cheeger";
  }
  return "unknown";
}

std::string_view to_string(ConstantPolicy policy) {
  return policy == ConstantPolicy::PreferSharp ? "prefer_sharp" : "cheeger_only";
}

PoincareConstant poincare_constant(const Marginal& m, ConstantPolicy policy) {
  if (const auto* u = std::get_if<Uniform>(&m)) {
    const double width = u->b - u->a;
    return {width / 2.0, width * width / (std::numbers::pi * std::numbers::pi),
            ConstantMethod::SharpKnown};
  }
  if (policy == ConstantPolicy::PreferSharp) {
    if (const auto* n = std::get_if<Normal>(&m)) {
      // Cheeger value from the supremum formula, h(mu) = sigma sqrt(pi/2).
      return {n->sigma * std::sqrt(std::numbers::pi / 2.0), n->sigma * n->sigma,
              ConstantMethod::SharpKnown};
    }
    if (const auto c1 = cheeger_analytic(m)) {
      return {*c1, 4.0 * *c1 * *c1, ConstantMethod::AnalyticCheeger};
    }
  }
  const double c1 = cheeger_numeric(m);
  return {c1, 4.0 * c1 * c1, ConstantMethod::NumericCheeger};
}

}  // namespace dgsmlab
