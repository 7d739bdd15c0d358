#pragma once

// One-dimensional input laws and their Poincaré/Cheeger constants.
//
// Every marginal exposes density, distribution function, quantile, median
// and the potential v with rho(x) = c exp(-v(x)). The Cheeger constant
//
//     C1 = sup_x min(F(x), 1 - F(x)) / rho(x)
//
// bounds the one-dimensional Poincaré constant through C = 4 C1^2, which in
// turn bounds the total-effect variance of an input: D_j^tot <= C nu_j.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dgsmlab {

struct Uniform {
  double a;
  double b;
  Uniform(double a, double b);
};

struct Normal {
  double mu;
  double sigma;
  Normal(double mu, double sigma);
};

struct TruncatedNormal {
  double mu;
  double sigma;
  double lo;
  double hi;
  TruncatedNormal(double mu, double sigma, double lo,
                  double hi = std::numeric_limits<double>::infinity());
};

struct Exponential {
  double lambda;
  explicit Exponential(double lambda);
};

struct Beta {
  double alpha;
  double beta;
  Beta(double alpha, double beta);
};

// Shape `alpha`, scale `beta`.
struct GammaDist {
  double alpha;
  double beta;
  GammaDist(double alpha, double beta);
};

struct Gumbel {
  double mu;
  double beta;
  Gumbel(double mu, double beta);
};

struct TruncatedGumbel {
  double mu;
  double beta;
  double lo;
  double hi;
  TruncatedGumbel(double mu, double beta, double lo, double hi);
};

// Shape `k`, scale `lambda`.
struct Weibull {
  double k;
  double lambda;
  Weibull(double k, double lambda);
};

// Lower bound `a`, mode `c`, upper bound `b`.
struct Triangular {
  double a;
  double c;
  double b;
  Triangular(double a, double c, double b);
};

using Marginal = std::variant<Uniform, Normal, TruncatedNormal, Exponential, Beta, GammaDist,
                              Gumbel, TruncatedGumbel, Weibull, Triangular>;

// Independent inputs: mu(x) = prod_j mu_j(x_j).
struct InputSpace {
  std::vector<std::string> names;
  std::vector<Marginal> marginals;

  InputSpace() = default;
  InputSpace(std::vector<std::string> names, std::vector<Marginal> marginals);
  // Names default to X1..Xd.
  explicit InputSpace(std::vector<Marginal> marginals);

  std::size_t dimension() const noexcept { return marginals.size(); }
};

double pdf(const Marginal& m, double x);
double cdf(const Marginal& m, double x);
// Throws DomainError unless 0 < p < 1.
double quantile(const Marginal& m, double p);
// Inverse-CDF sampling; identical to quantile.
double sample(const Marginal& m, double u);
// v(x) such that rho = c exp(-v). Tabulated closed forms for the classical
// log-concave families (these omit normalizing constants, as tabulated);
// -log pdf otherwise. Throws DomainError outside the closed support.
double potential(const Marginal& m, double x);
double median(const Marginal& m);

// Closed support [lo, hi]; infinite ends for unbounded laws.
std::pair<double, double> support(const Marginal& m);
std::string_view family_name(const Marginal& m);
std::string describe(const Marginal& m);
bool is_log_concave(const Marginal& m);

// Tabulated closed-form Cheeger constant: Normal sigma/2, Exponential 1/lambda,
// Gumbel beta/log 2, Weibull lambda (log 2)^((1-k)/k) / k. Empty otherwise.
std::optional<double> cheeger_analytic(const Marginal& m);

struct CheegerSearch {
  double c1;        // supremum of min(F, 1 - F) / rho
  double location;  // where it is attained (leftmost maximiser on ties)
  double grid_step; // spacing of the coarse grid around `location`
};

// Dense 4096-point grid over [q(1e-6), q(1 - 1e-6)] followed by golden-section
// refinement of the two cells adjacent to the best node. Throws
// UnsupportedMeasureError when the density vanishes on the grid or is
// unbounded (Gamma with alpha < 1).
CheegerSearch cheeger_search(const Marginal& m, double tol = 1e-10);
double cheeger_numeric(const Marginal& m, double tol = 1e-10);

enum class ConstantMethod { SharpKnown, AnalyticCheeger, NumericCheeger };
enum class ConstantPolicy { PreferSharp, CheegerOnly };

std::string_view to_string(ConstantMethod method);
std::string_view to_string(ConstantPolicy policy);

struct PoincareConstant {
  double c1 = 0.0;  // Cheeger constant
  double c = 0.0;   // constant used in the bound
  ConstantMethod method = ConstantMethod::NumericCheeger;
};

// PreferSharp: Uniform (b-a)^2/pi^2 and Normal sigma^2 (both sharp), else
// 4 C1^2 with C1 analytic when tabulated, numeric otherwise.
// CheegerOnly: 4 C1^2 from the supremum formula for every law except Uniform,
// whose density is discontinuous on R and keeps (b-a)^2/pi^2.
PoincareConstant poincare_constant(const Marginal& m,
                                   ConstantPolicy policy = ConstantPolicy::PreferSharp);

}  // namespace dgsmlab
