#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rkbudget/budget.hpp"
#include "rkbudget/integrator.hpp"

namespace rkbudget {

/// A named parameter set for the budget formulas. Noiseless scenarios have
/// no Sigma/dims.
struct Scenario {
  std::string name;
  ProblemBounds pb;
  double a_max = 1.0;
  double b_max = 1.0;
  double K = 5.0;
  std::optional<AnsatzDims> dims;
  std::optional<double> sigma;
  std::optional<double> eta;
  std::optional<double> s_factor;

  bool noisy() const { return sigma.has_value(); }
};

/// classical, option_pricing or tuned; throws std::invalid_argument otherwise.
Scenario scenario(std::string_view name);
std::vector<std::string> scenario_names();

/// Set one parameter by key (a_max, b_max, K, L_fy, L_ftau, M, T, epsilon,
/// Sigma, eta, S, N_V, N_d, N). Setting Sigma on a noiseless scenario makes
/// it noisy with default Ansatz dimensions.
void apply_override(Scenario& sc, std::string_view key, std::string_view value);
/// "key=value" form of apply_override.
void apply_override(Scenario& sc, std::string_view assignment);
/// key=value lines; blank lines and '#' comments are skipped.
void apply_overrides(Scenario& sc, std::istream& in);

BudgetInputs budget_inputs(const Scenario& sc);

/// dy/dtau = y/2 with y(0) = 1, solved by exp(tau/2).
struct ExpOde {
  VectorField field;
  ExactSolution exact;
  State y0;
  double tau0 = 0.0;
};
ExpOde exp_ode();

struct BlackScholesSpec {
  double sigma_vol = 0.2;
  double rate = 0.04;
  double strike = 100.0;
  double t_final = 1.0;
};

/// u = exp(-a x - b tau) V turns the Black-Scholes PDE in x = log S into
/// u_tau = u_xx / 2 over tau in [0, T].
struct HeatTransform {
  double a = 0.0;
  double b = 0.0;
  double T = 0.0;
};

HeatTransform bs_transform(const BlackScholesSpec& spec);

double payoff(double S, double strike);

/// Exact heat semigroup on a uniform grid: convolution with the Gaussian
/// kernel of variance tau, normalized on the lattice, zero outside the grid.
std::vector<double> heat_evolve(std::span<const double> u0, double dx, double tau);

/// gamma_inv * p_x * exp(a x + b t_final sigma^2).
double recover_price(double p_x, double gamma_inv, double a, double b, double t_final,
                     double sigma_vol, double x);

struct HeatPricing {
  std::vector<double> x;
  std::vector<double> prices;
};

/// Call prices at expiry horizon t_final over x = log K +- half_width,
/// via payoff -> heat_evolve -> recover_price with explicit normalization.
HeatPricing heat_call_prices(const BlackScholesSpec& spec, double dx = 0.005,
                             double half_width = 5.0);

}  // namespace rkbudget
