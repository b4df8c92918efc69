#pragma once

#include "rkbudget/tableaux.hpp"

namespace rkbudget {

/**
 * @brief Analytic constants of an initial value problem.
 *
 * L_fy bounds the state Lipschitz constant, L_ftau the time-derivative
 * chain, M the field magnitude; T is the horizon and eps_target the error
 * the budget formulas aim for.
 */
struct ProblemBounds {
  double L_fy = 1.0;
  double L_ftau = 1.0;
  double M = 1.0;
  double T = 1.0;
  double eps_target = 1e-3;

  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;
};

/**
 * Stage amplification factor
 *   F = (b_max / a_max) * ((1 + L_fy a_max T / N)^s - 1).
 * For a_max = 0 (only possible with s = 1) the algebraic limit
 * b_max L_fy T / N is returned.
 */
double f_factor(long double n_steps, const MethodProfile& prof, double L_fy, double T);

/// Leading local truncation error term dt^(p+1) K L_ftau^p M.
double lte_bound(double dt, const MethodProfile& prof, double L_ftau, double M);

/// Global error bound after n_steps noiseless steps. Overflow gives +inf.
double global_error_bound_noiseless(const ProblemBounds& pb, const MethodProfile& prof,
                                    long double n_steps);

/// Global error bound when every field evaluation is off by at most delta.
/// Equals the noiseless bound exactly at delta = 0.
double global_error_bound_noisy(const ProblemBounds& pb, const MethodProfile& prof,
                                long double n_steps, double delta);

}  // namespace rkbudget
