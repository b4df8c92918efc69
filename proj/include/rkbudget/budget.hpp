#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkbudget/bounds.hpp"
#include "rkbudget/io.hpp"
#include "rkbudget/tableaux.hpp"

namespace rkbudget {

/// Ansatz dimensions: N_V parameters, N_d Pauli strings per layer, N
/// Hamiltonian terms, plus coefficient magnitudes.
struct AnsatzDims {
  int n_params = 25;
  int n_layer_terms = 1;
  int n_hamiltonian_terms = 16;
  double f_mag = 0.5;
  double lambda_mag = 1.0;

  void validate() const;
  /// N_V N_d (N_V N_d + N): circuits per field evaluation.
  double circuits_per_evaluation() const;
};

/// The truncation part alone already exceeds the target error.
class InfeasibleBudget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

double min_steps_noiseless(const ProblemBounds& pb, const MethodProfile& prof);
double cost_noiseless(const ProblemBounds& pb, const MethodProfile& prof);

double min_steps_noisy(const ProblemBounds& pb, const MethodProfile& prof);

/// Minimal shots per evaluation for n_steps steps; throws InfeasibleBudget
/// when the bracketed difference is not positive.
double min_shots(const ProblemBounds& pb, const MethodProfile& prof, double sigma,
                 double n_steps);
double cost_noisy(const ProblemBounds& pb, const MethodProfile& prof, double sigma);

/// N_circ = N_tau s N_r N_V N_d (N_V N_d + N).
double circuit_budget(double n_steps, int stages, double shots, const AnsatzDims& dims);
/// Distinct circuits N_tau s (N_V^2 N_d^2 + N_V N_d N).
double distinct_circuits(double n_steps, int stages, const AnsatzDims& dims);

inline constexpr double kDefaultNormCap = 60.0;
inline constexpr double kDefaultConditionExponent = 3.0;

/**
 * Upper estimate of Sigma from the Ansatz dimensions:
 *   (cap / sqrt(eta)) N_V^Gamma (||sigma_k|| / sqrt(N_V) + ||sigma_kl|| / N_V)
 * with the norm surrogates ||sigma_kl|| <= N_V N_d^2, ||sigma_k|| <= N_V N_d N.
 */
double sigma_bound(const AnsatzDims& dims, double eta, double cap = kDefaultNormCap,
                   double gamma = kDefaultConditionExponent);

enum class ThetaNorm { l1, l2 };

/**
 * Jacobian factor S = sum_k (sum_j 2|f_kj|) |theta_k| / ||theta||.
 * `f_mags[k]` lists the coefficient magnitudes of layer k.
 */
double s_factor(const std::vector<std::vector<double>>& f_mags, std::span<const double> theta,
                ThetaNorm norm = ThetaNorm::l2);

struct NoisyBudgetInputs {
  double sigma = 0.0;
  AnsatzDims dims;
};

struct BudgetInputs {
  ProblemBounds pb;
  double K = 5.0;
  double a_max = 1.0;
  double b_max = 1.0;
  std::optional<NoisyBudgetInputs> noisy;
};

struct BudgetRow {
  int p = 1;
  int s = 1;
  double n_tau = 0.0;
  std::optional<double> n_r;
  double cost = 0.0;
  std::optional<double> n_circ;
  std::optional<double> circuits;
  /// Cost (or N_circ) of the p = 1 row divided by this row's.
  double ratio = 1.0;
  bool feasible = true;
  std::string flag;

  long n_tau_ceil() const;
  std::optional<double> n_r_ceil() const;
};

/// One row per order in [p_lo, p_hi] (subset of 1..10); infeasible rows are
/// flagged and kept.
std::vector<BudgetRow> budget_table(const BudgetInputs& in, int p_lo = 1, int p_hi = 10);

/// Order minimizing cost (noiseless) or N_circ (noisy); ties go to the
/// smaller order. Infeasible rows are skipped.
int argmin_order(const std::vector<BudgetRow>& rows);

/// "p,s,N_tau,N_r,cost,N_circ,circuits,ratio", plus "flag" when any row is
/// infeasible. Absent values are empty cells.
void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows);
/// Array of row objects with the CSV keys; absent values are null.
Json budget_json(const std::vector<BudgetRow>& rows);

}  // namespace rkbudget
