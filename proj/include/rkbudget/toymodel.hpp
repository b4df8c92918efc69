#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rkbudget/rng.hpp"

namespace rkbudget {

/// Fourier parameters (alpha_1..alpha_5) of every A entry (row-major) and C entry.
struct ToyParams {
  int n_v = 0;
  std::vector<std::array<double, 5>> a;
  std::vector<std::array<double, 5>> c;

  /// alpha_1, alpha_4 ~ N(1, 0.1); alpha_2, alpha_3, alpha_5 ~ N(0, 0.1).
  static ToyParams draw(int n_v, Rng& rng);
  /// alpha_1 = alpha_4 = 1, the rest 0: every entry is identically 1.
  static ToyParams constant(int n_v);
};

/// w(theta) = alpha_1 cos(alpha_2 theta + alpha_3) + alpha_4 sin(alpha_5 theta)
double toy_entry(const std::array<double, 5>& alpha, double theta);

struct ToySystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd C;
  double theta = 0.0;
};

ToySystem evaluate(const ToyParams& params, double theta);

struct ToySample {
  ToyParams params;
  ToySystem system;
};

ToySample sample_toy(int n_v, double theta, std::uint64_t seed);

class SingularMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Condition above which a draw counts as near-singular in the studies.
inline constexpr double kNearSingular = 1e12;

/// ||A||_F ||A^-1||_F; throws SingularMatrixError for singular A.
double condition_number(const Eigen::MatrixXd& A);

/// Solution of A f = C by partially pivoted LU; throws SingularMatrixError.
Eigen::VectorXd solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& C);

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);

struct QuantileStats {
  int n_v = 0;
  double median = 0.0;
  double q16 = 0.0;
  double q84 = 0.0;
  int excluded = 0;
};

struct StudyOptions {
  std::vector<int> nv_grid;
  int samples = 100;
  double theta = 0.5;
  std::uint64_t seed = kDefaultSeed;
};

/// Per-N_V quantiles of kappa(A). Sample i at dimension n uses the stream
/// derive_seed(seed, {n, i}).
std::vector<QuantileStats> kappa_study(const StudyOptions& opts);

struct NormStats {
  QuantileStats a_norm;
  QuantileStats c_norm;
  QuantileStats solution_norm;
};

/// Per-N_V quantiles of ||A||_F, ||C||_2 and ||A^-1 C||_2 (same streams as
/// kappa_study). Near-singular draws are dropped from all three.
std::vector<NormStats> norm_study(const StudyOptions& opts);

void write_kappa_csv(std::ostream& out, const std::vector<QuantileStats>& rows);
void write_norms_csv(std::ostream& out, const std::vector<NormStats>& rows);

struct LipSurface {
  std::vector<double> theta1;
  std::vector<double> theta2;
  /// values[i][j] = Lip(theta1[i], theta2[j]); NaN on the diagonal and at
  /// singular nodes.
  std::vector<std::vector<double>> values;
  long singular_cells = 0;
};

/// ||f(t1) - f(t2)||_2 / |t1 - t2| with f = A^-1 C from one parameter draw.
LipSurface lip_surface(const ToyParams& params, const std::vector<double>& theta1,
                       const std::vector<double>& theta2);

std::vector<double> linspace(double lo, double hi, int n);

/// Fraction of finite cells with value <= threshold.
double fraction_below(const LipSurface& s, double threshold);

void write_lip_csv(std::ostream& out, const LipSurface& s);

struct ShotNoiseNorms {
  double matrix_frobenius = 0.0;  ///< ||{sigma_kl}||_F
  double vector_norm = 0.0;       ///< ||{sigma_k}||_2
};

/**
 * sigma_kl = sqrt(sum_ij |f_ki f_lj|^2), sigma_k = sqrt(sum_im |f_ki lambda_m|^2).
 * `f_mags` is N_V rows of N_d magnitudes, `lambda_mags` has N entries.
 */
ShotNoiseNorms shot_noise_norms(const std::vector<std::vector<double>>& f_mags,
                                const std::vector<double>& lambda_mags);

/// First-order relative-error bound xi kappa(A) (||r|| / ||C|| + ||R||_F / ||A||_F).
double perturbation_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& C,
                          const Eigen::MatrixXd& R, const Eigen::VectorXd& r, double xi);

/// ||fhat - f|| / ||f|| from solving A f = C and (A + xi R) fhat = C + xi r.
double perturbation_empirical(const Eigen::MatrixXd& A, const Eigen::VectorXd& C,
                              const Eigen::MatrixXd& R, const Eigen::VectorXd& r, double xi);

struct PerturbationCheck {
  int systems = 0;
  std::vector<double> xis;
  /// Slack constant c fitted at the largest xi: max(0, empirical - bound) / xi^2.
  double fitted_c = 0.0;
  /// Points at smaller xi where empirical > bound + c xi^2 (excess not second order).
  int first_order_violations = 0;
  /// Largest empirical / bound ratio seen.
  double max_ratio = 0.0;
};

/// Random diagonally dominant n x n systems with Gaussian C, R, r.
PerturbationCheck perturbation_campaign(int systems, int n, std::vector<double> xis,
                                        std::uint64_t seed);

}  // namespace rkbudget
