#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkbudget/rng.hpp"
#include "rkbudget/tableaux.hpp"

namespace rkbudget {

using State = std::vector<double>;
using VectorField = std::function<State(double tau, std::span<const double> y)>;

enum class NoiseMode { gaussian, clipped_gaussian };

/**
 * @brief Shot-noise model for one field evaluation.
 *
 * `sigma` is the aggregate scale Sigma = sigma_single / sqrt(eta), so the
 * per-evaluation bound is delta = Sigma / sqrt(shots), holding with
 * probability at least 1 - eta.
 */
struct NoiseSpec {
  double sigma = 0.0;
  double eta = 0.05;
  double shots = 1.0;
  NoiseMode mode = NoiseMode::gaussian;

  double delta() const;
  double sigma_single() const;

  /// Spec with Sigma = delta and one shot.
  static NoiseSpec from_delta(double delta, double eta, NoiseMode mode);
};

NoiseMode noise_mode_from_name(const std::string& name);

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  /// Index of the failing step, or -1 when raised by rk_step directly.
  long step() const { return step_; }

 private:
  long step_;
};

/**
 * @brief Field evaluations, optionally perturbed by shot noise.
 *
 * Every call draws a fresh perturbation when noise is configured. In
 * gaussian mode the components are i.i.d. N(0, (sigma_single/sqrt(N_r))^2 / dim);
 * clipped mode additionally rescales any draw longer than delta onto the
 * delta-sphere.
 */
class EvaluationOracle {
 public:
  explicit EvaluationOracle(VectorField f);
  EvaluationOracle(VectorField f, NoiseSpec noise, std::uint64_t seed);

  State operator()(double tau, std::span<const double> y);

  const std::optional<NoiseSpec>& noise() const { return noise_; }
  std::uint64_t evaluations() const { return evaluations_; }
  /// Draws whose norm exceeded delta before any clipping.
  std::uint64_t exceedances() const { return exceedances_; }
  double max_perturbation() const { return max_perturbation_; }

 private:
  VectorField f_;
  std::optional<NoiseSpec> noise_;
  Rng rng_;
  std::uint64_t evaluations_ = 0;
  std::uint64_t exceedances_ = 0;
  double max_perturbation_ = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  const State& final_state() const { return states.back(); }
};

/// One explicit RK step, one oracle call per stage.
State rk_step(const ButcherTableau& t, EvaluationOracle& oracle, double tau,
              std::span<const double> y, double dt);

Trajectory integrate(const ButcherTableau& t, EvaluationOracle& oracle, const State& y0,
                     double tau0, double horizon, long n_steps);

/// CSV with header "step,tau,y_0,...,y_{dim-1}".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

using ExactSolution = std::function<State(double tau)>;

struct ConvergenceResult {
  std::vector<long> steps;
  std::vector<double> step_sizes;
  std::vector<double> errors;
  double slope = 0.0;
  /// Errors at or below round-off; slope is NaN then.
  bool degenerate = false;
};

/**
 * Least-squares slope of log(error at the final time) against log(step
 * size), noise off. Needs at least four grid points.
 */
ConvergenceResult empirical_order(const ButcherTableau& t, const VectorField& f,
                                  const ExactSolution& exact, double tau0, double horizon,
                                  const std::vector<long>& step_grid);

double norm2(std::span<const double> v);

}  // namespace rkbudget
