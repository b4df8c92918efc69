#include "rkbudget/integrator.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "rkbudget/io.hpp"

namespace rkbudget {

double NoiseSpec::delta() const { return sigma / std::sqrt(shots); }

double NoiseSpec::sigma_single() const { return sigma * std::sqrt(eta); }

NoiseSpec NoiseSpec::from_delta(double delta, double eta, NoiseMode mode) {
  return NoiseSpec{delta, eta, 1.0, mode};
}

NoiseMode noise_mode_from_name(const std::string& name) {
  if (name == "gaussian") return NoiseMode::gaussian;
  if (name == "clipped" || name == "clipped-gaussian") return NoiseMode::clipped_gaussian;
  throw std::invalid_argument("unknown noise mode '" + name + "' (expected gaussian or clipped)");
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

EvaluationOracle::EvaluationOracle(VectorField f) : f_(std::move(f)) {}

EvaluationOracle::EvaluationOracle(VectorField f, NoiseSpec noise, std::uint64_t seed)
    : f_(std::move(f)), noise_(noise), rng_(seed) {
  if (!(noise.sigma >= 0.0) || !(noise.shots > 0.0))
    throw std::invalid_argument("noise needs Sigma >= 0 and a positive shot count");
  if (!(noise.eta > 0.0 && noise.eta < 1.0))
    throw std::invalid_argument("noise confidence eta must lie in (0, 1)");
}

State EvaluationOracle::operator()(double tau, std::span<const double> y) {
  State out = f_(tau, y);
  ++evaluations_;
  if (!noise_ || noise_->sigma == 0.0) return out;

  const double delta = noise_->delta();
  const double sd = noise_->sigma_single() / std::sqrt(noise_->shots) /
                    std::sqrt(static_cast<double>(out.size()));
  std::normal_distribution<double> normal(0.0, sd);
  State pert(out.size());
  for (auto& x : pert) x = normal(rng_);
  double len = norm2(pert);
  if (len > delta) {
    ++exceedances_;
    if (noise_->mode == NoiseMode::clipped_gaussian) {
      const double scale = delta / len;
      for (auto& x : pert) x *= scale;
      // rounding can leave the norm an ulp above delta
      while ((len = norm2(pert)) > delta)
        for (auto& x : pert) x *= 1.0 - std::numeric_limits<double>::epsilon();
    }
  }
  max_perturbation_ = std::max(max_perturbation_, len);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += pert[i];
  return out;
}

State rk_step(const ButcherTableau& t, EvaluationOracle& oracle, double tau,
              std::span<const double> y, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  const int s = t.stages();
  const std::size_t dim = y.size();
  std::vector<State> k;
  k.reserve(static_cast<std::size_t>(s));
  State stage(dim);
  for (int i = 0; i < s; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      double acc = 0.0;
      for (int j = 0; j < i; ++j) acc += t.a[i][j] * k[j][d];
      stage[d] = y[d] + dt * acc;
    }
    State ki = oracle(tau + t.c[i] * dt, stage);
    if (ki.size() != dim) throw StepFailure("field returned a vector of the wrong size", -1);
    for (double v : ki)
      if (!std::isfinite(v)) throw StepFailure("non-finite field value at stage " +
                                                   std::to_string(i + 1), -1);
    k.push_back(std::move(ki));
  }
  State next(y.begin(), y.end());
  for (std::size_t d = 0; d < dim; ++d) {
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += t.b[i] * k[i][d];
    next[d] += dt * acc;
  }
  return next;
}

Trajectory integrate(const ButcherTableau& t, EvaluationOracle& oracle, const State& y0,
                     double tau0, double horizon, long n_steps) {
  if (n_steps < 1) throw std::invalid_argument("need at least one step");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double dt = horizon / static_cast<double>(n_steps);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(tau0);
  traj.states.push_back(y0);
  for (long n = 0; n < n_steps; ++n) {
    // Grid points are computed from the index, not accumulated.
    const double tau = tau0 + static_cast<double>(n) * dt;
    try {
      traj.states.push_back(rk_step(t, oracle, tau, traj.states.back(), dt));
    } catch (const StepFailure& e) {
      throw StepFailure(std::string(e.what()) + " in step " + std::to_string(n), n);
    }
    traj.times.push_back(n + 1 == n_steps ? tau0 + horizon
                                          : tau0 + static_cast<double>(n + 1) * dt);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
  out << "step,tau";
  for (std::size_t d = 0; d < dim; ++d) out << ",y_" << d;
  out << '\n';
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    out << n << ',' << format_real(traj.times[n]);
    for (double v : traj.states[n]) out << ',' << format_real(v);
    out << '\n';
  }
}

ConvergenceResult empirical_order(const ButcherTableau& t, const VectorField& f,
                                  const ExactSolution& exact, double tau0, double horizon,
                                  const std::vector<long>& step_grid) {
  if (step_grid.size() < 4) throw std::invalid_argument("need at least four grid points");
  ConvergenceResult res;
  const State y0 = exact(tau0);
  const State y_end = exact(tau0 + horizon);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, norm2(y_end));
  for (long n : step_grid) {
    EvaluationOracle oracle(f);
    const auto traj = integrate(t, oracle, y0, tau0, horizon, n);
    State diff = traj.final_state();
    for (std::size_t d = 0; d < diff.size(); ++d) diff[d] -= y_end[d];
    const double err = norm2(diff);
    res.steps.push_back(n);
    res.step_sizes.push_back(horizon / static_cast<double>(n));
    res.errors.push_back(err);
    if (err <= floor) res.degenerate = true;
  }
  if (res.degenerate) {
    res.slope = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  const double m = static_cast<double>(res.errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < res.errors.size(); ++i) {
    const double x = std::log(res.step_sizes[i]);
    const double y = std::log(res.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  res.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return res;
}

}  // namespace rkbudget
