#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rkbudget/io.hpp"
#include "rkbudget/scenarios.hpp"

namespace rkbudget {

double shots_to_delta(double sigma, double shots);
double delta_to_shots(double sigma, double delta);

struct CampaignReport {
  Json config;
  long trials = 0;
  long violations = 0;
  double violation_rate = 0.0;
  std::vector<std::uint64_t> seeds;
  std::uint64_t evaluations = 0;
  /// Field evaluations whose drawn noise exceeded delta (before clipping).
  std::uint64_t exceedances = 0;
  double exceedance_rate = 0.0;
  /// eta plus three binomial standard deviations.
  double exceedance_allowance = 0.0;
  /// Largest realized error / bound over all trials.
  double max_ratio = 0.0;
  std::vector<double> realized;
  std::vector<double> bounds;

  /// No bound violations and, under noise, per-evaluation exceedances
  /// within the allowance. Gaussian mode does not promise end-to-end
  /// dominance, so only the exceedance rate counts there.
  bool passed() const;
};

/// Noiseless dominance on dy/dtau = y/2 over [0, T]: one trial per step count.
CampaignReport validate_noiseless_bound(const ProblemBounds& pb, double K,
                                        const ButcherTableau& tableau,
                                        const std::vector<long>& step_counts);

struct NoisyCampaign {
  long n_steps = 100;
  double delta = 1e-4;
  long trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  NoiseMode mode = NoiseMode::clipped_gaussian;
  double eta = 0.05;
};

/// Noisy dominance; trial i draws noise from derive_seed(seed, {i}).
/// delta = 0 reduces to the noiseless campaign repeated `trials` times.
CampaignReport validate_noisy_bound(const ProblemBounds& pb, double K,
                                    const ButcherTableau& tableau, const NoisyCampaign& c);

/// {config, trials, violations, violation_rate, seeds_sample, ...}; at most
/// the first 16 seeds are echoed.
Json report_json(const CampaignReport& r);

}  // namespace rkbudget
