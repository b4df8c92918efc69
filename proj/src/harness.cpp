#include "rkbudget/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rkbudget {

double shots_to_delta(double sigma, double shots) {
  if (!(sigma > 0.0) || !(shots > 0.0)) throw std::invalid_argument("Sigma and N_r must be positive");
  return sigma / std::sqrt(shots);
}

double delta_to_shots(double sigma, double delta) {
  if (!(sigma > 0.0) || !(delta > 0.0)) throw std::invalid_argument("Sigma and delta must be positive");
  const double r = sigma / delta;
  return r * r;
}

bool CampaignReport::passed() const {
  const bool gaussian = config.value("mode", "") == "gaussian";
  if (evaluations > 0 && exceedance_rate > exceedance_allowance) return false;
  return gaussian || violations == 0;
}

namespace {

Json problem_json(const ProblemBounds& pb, double K, const ButcherTableau& t) {
  Json j;
  j["method"] = t.name;
  j["order"] = t.order;
  j["stages"] = t.stages();
  j["K"] = K;
  j["L_fy"] = pb.L_fy;
  j["L_ftau"] = pb.L_ftau;
  j["M"] = pb.M;
  j["T"] = pb.T;
  return j;
}

void record(CampaignReport& r, double realized, double bound) {
  r.realized.push_back(realized);
  r.bounds.push_back(bound);
  ++r.trials;
  if (!(realized <= bound)) ++r.violations;
  if (bound > 0.0) r.max_ratio = std::max(r.max_ratio, realized / bound);
}

void finish(CampaignReport& r, double eta) {
  r.violation_rate = r.trials ? static_cast<double>(r.violations) / r.trials : 0.0;
  if (r.evaluations > 0) {
    const double n = static_cast<double>(r.evaluations);
    r.exceedance_rate = static_cast<double>(r.exceedances) / n;
    r.exceedance_allowance = eta + 3.0 * std::sqrt(eta * (1.0 - eta) / n);
  }
}

}  // namespace

CampaignReport validate_noiseless_bound(const ProblemBounds& pb, double K,
                                        const ButcherTableau& tableau,
                                        const std::vector<long>& step_counts) {
  const auto prof = profile(tableau, K);
  const ExpOde ode = exp_ode();
  const double exact = ode.exact(ode.tau0 + pb.T)[0];
  CampaignReport r;
  r.config = problem_json(pb, K, tableau);
  r.config["mode"] = "noiseless";
  r.config["n_steps"] = step_counts;
  for (long n : step_counts) {
    EvaluationOracle oracle(ode.field);
    const auto traj = integrate(tableau, oracle, ode.y0, ode.tau0, pb.T, n);
    record(r, std::abs(traj.final_state()[0] - exact),
           global_error_bound_noiseless(pb, prof, static_cast<long double>(n)));
  }
  finish(r, 0.0);
  return r;
}

CampaignReport validate_noisy_bound(const ProblemBounds& pb, double K,
                                    const ButcherTableau& tableau, const NoisyCampaign& c) {
  if (c.trials < 1 || c.n_steps < 1) throw std::invalid_argument("need trials and steps >= 1");
  if (!(c.delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  const auto prof = profile(tableau, K);
  const ExpOde ode = exp_ode();
  const double exact = ode.exact(ode.tau0 + pb.T)[0];
  const double bound =
      global_error_bound_noisy(pb, prof, static_cast<long double>(c.n_steps), c.delta);

  CampaignReport r;
  r.config = problem_json(pb, K, tableau);
  r.config["mode"] = c.delta == 0.0 ? "noiseless"
                     : c.mode == NoiseMode::gaussian ? "gaussian"
                                                     : "clipped-gaussian";
  r.config["delta"] = c.delta;
  r.config["eta"] = c.eta;
  r.config["n_steps"] = c.n_steps;
  r.config["trials"] = c.trials;
  r.config["seed"] = c.seed;

  for (long i = 0; i < c.trials; ++i) {
    const auto seed = derive_seed(c.seed, {static_cast<std::uint64_t>(i)});
    r.seeds.push_back(seed);
    EvaluationOracle oracle = c.delta == 0.0
                                  ? EvaluationOracle(ode.field)
                                  : EvaluationOracle(ode.field,
                                                     NoiseSpec::from_delta(c.delta, c.eta, c.mode),
                                                     seed);
    const auto traj = integrate(tableau, oracle, ode.y0, ode.tau0, pb.T, c.n_steps);
    record(r, std::abs(traj.final_state()[0] - exact), bound);
    if (c.delta > 0.0) {
      r.evaluations += oracle.evaluations();
      r.exceedances += oracle.exceedances();
    }
  }
  finish(r, c.eta);
  return r;
}

Json report_json(const CampaignReport& r) {
  Json j;
  j["config"] = r.config;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["violation_rate"] = r.violation_rate;
  j["max_error_to_bound"] = r.max_ratio;
  j["evaluations"] = r.evaluations;
  j["exceedances"] = r.exceedances;
  j["exceedance_rate"] = r.exceedance_rate;
  j["exceedance_allowance"] = r.exceedance_allowance;
  j["passed"] = r.passed();
  const auto n = std::min<std::size_t>(r.seeds.size(), 16);
  j["seeds_sample"] = std::vector<std::uint64_t>(r.seeds.begin(), r.seeds.begin() + n);
  return j;
}

}  // namespace rkbudget
