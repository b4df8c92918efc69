#include "rkbudget/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rkbudget {

void ProblemBounds::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!pos(L_fy) || !pos(L_ftau) || !pos(M) || !pos(T) || !pos(eps_target))
    throw std::invalid_argument("problem bounds L_fy, L_ftau, M, T, eps_target must be positive");
}

namespace {

using ld = long double;

ld f_factor_ld(ld n, const MethodProfile& prof, ld L_fy, ld T) {
  if (!(n >= 1)) throw std::invalid_argument("step count must be at least 1");
  if (prof.a_max == 0.0) {
    if (prof.stages != 1)
      throw std::invalid_argument("a_max = 0 is only meaningful for single-stage methods");
    return static_cast<ld>(prof.b_max) * L_fy * T / n;
  }
  const ld a = prof.a_max;
  const ld growth = std::expm1(static_cast<ld>(prof.stages) * std::log1p(L_fy * a * T / n));
  return static_cast<ld>(prof.b_max) / a * growth;
}

// ((1 + F)^N - 1) / F, evaluated through log1p/expm1.
ld geometric_sum(ld F, ld n) { return std::expm1(n * std::log1p(F)) / F; }

ld truncation_term(const ProblemBounds& pb, const MethodProfile& prof, ld n) {
  const ld dt = static_cast<ld>(pb.T) / n;
  return std::pow(dt, prof.order + 1) * prof.K * std::pow(static_cast<ld>(pb.L_ftau), prof.order) *
         pb.M;
}

double to_double(ld v) {
  if (!std::isfinite(v) || v > std::numeric_limits<double>::max())
    return std::numeric_limits<double>::infinity();
  return static_cast<double>(v);
}

}  // namespace

double f_factor(long double n_steps, const MethodProfile& prof, double L_fy, double T) {
  return static_cast<double>(f_factor_ld(n_steps, prof, L_fy, T));
}

double lte_bound(double dt, const MethodProfile& prof, double L_ftau, double M) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  return std::pow(dt, prof.order + 1) * prof.K * std::pow(L_ftau, prof.order) * M;
}

double global_error_bound_noiseless(const ProblemBounds& pb, const MethodProfile& prof,
                                    long double n_steps) {
  return global_error_bound_noisy(pb, prof, n_steps, 0.0);
}

double global_error_bound_noisy(const ProblemBounds& pb, const MethodProfile& prof,
                                long double n_steps, double delta) {
  pb.validate();
  if (!(delta >= 0.0)) throw std::invalid_argument("noise bound delta must be non-negative");
  const ld F = f_factor_ld(n_steps, prof, pb.L_fy, pb.T);
  const ld noise = 3.0L * delta / pb.L_fy * F;
  return to_double(geometric_sum(F, n_steps) * (noise + truncation_term(pb, prof, n_steps)));
}

}  // namespace rkbudget
