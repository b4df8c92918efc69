#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rkbudget/scenarios.hpp"

namespace rkbudget {

enum class SweepTarget { p, T, K, M, L_fy, L_ftau, b_max, a_max, Sigma, epsilon };
enum class SweepMode { cost, ncirc };

std::string target_name(SweepTarget t);
SweepTarget target_from_name(std::string_view name);
SweepMode sweep_mode_from_name(std::string_view name);

/// Targets meaningful for the mode (Sigma only for ncirc).
std::vector<SweepTarget> sweep_targets(SweepMode mode);

/// 2^(k/2) for k = -6..6: 13 points from 1/8 to 8, with 1 in the middle.
std::vector<double> default_factors();

struct SweepSpec {
  Scenario base;
  SweepTarget target = SweepTarget::epsilon;
  std::vector<double> factors = default_factors();
  SweepMode mode = SweepMode::cost;
  int base_order = 2;
};

struct SweepPoint {
  /// Scale factor, or the order itself for the p target.
  double factor = 1.0;
  double value = 0.0;
  bool feasible = true;
};

struct SweepCurve {
  SweepTarget target;
  std::vector<SweepPoint> points;
};

/// Cost (noiseless, s N_tau) or N_circ with one parameter scaled. The p
/// target runs over orders 1..10 instead of factors.
SweepCurve sweep(const SweepSpec& spec);

/// One curve per target of the mode, all on the same factor grid.
std::vector<SweepCurve> sweep_all(const Scenario& base, SweepMode mode,
                                  const std::vector<double>& factors = default_factors(),
                                  int base_order = 2);

/// Pairs of curves whose factors agree and whose values agree within
/// rel_tol relative at every point.
std::vector<std::pair<SweepTarget, SweepTarget>> overlap_check(
    const std::vector<SweepCurve>& curves, double rel_tol = 1e-9);

/// CSV "target,factor,value,feasible".
void write_sweep_csv(std::ostream& out, const std::vector<SweepCurve>& curves);

}  // namespace rkbudget
