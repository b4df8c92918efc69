#include "rkbudget/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rkbudget/io.hpp"

namespace rkbudget {

namespace {

constexpr std::pair<SweepTarget, const char*> kNames[] = {
    {SweepTarget::p, "p"},         {SweepTarget::T, "T"},
    {SweepTarget::K, "K"},         {SweepTarget::M, "M"},
    {SweepTarget::L_fy, "L_fy"},   {SweepTarget::L_ftau, "L_ftau"},
    {SweepTarget::b_max, "b_max"}, {SweepTarget::a_max, "a_max"},
    {SweepTarget::Sigma, "Sigma"}, {SweepTarget::epsilon, "epsilon"},
};

void scale(Scenario& sc, SweepTarget t, double f) {
  switch (t) {
    case SweepTarget::T: sc.pb.T *= f; break;
    case SweepTarget::K: sc.K *= f; break;
    case SweepTarget::M: sc.pb.M *= f; break;
    case SweepTarget::L_fy: sc.pb.L_fy *= f; break;
    case SweepTarget::L_ftau: sc.pb.L_ftau *= f; break;
    case SweepTarget::b_max: sc.b_max *= f; break;
    case SweepTarget::a_max: sc.a_max *= f; break;
    case SweepTarget::Sigma: *sc.sigma *= f; break;
    case SweepTarget::epsilon: sc.pb.eps_target *= f; break;
    case SweepTarget::p: break;
  }
}

SweepPoint evaluate_point(const Scenario& sc, int order, SweepMode mode, double x) {
  const auto prof = order_profile(order, sc.K, sc.a_max, sc.b_max);
  SweepPoint pt;
  pt.factor = x;
  if (mode == SweepMode::cost) {
    pt.value = cost_noiseless(sc.pb, prof);
    return pt;
  }
  const double n = min_steps_noisy(sc.pb, prof);
  try {
    const double shots = min_shots(sc.pb, prof, *sc.sigma, n);
    pt.value = circuit_budget(n, prof.stages, shots, *sc.dims);
  } catch (const InfeasibleBudget&) {
    pt.value = std::numeric_limits<double>::quiet_NaN();
    pt.feasible = false;
  }
  return pt;
}

}  // namespace

std::string target_name(SweepTarget t) {
  for (const auto& [id, name] : kNames)
    if (id == t) return name;
  return "?";
}

SweepTarget target_from_name(std::string_view name) {
  for (const auto& [id, n] : kNames)
    if (name == n) return id;
  throw std::invalid_argument("unknown sweep target '" + std::string(name) + "'");
}

SweepMode sweep_mode_from_name(std::string_view name) {
  if (name == "cost") return SweepMode::cost;
  if (name == "ncirc") return SweepMode::ncirc;
  throw std::invalid_argument("unknown sweep mode '" + std::string(name) +
                              "' (expected cost or ncirc)");
}

std::vector<SweepTarget> sweep_targets(SweepMode mode) {
  std::vector<SweepTarget> out;
  for (const auto& [id, name] : kNames)
    if (id != SweepTarget::Sigma || mode == SweepMode::ncirc) out.push_back(id);
  return out;
}

std::vector<double> default_factors() {
  std::vector<double> f;
  for (int k = -6; k <= 6; ++k) f.push_back(std::exp2(k / 2.0));
  return f;
}

SweepCurve sweep(const SweepSpec& spec) {
  if (spec.mode == SweepMode::ncirc && !spec.base.noisy())
    throw std::invalid_argument("N_circ sweeps need a scenario with Sigma and Ansatz dims");
  if (spec.target == SweepTarget::Sigma && spec.mode != SweepMode::ncirc)
    throw std::invalid_argument("Sigma can only be swept in ncirc mode");
  min_stages(spec.base_order);

  SweepCurve curve{spec.target, {}};
  if (spec.target == SweepTarget::p) {
    for (int p = 1; p <= 10; ++p)
      curve.points.push_back(evaluate_point(spec.base, p, spec.mode, p));
    return curve;
  }
  if (spec.factors.empty()) throw std::invalid_argument("factor grid is empty");
  for (double f : spec.factors) {
    if (!(f > 0.0)) throw std::invalid_argument("scale factors must be positive");
    Scenario sc = spec.base;
    scale(sc, spec.target, f);
    curve.points.push_back(evaluate_point(sc, spec.base_order, spec.mode, f));
  }
  return curve;
}

std::vector<SweepCurve> sweep_all(const Scenario& base, SweepMode mode,
                                  const std::vector<double>& factors, int base_order) {
  std::vector<SweepCurve> out;
  for (auto t : sweep_targets(mode)) out.push_back(sweep({base, t, factors, mode, base_order}));
  return out;
}

std::vector<std::pair<SweepTarget, SweepTarget>> overlap_check(
    const std::vector<SweepCurve>& curves, double rel_tol) {
  auto same = [rel_tol](const SweepCurve& a, const SweepCurve& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      const auto& x = a.points[i];
      const auto& y = b.points[i];
      if (x.factor != y.factor || x.feasible != y.feasible) return false;
      if (!x.feasible) continue;
      if (std::abs(x.value - y.value) > rel_tol * std::max(std::abs(x.value), std::abs(y.value)))
        return false;
    }
    return true;
  };
  std::vector<std::pair<SweepTarget, SweepTarget>> out;
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      if (same(curves[i], curves[j])) out.emplace_back(curves[i].target, curves[j].target);
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCurve>& curves) {
  out << "target,factor,value,feasible\n";
  for (const auto& c : curves)
    for (const auto& pt : c.points)
      out << target_name(c.target) << ',' << format_real(pt.factor) << ','
          << (pt.feasible ? format_real(pt.value) : "") << ',' << (pt.feasible ? 1 : 0) << '\n';
}

}  // namespace rkbudget
