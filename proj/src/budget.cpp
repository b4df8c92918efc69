#include "rkbudget/budget.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <ostream>

namespace rkbudget {

void AnsatzDims::validate() const {
  if (n_params < 1 || n_layer_terms < 1 || n_hamiltonian_terms < 1)
    throw std::invalid_argument("Ansatz dimensions N_V, N_d, N must be positive");
  if (!(f_mag > 0.0) || !(lambda_mag > 0.0))
    throw std::invalid_argument("Ansatz coefficient magnitudes must be positive");
}

double AnsatzDims::circuits_per_evaluation() const {
  const double nv = n_params;
  const double nd = n_layer_terms;
  return nv * nd * (nv * nd + n_hamiltonian_terms);
}

namespace {

// (K M (e^{b_max s L_fy T} - 1) / (eps b_max s L_fy))
double step_base(const ProblemBounds& pb, const MethodProfile& prof) {
  pb.validate();
  const double bsl = prof.b_max * prof.stages * pb.L_fy;
  return prof.K * pb.M * std::expm1(bsl * pb.T) / (pb.eps_target * bsl);
}

}  // namespace

double min_steps_noiseless(const ProblemBounds& pb, const MethodProfile& prof) {
  return pb.L_ftau * pb.T * std::pow(step_base(pb, prof), 1.0 / prof.order);
}

double cost_noiseless(const ProblemBounds& pb, const MethodProfile& prof) {
  return prof.stages * min_steps_noiseless(pb, prof);
}

double min_steps_noisy(const ProblemBounds& pb, const MethodProfile& prof) {
  return pb.L_ftau * pb.T *
         std::pow(step_base(pb, prof) * (2.0 * prof.order + 1.0), 1.0 / prof.order);
}

double min_shots(const ProblemBounds& pb, const MethodProfile& prof, double sigma,
                 double n_steps) {
  pb.validate();
  if (!(sigma > 0.0)) throw std::invalid_argument("Sigma must be positive");
  using ld = long double;
  const ld n = n_steps;
  const ld F = f_factor(n, prof, pb.L_fy, pb.T);
  const ld growth = std::expm1(n * std::log1p(F));
  const ld trunc = std::pow(static_cast<ld>(pb.T) / n, prof.order + 1) * prof.K *
                   std::pow(static_cast<ld>(pb.L_ftau), prof.order) * pb.M / F;
  const ld bracket = pb.eps_target / growth - trunc;
  if (!(bracket > 0))
    throw InfeasibleBudget("infeasible: truncation already exceeds target");
  const ld r = 3.0L * sigma / (pb.L_fy * bracket);
  return static_cast<double>(r * r);
}

double cost_noisy(const ProblemBounds& pb, const MethodProfile& prof, double sigma) {
  const double n = min_steps_noisy(pb, prof);
  return prof.stages * n * min_shots(pb, prof, sigma, n);
}

double circuit_budget(double n_steps, int stages, double shots, const AnsatzDims& dims) {
  dims.validate();
  if (!(n_steps > 0.0) || stages < 1 || !(shots > 0.0))
    throw std::invalid_argument("circuit budget needs positive N_tau, s, N_r");
  return n_steps * stages * shots * dims.circuits_per_evaluation();
}

double distinct_circuits(double n_steps, int stages, const AnsatzDims& dims) {
  dims.validate();
  return n_steps * stages * dims.circuits_per_evaluation();
}

double sigma_bound(const AnsatzDims& dims, double eta, double cap, double gamma) {
  dims.validate();
  if (!(eta > 0.0 && eta < 1.0) && eta != 1.0)
    throw std::invalid_argument("eta must lie in (0, 1)");
  const double nv = dims.n_params;
  const double nd = dims.n_layer_terms;
  const double sigma_matrix = nv * nd * nd;
  const double sigma_vector = nv * nd * dims.n_hamiltonian_terms;
  return cap / std::sqrt(eta) * std::pow(nv, gamma) *
         (sigma_vector / std::sqrt(nv) + sigma_matrix / nv);
}

double s_factor(const std::vector<std::vector<double>>& f_mags, std::span<const double> theta,
                ThetaNorm norm) {
  if (f_mags.size() != theta.size())
    throw std::invalid_argument("need one coefficient list per parameter");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    double layer = 0.0;
    for (double f : f_mags[k]) layer += 2.0 * std::abs(f);
    num += layer * std::abs(theta[k]);
    den += norm == ThetaNorm::l1 ? std::abs(theta[k]) : theta[k] * theta[k];
  }
  if (norm == ThetaNorm::l2) den = std::sqrt(den);
  if (den == 0.0) throw std::invalid_argument("theta must be nonzero");
  return num / den;
}

long BudgetRow::n_tau_ceil() const { return static_cast<long>(std::ceil(n_tau)); }

std::optional<double> BudgetRow::n_r_ceil() const {
  if (!n_r) return std::nullopt;
  return std::ceil(*n_r);
}

namespace {

BudgetRow make_row(const BudgetInputs& in, int p) {
  const auto prof = order_profile(p, in.K, in.a_max, in.b_max);
  BudgetRow row;
  row.p = p;
  row.s = prof.stages;
  if (!in.noisy) {
    row.n_tau = min_steps_noiseless(in.pb, prof);
    row.cost = row.s * row.n_tau;
    return row;
  }
  const auto& q = *in.noisy;
  row.n_tau = min_steps_noisy(in.pb, prof);
  row.circuits = distinct_circuits(row.n_tau, row.s, q.dims);
  try {
    row.n_r = min_shots(in.pb, prof, q.sigma, row.n_tau);
    row.cost = row.s * row.n_tau * *row.n_r;
    row.n_circ = circuit_budget(row.n_tau, row.s, *row.n_r, q.dims);
  } catch (const InfeasibleBudget& e) {
    row.feasible = false;
    row.flag = e.what();
    row.cost = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

double figure_of_merit(const BudgetRow& row) { return row.n_circ ? *row.n_circ : row.cost; }

}  // namespace

std::vector<BudgetRow> budget_table(const BudgetInputs& in, int p_lo, int p_hi) {
  if (p_lo < 1 || p_hi > 10 || p_lo > p_hi)
    throw std::out_of_range("order range must lie within 1..10");
  in.pb.validate();
  if (in.noisy) in.noisy->dims.validate();
  const BudgetRow anchor = make_row(in, 1);
  std::vector<BudgetRow> rows;
  for (int p = p_lo; p <= p_hi; ++p) {
    BudgetRow row = p == 1 ? anchor : make_row(in, p);
    if (row.feasible && anchor.feasible)
      row.ratio = figure_of_merit(anchor) / figure_of_merit(row);
    else
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  return rows;
}

int argmin_order(const std::vector<BudgetRow>& rows) {
  int best = -1;
  double best_value = 0.0;
  for (const auto& row : rows) {
    if (!row.feasible) continue;
    const double v = figure_of_merit(row);
    if (best < 0 || v < best_value || (v == best_value && row.p < best)) {
      best = row.p;
      best_value = v;
    }
  }
  if (best < 0) throw std::invalid_argument("no feasible rows in budget table");
  return best;
}

namespace {

bool any_flagged(const std::vector<BudgetRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const BudgetRow& r) { return !r.feasible; });
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows) {
  const bool flagged = any_flagged(rows);
  out << "p,s,N_tau,N_r,cost,N_circ,circuits,ratio" << (flagged ? ",flag" : "") << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.s << ',' << format_real(r.n_tau) << ',' << format_real(r.n_r) << ','
        << (r.feasible ? format_real(r.cost) : "") << ',' << format_real(r.n_circ) << ','
        << format_real(r.circuits) << ',' << (r.feasible ? format_real(r.ratio) : "");
    if (flagged) out << ',' << r.flag;
    out << '\n';
  }
}

Json budget_json(const std::vector<BudgetRow>& rows) {
  const bool flagged = any_flagged(rows);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json o;
    o["p"] = r.p;
    o["s"] = r.s;
    o["N_tau"] = r.n_tau;
    o["N_r"] = optional_number(r.n_r);
    o["cost"] = r.feasible ? Json(r.cost) : Json(nullptr);
    o["N_circ"] = optional_number(r.n_circ);
    o["circuits"] = optional_number(r.circuits);
    o["ratio"] = r.feasible ? Json(r.ratio) : Json(nullptr);
    if (flagged) o["flag"] = r.flag.empty() ? Json(nullptr) : Json(r.flag);
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace rkbudget
