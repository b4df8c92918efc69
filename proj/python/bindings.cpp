#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rkbudget/cli.hpp"
#include "rkbudget/harness.hpp"
#include "rkbudget/sensitivity.hpp"
#include "rkbudget/toymodel.hpp"

namespace py = pybind11;
using namespace rkbudget;

namespace {

py::dict row_dict(const BudgetRow& r) {
  py::dict d;
  d["p"] = r.p;
  d["s"] = r.s;
  d["N_tau"] = r.n_tau;
  d["N_r"] = r.n_r;
  d["cost"] = r.feasible ? py::object(py::float_(r.cost)) : py::object(py::none());
  d["N_circ"] = r.n_circ;
  d["circuits"] = r.circuits;
  d["ratio"] = r.ratio;
  d["feasible"] = r.feasible;
  d["flag"] = r.flag;
  return d;
}

ButcherTableau method(const std::string& name) { return builtin_tableau(method_from_name(name)); }

}  // namespace

PYBIND11_MODULE(_rkbudget, m) {
  m.doc() = "Runge-Kutta error bounds and resource budgets under shot noise";

  py::register_exception<InfeasibleBudget>(m, "InfeasibleBudget", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ValueError);

  py::class_<ButcherTableau>(m, "ButcherTableau")
      .def_readonly("name", &ButcherTableau::name)
      .def_readonly("order", &ButcherTableau::order)
      .def_readonly("a", &ButcherTableau::a)
      .def_readonly("b", &ButcherTableau::b)
      .def_readonly("c", &ButcherTableau::c)
      .def_property_readonly("stages", &ButcherTableau::stages);

  py::class_<MethodProfile>(m, "MethodProfile")
      .def_readonly("order", &MethodProfile::order)
      .def_readonly("stages", &MethodProfile::stages)
      .def_readonly("a_max", &MethodProfile::a_max)
      .def_readonly("b_max", &MethodProfile::b_max)
      .def_readonly("K", &MethodProfile::K);

  m.def("builtin_tableau", &method, py::arg("name"));
  m.def("validate_tableau", &validate_tableau);
  m.def("profile", &profile, py::arg("tableau"), py::arg("K"));
  m.def("order_profile", &order_profile, py::arg("p"), py::arg("K"), py::arg("a_max") = 1.0,
        py::arg("b_max") = 1.0);
  m.def("min_stages", &min_stages);

  py::class_<ProblemBounds>(m, "ProblemBounds")
      .def(py::init([](double L_fy, double L_ftau, double M, double T, double eps) {
             return ProblemBounds{L_fy, L_ftau, M, T, eps};
           }),
           py::arg("L_fy"), py::arg("L_ftau"), py::arg("M"), py::arg("T"),
           py::arg("eps_target"))
      .def_readwrite("L_fy", &ProblemBounds::L_fy)
      .def_readwrite("L_ftau", &ProblemBounds::L_ftau)
      .def_readwrite("M", &ProblemBounds::M)
      .def_readwrite("T", &ProblemBounds::T)
      .def_readwrite("eps_target", &ProblemBounds::eps_target);

  m.def("f_factor", [](double n, const MethodProfile& p, double L_fy, double T) {
    return f_factor(n, p, L_fy, T);
  });
  m.def("lte_bound", &lte_bound);
  m.def("global_error_bound_noiseless",
        [](const ProblemBounds& pb, const MethodProfile& p, double n) {
          return global_error_bound_noiseless(pb, p, n);
        });
  m.def("global_error_bound_noisy",
        [](const ProblemBounds& pb, const MethodProfile& p, double n, double delta) {
          return global_error_bound_noisy(pb, p, n, delta);
        });

  m.def("min_steps_noiseless", &min_steps_noiseless);
  m.def("min_steps_noisy", &min_steps_noisy);
  m.def("min_shots", &min_shots, py::arg("pb"), py::arg("profile"), py::arg("sigma"),
        py::arg("n_steps"));
  m.def("sigma_bound",
        [](int n_v, int n_d, int n, double eta, double cap, double gamma) {
          return sigma_bound(AnsatzDims{n_v, n_d, n, 0.5, 1.0}, eta, cap, gamma);
        },
        py::arg("N_V"), py::arg("N_d"), py::arg("N"), py::arg("eta"),
        py::arg("cap") = kDefaultNormCap, py::arg("gamma") = kDefaultConditionExponent);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("pb", &Scenario::pb)
      .def_readonly("a_max", &Scenario::a_max)
      .def_readonly("b_max", &Scenario::b_max)
      .def_readonly("K", &Scenario::K)
      .def_readonly("sigma", &Scenario::sigma)
      .def_property_readonly("noisy", &Scenario::noisy)
      .def("set", [](Scenario& sc, const std::string& key, const std::string& value) {
        apply_override(sc, key, value);
      });
  m.def("scenario", [](const std::string& name) { return scenario(name); });
  m.def("budget_table",
        [](const Scenario& sc, int p_min, int p_max) {
          py::list rows;
          for (const auto& r : budget_table(budget_inputs(sc), p_min, p_max))
            rows.append(row_dict(r));
          return rows;
        },
        py::arg("scenario"), py::arg("p_min") = 1, py::arg("p_max") = 10);
  m.def("argmin_order", [](const Scenario& sc) {
    return argmin_order(budget_table(budget_inputs(sc)));
  });

  m.def("integrate",
        [](const std::string& name, const std::function<State(double, State)>& py_field,
           const State& y0, double tau0, double horizon, long n_steps, double delta,
           const std::string& mode, std::uint64_t seed) {
          const auto t = method(name);
          const VectorField f = [&](double tau, std::span<const double> y) {
            return py_field(tau, State(y.begin(), y.end()));
          };
          EvaluationOracle oracle =
              delta > 0.0 ? EvaluationOracle(f, NoiseSpec::from_delta(delta, 0.05,
                                                                      noise_mode_from_name(mode)),
                                             seed)
                          : EvaluationOracle(f);
          const auto traj = integrate(t, oracle, y0, tau0, horizon, n_steps);
          return py::make_tuple(traj.times, traj.states);
        },
        py::arg("method"), py::arg("field"), py::arg("y0"), py::arg("tau0"), py::arg("horizon"),
        py::arg("n_steps"), py::arg("delta") = 0.0, py::arg("mode") = "clipped",
        py::arg("seed") = kDefaultSeed);
  m.def("empirical_order",
        [](const std::string& name, const std::vector<long>& grid, double horizon) {
          const auto ode = exp_ode();
          return empirical_order(method(name), ode.field, ode.exact, ode.tau0, horizon, grid)
              .slope;
        },
        py::arg("method"), py::arg("grid") = std::vector<long>{8, 16, 32, 64, 128},
        py::arg("horizon") = 5.0);

  m.def("shots_to_delta", &shots_to_delta);
  m.def("delta_to_shots", &delta_to_shots);
  m.def("validate_noisy_bound",
        [](const std::string& scen, const std::string& name, long n_steps, double delta,
           long trials, std::uint64_t seed) {
          const auto sc = scenario(scen);
          const auto rep = validate_noisy_bound(
              sc.pb, sc.K, method(name),
              NoisyCampaign{n_steps, delta, trials, seed, NoiseMode::clipped_gaussian, 0.05});
          py::dict d;
          d["trials"] = rep.trials;
          d["violations"] = rep.violations;
          d["max_ratio"] = rep.max_ratio;
          d["passed"] = rep.passed();
          return d;
        },
        py::arg("scenario"), py::arg("method"), py::arg("n_steps"), py::arg("delta"),
        py::arg("trials") = 1000, py::arg("seed") = kDefaultSeed);

  m.def("sample_toy", [](int n_v, double theta, std::uint64_t seed) {
    const auto s = sample_toy(n_v, theta, seed);
    return py::make_tuple(s.system.A, s.system.C);
  });
  m.def("condition_number", &condition_number);
  m.def("kappa_study", [](const std::vector<int>& grid, int samples, double theta,
                          std::uint64_t seed) {
    py::list out;
    for (const auto& r : kappa_study({grid, samples, theta, seed})) {
      py::dict d;
      d["N_V"] = r.n_v;
      d["median"] = r.median;
      d["q16"] = r.q16;
      d["q84"] = r.q84;
      d["excluded"] = r.excluded;
      out.append(d);
    }
    return out;
  });
  m.def("perturbation_bound", &perturbation_bound);
  m.def("perturbation_empirical", &perturbation_empirical);

  m.def("payoff", &payoff);
  m.def("bs_transform", [](double sigma_vol, double rate, double t_final) {
    const auto h = bs_transform({sigma_vol, rate, 100.0, t_final});
    return py::make_tuple(h.a, h.b, h.T);
  });
  m.def("heat_evolve", [](const std::vector<double>& u0, double dx, double tau) {
    return heat_evolve(u0, dx, tau);
  });
  m.def("recover_price", &recover_price);
  m.def("heat_call_prices",
        [](double sigma_vol, double rate, double strike, double t_final, double dx) {
          const auto p = heat_call_prices({sigma_vol, rate, strike, t_final}, dx);
          return py::make_tuple(p.x, p.prices);
        },
        py::arg("sigma_vol"), py::arg("rate"), py::arg("strike"), py::arg("t_final"),
        py::arg("dx") = 0.005);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
