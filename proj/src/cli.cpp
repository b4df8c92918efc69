#include "rkbudget/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rkbudget/harness.hpp"
#include "rkbudget/sensitivity.hpp"
#include "rkbudget/toymodel.hpp"

namespace rkbudget {

namespace {

// Configuration problems detected after parsing; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size())
    throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<long> parse_int_list(const std::string& spec) {
  std::vector<long> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2 && parts.size() != 3) throw UsageError("range must be a:b or a:b:step");
    const long lo = parse_number<long>(parts[0]);
    const long hi = parse_number<long>(parts[1]);
    const long step = parts.size() == 3 ? parse_number<long>(parts[2]) : 1;
    if (step < 1 || hi < lo) throw UsageError("bad range '" + spec + "'");
    for (long v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  for (const auto& p : split(spec, ',')) out.push_back(parse_number<long>(p));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_number<double>(p));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

namespace {

struct Common {
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = kDefaultSeed;
};

struct ScenarioOpts {
  std::string name = "classical";
  std::string overrides_file;
  std::vector<std::string> sets;

  Scenario load() const {
    Scenario sc = scenario(name);
    if (!overrides_file.empty()) {
      std::ifstream in(overrides_file);
      if (!in) throw UsageError("cannot read overrides file '" + overrides_file + "'");
      apply_overrides(sc, in);
    }
    for (const auto& s : sets) apply_override(sc, s);
    return sc;
  }
};

void add_common(CLI::App* cmd, Common& c, bool seeded) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", c.output, "Output file (default: standard output)");
  if (seeded) cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_scenario(CLI::App* cmd, ScenarioOpts& s) {
  cmd->add_option("--scenario", s.name, "classical, option_pricing or tuned")
      ->capture_default_str();
  cmd->add_option("--overrides", s.overrides_file, "key=value override file");
  cmd->add_option("--set", s.sets, "Inline override key=value (repeatable)");
}

ButcherTableau load_method(const std::string& method, const std::string& tableau_file) {
  if (!tableau_file.empty()) {
    ButcherTableau t = load_tableau(tableau_file);
    if (auto report = validate_tableau(t); !report.empty())
      throw UsageError("tableau '" + tableau_file + "' is inconsistent: " + report.front());
    return t;
  }
  return builtin_tableau(method_from_name(method));
}

// Writes to --output or `out`; returns the stream in use.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot write '" + path + "'");
    out_ = &file_;
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

Json scenario_json(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["a_max"] = sc.a_max;
  j["b_max"] = sc.b_max;
  j["K"] = sc.K;
  j["L_fy"] = sc.pb.L_fy;
  j["L_ftau"] = sc.pb.L_ftau;
  j["M"] = sc.pb.M;
  j["T"] = sc.pb.T;
  j["epsilon"] = sc.pb.eps_target;
  if (sc.sigma) j["Sigma"] = *sc.sigma;
  if (sc.eta) j["eta"] = *sc.eta;
  if (sc.s_factor) j["S"] = *sc.s_factor;
  if (sc.dims) {
    j["N_V"] = sc.dims->n_params;
    j["N_d"] = sc.dims->n_layer_terms;
    j["N"] = sc.dims->n_hamiltonian_terms;
  }
  return j;
}

void write_key_values(std::ostream& out, const Json& j) {
  out << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    out << k << ',';
    if (v.is_number_float()) out << format_real(v.get<double>());
    else if (v.is_string()) out << v.get<std::string>();
    else if (v.is_primitive()) out << v.dump();
    else {
      std::ostringstream compact;
      write_json(compact, v, -1);
      std::string s = compact.str();
      s.pop_back();
      out << '"' << s << '"';
    }
    out << '\n';
  }
}

Json stats_json(const QuantileStats& s) {
  Json j;
  j["N_V"] = s.n_v;
  j["median"] = s.median;
  j["q16"] = s.q16;
  j["q84"] = s.q84;
  j["excluded"] = s.excluded;
  return j;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return kDefaultSeed;
  try {
    return parse_number<std::uint64_t>(env);
  } catch (const UsageError&) {
    throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
  }
}

std::vector<int> to_dims(const std::vector<long>& v) {
  std::vector<int> out;
  for (long n : v) {
    if (n < 1 || n > 100000) throw UsageError("N_V values must be positive");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runge-Kutta error bounds and resource budgets under shot noise", "rkbudget"};
  app.require_subcommand(1);

  Common common;
  ScenarioOpts scen;
  try {
    common.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  auto* show = app.add_subcommand("scenario", "Print a scenario's parameters");
  add_scenario(show, scen);
  add_common(show, common, false);

  int p_min = 1, p_max = 10;
  auto* table = app.add_subcommand("table", "Budget table over orders p");
  add_scenario(table, scen);
  add_common(table, common, false);
  table->add_option("--p-min", p_min)->capture_default_str();
  table->add_option("--p-max", p_max)->capture_default_str();

  std::string target = "all", mode = "cost", factors;
  int base_order = 2;
  auto* sweep_cmd = app.add_subcommand("sweep", "One-at-a-time parameter sweep");
  add_scenario(sweep_cmd, scen);
  add_common(sweep_cmd, common, false);
  sweep_cmd->add_option("--target", target, "Parameter name or 'all'")->capture_default_str();
  sweep_cmd->add_option("--mode", mode, "cost or ncirc")->capture_default_str();
  sweep_cmd->add_option("--factors", factors, "Comma-separated scale factors");
  sweep_cmd->add_option("--order", base_order, "Order for non-p curves")->capture_default_str();

  std::string nv = "10,25,50,100";
  int samples = 100, grid_points = 200;
  double theta = 0.5;
  std::string range = "0:10";
  double lip_threshold = 15.0;
  auto* toy = app.add_subcommand("toy", "Fourier toy-model studies");
  toy->require_subcommand(1);
  auto* kappa = toy->add_subcommand("kappa", "Condition-number quantiles");
  auto* norms = toy->add_subcommand("norms", "Norm quantiles of A, C, A^-1 C");
  auto* lip = toy->add_subcommand("lip", "Lipschitz surface of A^-1 C");
  for (auto* c : {kappa, norms}) {
    add_common(c, common, true);
    c->add_option("--nv", nv, "N_V list or a:b:step range")->capture_default_str();
    c->add_option("--samples", samples)->capture_default_str();
    c->add_option("--theta", theta)->capture_default_str();
  }
  std::string lip_nv = "25";
  add_common(lip, common, true);
  lip->add_option("--nv", lip_nv, "N_V")->capture_default_str();
  lip->add_option("--grid", grid_points, "Points per axis")->capture_default_str();
  lip->add_option("--range", range, "Axis range lo:hi")->capture_default_str();
  lip->add_option("--threshold", lip_threshold, "Reported fraction threshold")
      ->capture_default_str();

  std::string method = "euler", tableau_file, noise_mode = "clipped", ntau = "100";
  std::optional<double> delta, shots, sigma;
  long trials = 1000;
  double eta = 0.05;
  std::optional<double> K_override;
  auto* validate = app.add_subcommand("validate", "Empirical bound-dominance campaign");
  add_common(validate, common, true);
  validate->add_option("--method", method)->capture_default_str();
  validate->add_option("--tableau", tableau_file, "Tableau file instead of a built-in");
  validate->add_option("--mode", noise_mode, "clipped or gaussian")->capture_default_str();
  validate->add_option("--delta", delta, "Per-evaluation noise bound");
  validate->add_option("--shots", shots, "Shots per evaluation (with --sigma)");
  validate->add_option("--sigma", sigma, "Sigma (with --shots)");
  validate->add_option("--ntau", ntau, "Step count(s)")->capture_default_str();
  validate->add_option("--trials", trials)->capture_default_str();
  validate->add_option("--eta", eta)->capture_default_str();
  validate->add_option("--K", K_override, "Error constant (default: scenario K)");
  std::string val_scenario = "classical";
  validate->add_option("--scenario", val_scenario, "Scenario supplying L_fy, L_ftau, M, T")
      ->capture_default_str();

  std::string conv_grid = "8,16,32,64,128";
  double horizon = 5.0;
  auto* conv = app.add_subcommand("convergence", "Empirical order on dy/dtau = y/2");
  add_common(conv, common, false);
  conv->add_option("--method", method)->capture_default_str();
  conv->add_option("--tableau", tableau_file, "Tableau file instead of a built-in");
  conv->add_option("--grid", conv_grid, "Step counts")->capture_default_str();
  conv->add_option("--horizon", horizon)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const bool json = common.format == "json";
    Sink sink(common.output, out);
    std::ostream& os = sink.stream();

    if (*show) {
      const Json j = scenario_json(scen.load());
      if (json) write_json(os, j);
      else write_key_values(os, j);
      return 0;
    }

    if (*table) {
      const auto rows = budget_table(budget_inputs(scen.load()), p_min, p_max);
      if (json) write_json(os, budget_json(rows));
      else write_budget_csv(os, rows);
      return 0;
    }

    if (*sweep_cmd) {
      const Scenario sc = scen.load();
      const SweepMode m = sweep_mode_from_name(mode);
      const auto grid = factors.empty() ? default_factors() : parse_real_list(factors);
      std::vector<SweepCurve> curves;
      if (target == "all") curves = sweep_all(sc, m, grid, base_order);
      else curves.push_back(sweep({sc, target_from_name(target), grid, m, base_order}));
      if (!json) {
        write_sweep_csv(os, curves);
        return 0;
      }
      Json j;
      j["scenario"] = sc.name;
      j["mode"] = mode;
      j["order"] = base_order;
      Json arr = Json::array();
      for (const auto& c : curves)
        for (const auto& pt : c.points)
          arr.push_back({{"target", target_name(c.target)},
                         {"factor", pt.factor},
                         {"value", pt.feasible ? Json(pt.value) : Json(nullptr)},
                         {"feasible", pt.feasible}});
      j["points"] = std::move(arr);
      Json overlaps = Json::array();
      for (const auto& [a, b] : overlap_check(curves))
        overlaps.push_back({target_name(a), target_name(b)});
      j["overlaps"] = std::move(overlaps);
      write_json(os, j);
      return 0;
    }

    if (*kappa || *norms) {
      StudyOptions opts{to_dims(parse_int_list(nv)), samples, theta, common.seed};
      if (*kappa) {
        const auto rows = kappa_study(opts);
        if (!json) {
          write_kappa_csv(os, rows);
          return 0;
        }
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(stats_json(r));
        write_json(os, arr);
        return 0;
      }
      const auto rows = norm_study(opts);
      if (!json) {
        write_norms_csv(os, rows);
        return 0;
      }
      Json arr = Json::array();
      for (const auto& r : rows)
        arr.push_back({{"N_V", r.a_norm.n_v},
                       {"A_frobenius", stats_json(r.a_norm)},
                       {"C_norm", stats_json(r.c_norm)},
                       {"solution_norm", stats_json(r.solution_norm)}});
      write_json(os, arr);
      return 0;
    }

    if (*lip) {
      const auto dims = to_dims(parse_int_list(lip_nv));
      if (dims.size() != 1) throw UsageError("lip takes a single N_V");
      const auto bounds = split(range, ':');
      if (bounds.size() != 2) throw UsageError("--range must be lo:hi");
      const auto axis =
          linspace(parse_number<double>(bounds[0]), parse_number<double>(bounds[1]), grid_points);
      Rng rng(derive_seed(common.seed, {static_cast<std::uint64_t>(dims[0])}));
      const auto surface = lip_surface(ToyParams::draw(dims[0], rng), axis, axis);
      if (!json) {
        write_lip_csv(os, surface);
        return 0;
      }
      Json j;
      j["N_V"] = dims[0];
      j["seed"] = common.seed;
      j["theta1"] = surface.theta1;
      j["theta2"] = surface.theta2;
      j["values"] = surface.values;
      j["singular_cells"] = surface.singular_cells;
      j["threshold"] = lip_threshold;
      j["fraction_below_threshold"] = fraction_below(surface, lip_threshold);
      write_json(os, j);
      return 0;
    }

    if (*validate) {
      const Scenario sc = scenario(val_scenario);
      const double K = K_override.value_or(sc.K);
      const ButcherTableau t = load_method(method, tableau_file);
      if (delta && (shots || sigma)) throw UsageError("give either --delta or --shots/--sigma");
      if (shots.has_value() != sigma.has_value()) throw UsageError("--shots needs --sigma");
      const double d = delta ? *delta : shots ? shots_to_delta(*sigma, *shots) : 0.0;
      const auto steps = parse_int_list(ntau);
      CampaignReport report;
      if (d == 0.0) {
        report = validate_noiseless_bound(sc.pb, K, t, steps);
      } else {
        if (steps.size() != 1) throw UsageError("noisy campaigns take a single --ntau");
        report = validate_noisy_bound(
            sc.pb, K, t,
            NoisyCampaign{steps[0], d, trials, common.seed, noise_mode_from_name(noise_mode), eta});
      }
      const Json j = report_json(report);
      if (json) {
        write_json(os, j);
      } else {
        Json flat = j;
        flat.erase("config");
        for (const auto& [k, v] : j["config"].items()) flat["config." + k] = v;
        write_key_values(os, flat);
      }
      return report.passed() ? 0 : 1;
    }

    if (*conv) {
      const ButcherTableau t = load_method(method, tableau_file);
      const ExpOde ode = exp_ode();
      const auto res = empirical_order(t, ode.field, ode.exact, ode.tau0, horizon,
                                       parse_int_list(conv_grid));
      if (json) {
        Json pts = Json::array();
        for (std::size_t i = 0; i < res.steps.size(); ++i)
          pts.push_back({{"steps", res.steps[i]},
                         {"dt", res.step_sizes[i]},
                         {"error", res.errors[i]}});
        write_json(os, {{"method", t.name},
                        {"order", t.order},
                        {"slope", res.slope},
                        {"degenerate", res.degenerate},
                        {"points", pts}});
      } else {
        os << "method,steps,dt,error,slope\n";
        for (std::size_t i = 0; i < res.steps.size(); ++i)
          os << t.name << ',' << res.steps[i] << ',' << format_real(res.step_sizes[i]) << ','
             << format_real(res.errors[i]) << ',' << format_real(res.slope) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace rkbudget
