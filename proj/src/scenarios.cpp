#include "rkbudget/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <stdexcept>

namespace rkbudget {

Scenario scenario(std::string_view name) {
  Scenario sc;
  sc.name = std::string(name);
  if (name == "classical") {
    sc.pb = ProblemBounds{0.5, 3.1, 13.0, 5.0, 1e-3};
    sc.b_max = 1.0;
    sc.K = 5.0;
    return sc;
  }
  if (name == "option_pricing" || name == "tuned") {
    sc.pb = ProblemBounds{15.0, 15.0, 60.0, 0.04, 1e-3};
    sc.K = 5.0;
    sc.dims = AnsatzDims{25, 1, 16, 0.5, 1.0};
    sc.sigma = 3.4e8;
    sc.eta = 0.05;
    sc.s_factor = 1.0;
    if (name == "tuned") {
      sc.b_max = 0.5;
      sc.pb.L_fy = 0.1;
      sc.pb.T = 4.0;
      sc.K = 20.0;
    }
    return sc;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) +
                              "' (expected classical, option_pricing or tuned)");
}

std::vector<std::string> scenario_names() { return {"classical", "option_pricing", "tuned"}; }

namespace {

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v))
    throw std::invalid_argument("override " + std::string(key) + ": not a number: '" +
                                std::string(text) + "'");
  return v;
}

int parse_count(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || v < 1)
    throw std::invalid_argument("override " + std::string(key) +
                                ": expected a positive integer, got '" + std::string(text) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

AnsatzDims& dims_of(Scenario& sc, std::string_view key) {
  if (!sc.dims)
    throw std::invalid_argument("override " + std::string(key) +
                                " needs a noisy scenario (set Sigma first)");
  return *sc.dims;
}

}  // namespace

void apply_override(Scenario& sc, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto real = [&] { return parse_real(key, value); };
  if (key == "a_max") sc.a_max = real();
  else if (key == "b_max") sc.b_max = real();
  else if (key == "K") sc.K = real();
  else if (key == "L_fy") sc.pb.L_fy = real();
  else if (key == "L_ftau") sc.pb.L_ftau = real();
  else if (key == "M") sc.pb.M = real();
  else if (key == "T") sc.pb.T = real();
  else if (key == "epsilon") sc.pb.eps_target = real();
  else if (key == "Sigma") {
    sc.sigma = real();
    if (!sc.dims) sc.dims = AnsatzDims{};
    if (!sc.eta) sc.eta = 0.05;
  } else if (key == "eta") sc.eta = real();
  else if (key == "S") sc.s_factor = real();
  else if (key == "N_V") dims_of(sc, key).n_params = parse_count(key, value);
  else if (key == "N_d") dims_of(sc, key).n_layer_terms = parse_count(key, value);
  else if (key == "N") dims_of(sc, key).n_hamiltonian_terms = parse_count(key, value);
  else
    throw std::invalid_argument("unknown override key '" + std::string(key) + "'");
}

void apply_override(Scenario& sc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw std::invalid_argument("override must be key=value: '" + std::string(assignment) + "'");
  apply_override(sc, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void apply_overrides(Scenario& sc, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    try {
      apply_override(sc, v);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

BudgetInputs budget_inputs(const Scenario& sc) {
  BudgetInputs in;
  in.pb = sc.pb;
  in.K = sc.K;
  in.a_max = sc.a_max;
  in.b_max = sc.b_max;
  if (sc.sigma) in.noisy = NoisyBudgetInputs{*sc.sigma, sc.dims.value_or(AnsatzDims{})};
  return in;
}

ExpOde exp_ode() {
  ExpOde ode;
  ode.field = [](double, std::span<const double> y) {
    State d(y.begin(), y.end());
    for (auto& v : d) v *= 0.5;
    return d;
  };
  ode.exact = [](double tau) { return State{std::exp(0.5 * tau)}; };
  ode.y0 = State{1.0};
  return ode;
}

HeatTransform bs_transform(const BlackScholesSpec& spec) {
  if (!(spec.sigma_vol > 0.0)) throw std::invalid_argument("volatility must be positive");
  if (!(spec.t_final > 0.0)) throw std::invalid_argument("t_final must be positive");
  const double s2 = spec.sigma_vol * spec.sigma_vol;
  HeatTransform h;
  h.a = 0.5 - spec.rate / s2;
  h.b = -0.5 * h.a * h.a - spec.rate / s2;
  h.T = spec.t_final * s2;
  return h;
}

double payoff(double S, double strike) { return std::max(S - strike, 0.0); }

std::vector<double> heat_evolve(std::span<const double> u0, double dx, double tau) {
  if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (!(tau >= 0.0)) throw std::invalid_argument("elapsed time must be non-negative");
  const std::size_t n = u0.size();
  if (tau == 0.0 || n == 0) return {u0.begin(), u0.end()};

  // Beyond 10 standard deviations the kernel is below double round-off.
  const double sd = std::sqrt(tau);
  const auto reach = static_cast<std::ptrdiff_t>(
      std::min<double>(std::ceil(10.0 * sd / dx), static_cast<double>(n)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
  for (std::ptrdiff_t j = -reach; j <= reach; ++j) {
    const double x = static_cast<double>(j) * dx;
    kernel[static_cast<std::size_t>(j + reach)] = std::exp(-x * x / (2.0 * tau));
  }
  const double norm = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (auto& k : kernel) k /= norm;

  std::vector<double> out(n, 0.0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - reach);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + reach);
    double acc = 0.0;
    for (std::ptrdiff_t m = lo; m <= hi; ++m)
      acc += kernel[static_cast<std::size_t>(i - m + reach)] * u0[static_cast<std::size_t>(m)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double recover_price(double p_x, double gamma_inv, double a, double b, double t_final,
                     double sigma_vol, double x) {
  if (!(p_x >= 0.0)) throw std::invalid_argument("grid weight must be non-negative");
  return gamma_inv * p_x * std::exp(a * x + b * t_final * sigma_vol * sigma_vol);
}

HeatPricing heat_call_prices(const BlackScholesSpec& spec, double dx, double half_width) {
  if (!(spec.strike > 0.0)) throw std::invalid_argument("strike must be positive");
  if (!(dx > 0.0) || !(half_width > dx)) throw std::invalid_argument("bad pricing grid");
  const HeatTransform h = bs_transform(spec);
  const double centre = std::log(spec.strike);
  const auto half = static_cast<long>(std::llround(half_width / dx));

  HeatPricing out;
  std::vector<double> u0;
  for (long j = -half; j <= half; ++j) {
    const double x = centre + static_cast<double>(j) * dx;
    out.x.push_back(x);
    u0.push_back(std::exp(-h.a * x) * payoff(std::exp(x), spec.strike));
  }

  // Amplitudes are kept normalized; the normalizations are tracked in gamma_inv.
  const double z0 = std::accumulate(u0.begin(), u0.end(), 0.0);
  for (auto& v : u0) v /= z0;
  std::vector<double> p = heat_evolve(u0, dx, h.T);
  const double z1 = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= z1;
  const double gamma_inv = z0 * z1;

  out.prices.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out.prices.push_back(
        recover_price(p[i], gamma_inv, h.a, h.b, spec.t_final, spec.sigma_vol, out.x[i]));
  return out;
}

}  // namespace rkbudget
