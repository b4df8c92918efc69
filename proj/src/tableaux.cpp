#include "rkbudget/tableaux.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rkbudget {

namespace {

constexpr double kConsistencyTol = 1e-12;

ButcherTableau make(std::string name, int order, std::vector<std::vector<double>> lower,
                    std::vector<double> b, std::vector<double> c) {
  const auto s = b.size();
  ButcherTableau t{std::move(name), order, {}, std::move(b), std::move(c)};
  t.a.assign(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < lower.size(); ++i)
    for (std::size_t j = 0; j < lower[i].size(); ++j) t.a[i][j] = lower[i][j];
  return t;
}

}  // namespace

ButcherTableau builtin_tableau(MethodId id) {
  switch (id) {
    case MethodId::euler:
      return make("euler", 1, {{}}, {1.0}, {0.0});
    case MethodId::heun2:
      return make("heun2", 2, {{}, {1.0}}, {0.5, 0.5}, {0.0, 1.0});
    case MethodId::kutta3:
      return make("kutta3", 3, {{}, {0.5}, {-1.0, 2.0}}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                  {0.0, 0.5, 1.0});
    case MethodId::rk4:
      return make("rk4", 4, {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                  {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}, {0.0, 0.5, 0.5, 1.0});
  }
  throw std::invalid_argument("unknown method id");
}

MethodId method_from_name(std::string_view name) {
  for (auto id : builtin_methods())
    if (method_name(id) == name) return id;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected euler, heun2, kutta3 or rk4)");
}

std::string_view method_name(MethodId id) {
  switch (id) {
    case MethodId::euler: return "euler";
    case MethodId::heun2: return "heun2";
    case MethodId::kutta3: return "kutta3";
    case MethodId::rk4: return "rk4";
  }
  return "?";
}

std::vector<MethodId> builtin_methods() {
  return {MethodId::euler, MethodId::heun2, MethodId::kutta3, MethodId::rk4};
}

std::vector<std::string> validate_tableau(const ButcherTableau& t) {
  std::vector<std::string> report;
  const auto s = t.b.size();
  if (s == 0) {
    report.emplace_back("no stages");
    return report;
  }
  if (t.order < 1) report.emplace_back("order < 1");
  if (t.c.size() != s) report.emplace_back("len(c) != s");
  bool shape_ok = t.a.size() == s;
  for (const auto& row : t.a) shape_ok = shape_ok && row.size() == s;
  if (!shape_ok) report.emplace_back("a is not s x s");
  if (!report.empty()) return report;

  double sum_b = 0.0;
  for (double bi : t.b) sum_b += bi;
  if (std::abs(sum_b - 1.0) > kConsistencyTol) report.emplace_back("sum(b) ≠ 1");

  if (std::abs(t.c[0]) > kConsistencyTol) report.emplace_back("c_1 ≠ 0");

  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      if (t.a[i][j] != 0.0) {
        report.push_back("a not strictly lower triangular at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      }
    }
  }
  for (std::size_t i = 1; i < s; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < i; ++j) row += t.a[i][j];
    if (std::abs(row - t.c[i]) > kConsistencyTol)
      report.push_back("row-sum ≠ c_" + std::to_string(i + 1));
  }
  return report;
}

MethodProfile profile(const ButcherTableau& t, double K) {
  if (!(K > 0.0)) throw std::invalid_argument("error constant K must be positive");
  if (auto report = validate_tableau(t); !report.empty())
    throw std::invalid_argument("invalid tableau '" + t.name + "': " + report.front());
  MethodProfile prof;
  prof.order = t.order;
  prof.stages = t.stages();
  prof.K = K;
  prof.a_max = 0.0;
  for (const auto& row : t.a)
    for (double v : row) prof.a_max = std::max(prof.a_max, std::abs(v));
  prof.b_max = 0.0;
  for (double v : t.b) prof.b_max = std::max(prof.b_max, std::abs(v));
  return prof;
}

MethodProfile order_profile(int p, double K, double a_max, double b_max) {
  if (!(K > 0.0)) throw std::invalid_argument("error constant K must be positive");
  if (!(b_max > 0.0) || !(a_max >= 0.0))
    throw std::invalid_argument("need a_max >= 0 and b_max > 0");
  return MethodProfile{p, min_stages(p), a_max, b_max, K};
}

int min_stages(int p) {
  // Orders 5..10; orders up to 4 need exactly p stages.
  static constexpr std::array<int, 6> kHigh{6, 7, 9, 11, 13, 16};
  if (p < 1 || p > 10) throw std::out_of_range("order must lie in 1..10");
  return p <= 4 ? p : kHigh[static_cast<std::size_t>(p - 5)];
}

ButcherTableau read_tableau(std::istream& in, std::string name) {
  auto need = [&in](const char* what) {
    double v;
    if (!(in >> v)) throw std::runtime_error(std::string("tableau file: missing ") + what);
    return v;
  };
  int s = 0;
  int p = 0;
  if (!(in >> s >> p) || s < 1 || p < 1)
    throw std::runtime_error("tableau file: header must be 's p' with positive integers");
  ButcherTableau t;
  t.name = std::move(name);
  t.order = p;
  t.a.assign(static_cast<std::size_t>(s), std::vector<double>(static_cast<std::size_t>(s), 0.0));
  for (int i = 1; i < s; ++i)
    for (int j = 0; j < i; ++j) t.a[i][j] = need("a coefficient");
  for (int i = 0; i < s; ++i) t.b.push_back(need("b coefficient"));
  for (int i = 0; i < s; ++i) t.c.push_back(need("c coefficient"));
  std::string extra;
  if (in >> extra) throw std::runtime_error("tableau file: trailing content '" + extra + "'");
  return t;
}

ButcherTableau load_tableau(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tableau file " + path.string());
  return read_tableau(in, path.stem().string());
}

void write_tableau(std::ostream& out, const ButcherTableau& t) {
  const auto old = out.precision(17);
  const auto s = t.stages();
  out << s << ' ' << t.order << '\n';
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < i; ++j) out << (j ? " " : "") << t.a[i][j];
    out << '\n';
  }
  for (int i = 0; i < s; ++i) out << (i ? " " : "") << t.b[i];
  out << '\n';
  for (int i = 0; i < s; ++i) out << (i ? " " : "") << t.c[i];
  out << '\n';
  out.precision(old);
}

}  // namespace rkbudget
