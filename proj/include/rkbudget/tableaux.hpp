#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rkbudget {

/**
 * @brief Explicit Runge-Kutta method in Butcher form.
 *
 * `a` is stored as a full s x s matrix so that entries on or above the
 * diagonal can be detected by validate_tableau(); explicit methods keep
 * them at zero.
 */
struct ButcherTableau {
  std::string name;
  int order = 1;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;

  int stages() const { return static_cast<int>(b.size()); }
};

enum class MethodId { euler, heun2, kutta3, rk4 };

/// Scalars of a method that enter the error and budget formulas.
struct MethodProfile {
  int order = 1;
  int stages = 1;
  double a_max = 0.0;
  double b_max = 1.0;
  double K = 1.0;
};

ButcherTableau builtin_tableau(MethodId id);

/// Accepts "euler", "heun2", "kutta3", "rk4". Throws std::invalid_argument.
MethodId method_from_name(std::string_view name);
std::string_view method_name(MethodId id);
std::vector<MethodId> builtin_methods();

/// Violated consistency constraints; empty means the tableau is valid.
std::vector<std::string> validate_tableau(const ButcherTableau& t);

/// Requires a valid tableau and K > 0, otherwise std::invalid_argument.
MethodProfile profile(const ButcherTableau& t, double K);

/// Profile of a hypothetical order-p method with the minimal stage count.
/// Used by the budget formulas, which never look at stage coefficients.
MethodProfile order_profile(int p, double K, double a_max = 1.0, double b_max = 1.0);

/// Minimum number of stages of an explicit method of order p, 1 <= p <= 10.
int min_stages(int p);

// Text format: "s p", then s rows of a (row i holds i-1 numbers), one row
// of b, one row of c. Whitespace separated.
ButcherTableau read_tableau(std::istream& in, std::string name = "custom");
ButcherTableau load_tableau(const std::filesystem::path& path);
void write_tableau(std::ostream& out, const ButcherTableau& t);

}  // namespace rkbudget
