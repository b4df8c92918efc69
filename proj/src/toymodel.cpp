#include "rkbudget/toymodel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include "rkbudget/io.hpp"

namespace rkbudget {

namespace {

constexpr double kParamSd = 0.1;

std::array<double, 5> draw_alpha(Rng& rng) {
  std::normal_distribution<double> amp(1.0, kParamSd);
  std::normal_distribution<double> freq(0.0, kParamSd);
  std::array<double, 5> a{};
  a[0] = amp(rng);
  a[1] = freq(rng);
  a[2] = freq(rng);
  a[3] = amp(rng);
  a[4] = freq(rng);
  return a;
}

void check_dim(int n_v) {
  if (n_v < 1) throw std::invalid_argument("N_V must be at least 1");
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw std::invalid_argument("matrix must be square and non-empty");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const auto pivots = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < pivots.size(); ++i)
    if (pivots[i] == 0.0 || !std::isfinite(pivots[i]))
      throw SingularMatrixError("matrix is singular");
  return lu;
}

}  // namespace

ToyParams ToyParams::draw(int n_v, Rng& rng) {
  check_dim(n_v);
  ToyParams p;
  p.n_v = n_v;
  const auto n = static_cast<std::size_t>(n_v);
  p.a.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) p.a.push_back(draw_alpha(rng));
  p.c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) p.c.push_back(draw_alpha(rng));
  return p;
}

ToyParams ToyParams::constant(int n_v) {
  check_dim(n_v);
  const auto n = static_cast<std::size_t>(n_v);
  const std::array<double, 5> one{1.0, 0.0, 0.0, 1.0, 0.0};
  return ToyParams{n_v, std::vector(n * n, one), std::vector(n, one)};
}

double toy_entry(const std::array<double, 5>& al, double theta) {
  return al[0] * std::cos(al[1] * theta + al[2]) + al[3] * std::sin(al[4] * theta);
}

ToySystem evaluate(const ToyParams& params, double theta) {
  const int n = params.n_v;
  ToySystem s;
  s.theta = theta;
  s.A.resize(n, n);
  s.C.resize(n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l)
      s.A(k, l) = toy_entry(params.a[static_cast<std::size_t>(k * n + l)], theta);
    s.C(k) = toy_entry(params.c[static_cast<std::size_t>(k)], theta);
  }
  return s;
}

ToySample sample_toy(int n_v, double theta, std::uint64_t seed) {
  Rng rng(seed);
  ToySample out;
  out.params = ToyParams::draw(n_v, rng);
  out.system = evaluate(out.params, theta);
  return out;
}

double condition_number(const Eigen::MatrixXd& A) {
  const auto lu = factor(A);
  const double k = A.norm() * lu.inverse().norm();
  if (!std::isfinite(k)) throw SingularMatrixError("matrix is numerically singular");
  return k;
}

Eigen::VectorXd solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& C) {
  if (C.size() != A.rows()) throw std::invalid_argument("dimension mismatch in A f = C");
  Eigen::VectorXd f = factor(A).solve(C);
  if (!f.allFinite()) throw SingularMatrixError("matrix is numerically singular");
  return f;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

QuantileStats summarize(int n_v, const std::vector<double>& v, int excluded) {
  return QuantileStats{n_v, quantile(v, 0.5), quantile(v, 0.16), quantile(v, 0.84), excluded};
}

struct Draw {
  bool kept = false;
  double kappa = 0.0;
  double a_norm = 0.0;
  double c_norm = 0.0;
  double solution_norm = 0.0;
};

Draw study_draw(int n_v, int index, const StudyOptions& opts) {
  const auto seed = derive_seed(opts.seed, {static_cast<std::uint64_t>(n_v),
                                            static_cast<std::uint64_t>(index)});
  const ToySystem sys = sample_toy(n_v, opts.theta, seed).system;
  Draw d;
  try {
    d.kappa = condition_number(sys.A);
    if (d.kappa > kNearSingular) return d;
    d.a_norm = sys.A.norm();
    d.c_norm = sys.C.norm();
    d.solution_norm = solve(sys.A, sys.C).norm();
    d.kept = true;
  } catch (const SingularMatrixError&) {
  }
  return d;
}

void check_options(const StudyOptions& opts) {
  if (opts.samples < 30) throw std::invalid_argument("studies need at least 30 samples");
  if (opts.nv_grid.empty()) throw std::invalid_argument("N_V grid is empty");
  for (int n : opts.nv_grid) check_dim(n);
}

template <class Fn>
void for_each_dim(const StudyOptions& opts, Fn&& fn) {
  check_options(opts);
  for (int n : opts.nv_grid) {
    std::vector<Draw> draws;
    draws.reserve(static_cast<std::size_t>(opts.samples));
    for (int i = 0; i < opts.samples; ++i) draws.push_back(study_draw(n, i, opts));
    fn(n, draws);
  }
}

}  // namespace

std::vector<QuantileStats> kappa_study(const StudyOptions& opts) {
  std::vector<QuantileStats> out;
  for_each_dim(opts, [&](int n, const std::vector<Draw>& draws) {
    std::vector<double> k;
    int excluded = 0;
    for (const auto& d : draws) {
      if (d.kept) k.push_back(d.kappa);
      else ++excluded;
    }
    out.push_back(summarize(n, k, excluded));
  });
  return out;
}

std::vector<NormStats> norm_study(const StudyOptions& opts) {
  std::vector<NormStats> out;
  for_each_dim(opts, [&](int n, const std::vector<Draw>& draws) {
    std::vector<double> a, c, f;
    int excluded = 0;
    for (const auto& d : draws) {
      if (!d.kept) {
        ++excluded;
        continue;
      }
      a.push_back(d.a_norm);
      c.push_back(d.c_norm);
      f.push_back(d.solution_norm);
    }
    out.push_back({summarize(n, a, excluded), summarize(n, c, excluded),
                   summarize(n, f, excluded)});
  });
  return out;
}

namespace {

void write_stats(std::ostream& out, const QuantileStats& s) {
  out << s.n_v << ',' << format_real(s.median) << ',' << format_real(s.q16) << ','
      << format_real(s.q84) << ',' << s.excluded << '\n';
}

}  // namespace

void write_kappa_csv(std::ostream& out, const std::vector<QuantileStats>& rows) {
  out << "N_V,median,q16,q84,excluded\n";
  for (const auto& r : rows) write_stats(out, r);
}

void write_norms_csv(std::ostream& out, const std::vector<NormStats>& rows) {
  out << "quantity,N_V,median,q16,q84,excluded\n";
  const std::pair<const char*, QuantileStats NormStats::*> columns[] = {
      {"A_frobenius", &NormStats::a_norm},
      {"C_norm", &NormStats::c_norm},
      {"solution_norm", &NormStats::solution_norm}};
  for (const auto& [name, member] : columns)
    for (const auto& r : rows) {
      out << name << ',';
      write_stats(out, r.*member);
    }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

LipSurface lip_surface(const ToyParams& params, const std::vector<double>& theta1,
                       const std::vector<double>& theta2) {
  auto solutions = [&params](const std::vector<double>& grid) {
    std::vector<std::optional<Eigen::VectorXd>> f;
    f.reserve(grid.size());
    for (double t : grid) {
      const ToySystem sys = evaluate(params, t);
      try {
        if (condition_number(sys.A) <= kNearSingular) {
          f.emplace_back(solve(sys.A, sys.C));
          continue;
        }
      } catch (const SingularMatrixError&) {
      }
      f.emplace_back(std::nullopt);
    }
    return f;
  };
  const auto f1 = solutions(theta1);
  const auto f2 = solutions(theta2);

  LipSurface s;
  s.theta1 = theta1;
  s.theta2 = theta2;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.values.assign(theta1.size(), std::vector<double>(theta2.size(), nan));
  for (std::size_t i = 0; i < theta1.size(); ++i)
    for (std::size_t j = 0; j < theta2.size(); ++j) {
      if (theta1[i] == theta2[j]) continue;
      if (!f1[i] || !f2[j]) {
        ++s.singular_cells;
        continue;
      }
      s.values[i][j] = (*f1[i] - *f2[j]).norm() / std::abs(theta1[i] - theta2[j]);
    }
  return s;
}

double fraction_below(const LipSurface& s, double threshold) {
  long finite = 0;
  long below = 0;
  for (const auto& row : s.values)
    for (double v : row) {
      if (!std::isfinite(v)) continue;
      ++finite;
      if (v <= threshold) ++below;
    }
  return finite ? static_cast<double>(below) / static_cast<double>(finite)
                : std::numeric_limits<double>::quiet_NaN();
}

void write_lip_csv(std::ostream& out, const LipSurface& s) {
  out << "theta1\\theta2";
  for (double t : s.theta2) out << ',' << format_real(t);
  out << '\n';
  for (std::size_t i = 0; i < s.theta1.size(); ++i) {
    out << format_real(s.theta1[i]);
    for (double v : s.values[i]) out << ',' << format_real(v);
    out << '\n';
  }
}

ShotNoiseNorms shot_noise_norms(const std::vector<std::vector<double>>& f_mags,
                                const std::vector<double>& lambda_mags) {
  if (f_mags.empty() || lambda_mags.empty())
    throw std::invalid_argument("coefficient arrays must be non-empty");
  const std::size_t n_d = f_mags.front().size();
  // sigma_kl = ||f_k|| ||f_l||, sigma_k = ||f_k|| ||lambda||, so both norms
  // factor through the row norms of f.
  double f_frob2 = 0.0;
  for (const auto& row : f_mags) {
    if (row.size() != n_d || n_d == 0)
      throw std::invalid_argument("every parameter needs the same number of coefficients");
    for (double f : row) f_frob2 += f * f;
  }
  double lambda2 = 0.0;
  for (double l : lambda_mags) lambda2 += l * l;
  return ShotNoiseNorms{f_frob2, std::sqrt(f_frob2 * lambda2)};
}

double perturbation_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& C,
                          const Eigen::MatrixXd& R, const Eigen::VectorXd& r, double xi) {
  if (!(xi >= 0.0)) throw std::invalid_argument("xi must be non-negative");
  if (R.rows() != A.rows() || R.cols() != A.cols() || r.size() != C.size())
    throw std::invalid_argument("perturbation shapes do not match the system");
  return xi * condition_number(A) * (r.norm() / C.norm() + R.norm() / A.norm());
}

double perturbation_empirical(const Eigen::MatrixXd& A, const Eigen::VectorXd& C,
                              const Eigen::MatrixXd& R, const Eigen::VectorXd& r, double xi) {
  if (R.rows() != A.rows() || R.cols() != A.cols() || r.size() != C.size())
    throw std::invalid_argument("perturbation shapes do not match the system");
  const Eigen::VectorXd f = solve(A, C);
  const Eigen::VectorXd fhat = solve(A + xi * R, C + xi * r);
  return (fhat - f).norm() / f.norm();
}

PerturbationCheck perturbation_campaign(int systems, int n, std::vector<double> xis,
                                        std::uint64_t seed) {
  if (systems < 1 || n < 1 || xis.empty())
    throw std::invalid_argument("campaign needs systems, a dimension and a xi grid");
  std::sort(xis.begin(), xis.end(), std::greater<>());
  PerturbationCheck out;
  out.systems = systems;
  out.xis = xis;

  struct Point {
    double xi, bound, empirical;
  };
  std::vector<std::vector<Point>> points;
  for (int s = 0; s < systems; ++s) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(s)}));
    std::normal_distribution<double> g(0.0, 1.0);
    auto gauss = [&](Eigen::Index rows, Eigen::Index cols) {
      Eigen::MatrixXd m(rows, cols);
      for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
      return m;
    };
    const Eigen::MatrixXd A =
        gauss(n, n) + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd C = gauss(n, 1);
    const Eigen::MatrixXd R = gauss(n, n);
    const Eigen::VectorXd r = gauss(n, 1);
    std::vector<Point> row;
    for (double xi : xis) {
      const Point p{xi, perturbation_bound(A, C, R, r, xi),
                    perturbation_empirical(A, C, R, r, xi)};
      if (p.bound > 0.0) out.max_ratio = std::max(out.max_ratio, p.empirical / p.bound);
      if (xi == xis.front() && xi > 0.0)
        out.fitted_c = std::max(out.fitted_c, (p.empirical - p.bound) / (xi * xi));
      row.push_back(p);
    }
    points.push_back(std::move(row));
  }
  for (const auto& row : points)
    for (std::size_t k = 1; k < row.size(); ++k) {
      const auto& p = row[k];
      // 1e-14 absorbs the round-off of two separate solves
      if (p.empirical > p.bound + out.fitted_c * p.xi * p.xi + 1e-14) ++out.first_order_violations;
    }
  return out;
}

}  // namespace rkbudget
