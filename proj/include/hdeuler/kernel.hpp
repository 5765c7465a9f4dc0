#pragma once

// Stream-function kernel of axisymmetric, swirl-free flow in R^d.
//
// The Green's function factorizes as
//   G_d(r, rb, z, zb) = c_d (r rb)^{d/2-1} F_d(s),
//   s = ((r - rb)^2 + (z - zb)^2) / (r rb),
//   F_d(s) = int_0^pi cos(t) sin^{d-3}(t) / [2(1 - cos t) + s]^{d/2-1} dt,
// with c_d = 2 pi beta_d / (d (d-2) alpha_d).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hdeuler/errors.hpp"

namespace hdeuler {

/// Spatial dimension of the flow; 4 <= d <= 8.
class Dimension {
 public:
  static constexpr int kMin = 4;
  static constexpr int kMax = 8;

  explicit Dimension(int d);

  int value() const noexcept { return d_; }
  double half() const noexcept { return 0.5 * d_; }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// Volume of the unit ball in R^d, d >= 1.
double unit_ball_volume(int d);

/// int_0^pi sin^k(t) dt, k >= 0.
double wallis_integral(int k);

double beta_coefficient(Dimension d);
double kernel_constant(Dimension d);

/// Area of the unit (d-2)-sphere; converts half-plane integrals against
/// r^{d-2} dr dz into integrals over R^d.
double sphere_area(Dimension d);

/// C_d with F_d'(s) ~ -C_d s^{-(d/2+1)} as s -> infinity.
double tail_coefficient(Dimension d);

/// int_0^pi cos(t) sin^{d-3}(t) [2(1 - cos t)]^k dt by adaptive quadrature.
/// k = 0 vanishes by symmetry.
double angular_moment(Dimension d, int k, double abs_tol = 1e-15);

/// x^{n/2} for integer n >= 0.
inline double pow_half(double x, int n) noexcept {
  double r = 1.0;
  for (int i = 0; i < n / 2; ++i) r *= x;
  return (n % 2 != 0) ? r * std::sqrt(x) : r;
}

struct KernelOptions {
  double quad_rel_tol = 1e-10;
  bool tabulate = true;
  double table_s_min = 1e-8;
  double table_s_max = 1e8;
  std::size_t table_points = 4096;
};

struct KernelValues {
  double F;
  double F_prime;
};

/// Immutable evaluator of F_d and F_d'. The certified entry points run
/// adaptive quadrature; `eval` is the hot path used by the particle sums
/// and reads from a validated log-grid cubic table when tabulation is on.
class KernelEvaluator {
 public:
  /// Smallest argument accepted anywhere.
  static constexpr double kMinArgument = 1e-8;

  explicit KernelEvaluator(Dimension d, KernelOptions options = {});

  Dimension dimension() const noexcept { return d_; }
  double c_d() const noexcept { return c_d_; }
  double alpha_d() const noexcept { return alpha_d_; }
  double beta_d() const noexcept { return beta_d_; }
  double sphere_area() const noexcept { return sphere_area_; }
  double quad_rel_tol() const noexcept { return options_.quad_rel_tol; }
  double table_s_min() const noexcept { return options_.table_s_min; }
  double table_s_max() const noexcept { return options_.table_s_max; }
  bool tabulated() const noexcept { return !coef_.empty(); }

  /// Largest relative table error seen during construction-time validation.
  double table_validation_error() const noexcept { return table_error_; }

  double eval_F(double s) const;
  double eval_F_prime(double s) const;

  /// Large-s expansion; accurate to double precision for s >= 1e4.
  KernelValues asymptotic(double s) const noexcept;

  KernelValues eval(double s) const {
    if (coef_.empty()) return {eval_F(s), eval_F_prime(s)};
    const double t = (std::log(s) - x0_) * inv_dx_;
    if (!(t >= 0.0)) {
      if (s >= kMinArgument * (1.0 - 1e-12)) return {eval_F(s), eval_F_prime(s)};
      throw DomainError("kernel argument below 1e-8: " + std::to_string(s));
    }
    if (t >= last_interval_ + 1.0) {
      if (s > options_.table_s_max) return asymptotic(s);
    }
    std::size_t i = static_cast<std::size_t>(t);
    if (i > last_interval_) i = last_interval_;
    const double f = t - static_cast<double>(i);
    const double* c = &coef_[8 * i];
    const double hf = ((c[0] * f + c[1]) * f + c[2]) * f + c[3];
    const double hp = ((c[4] * f + c[5]) * f + c[6]) * f + c[7];
    // Table stores F (1+s)^{d/2} and s F' (1+s)^{d/2}.
    const double w = 1.0 / (pow_half(1.0 + s, d_.value()) * s);
    return {hf * w * s, hp * w};
  }

 private:
  void build_table();

  Dimension d_;
  KernelOptions options_;
  double c_d_;
  double alpha_d_;
  double beta_d_;
  double sphere_area_;
  // Large-s series: F = sum_k f_k s^{-(p+k)}, F' = sum_k g_k s^{-(p+1+k)}.
  std::vector<double> series_F_;
  std::vector<double> series_Fp_;
  std::vector<double> coef_;
  double x0_ = 0.0;
  double inv_dx_ = 0.0;
  std::size_t last_interval_ = 0;
  double table_error_ = 0.0;
};

/// Grid suprema behind the two-sided bound |F_d'(s)| <~ min{1/s, s^{-(d/2+1)}}.
struct BoundReport {
  double small_s_sup = 0.0;     // sup of s |F'| over grid points s <= 1
  double small_s_argmax = 0.0;
  double large_s_sup = 0.0;     // sup of s^{d/2+1} |F'| over grid points s >= 10
  double large_s_argmax = 0.0;
};

/// `s_grid` must be sorted, positive, and span [1e-6, 1e6].
BoundReport verify_F_prime_bounds(const KernelEvaluator& kernel, std::span<const double> s_grid);

/// Least-squares slope of log|F_d'| against log s on `points` log-spaced
/// samples in [s_lo, s_hi].
double fit_tail_exponent(const KernelEvaluator& kernel, double s_lo = 1e3, double s_hi = 1e5,
                         int points = 41);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace hdeuler
