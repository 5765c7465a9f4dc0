#include "hdeuler/kernel.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "hdeuler/quadrature.hpp"

namespace hdeuler {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeriesTerms = 6;

// 2(1 - cos t) without cancellation near t = 0.
inline double chord_sq(double theta) noexcept {
  const double h = std::sin(0.5 * theta);
  return 4.0 * h * h;
}

inline double angular_weight(double theta, int d) noexcept {
  const double sn = std::sin(theta);
  double w = std::cos(theta);
  for (int i = 0; i < d - 3; ++i) w *= sn;
  return w;
}

// Generalized binomial coefficient binom(-a, k).
double neg_binomial(double a, int k) {
  double c = 1.0;
  for (int m = 0; m < k; ++m) c *= (-a - m) / (m + 1);
  return c;
}

// Panel edges for the F_d integrands: the peak at t = 0 has width ~ sqrt(s).
std::vector<double> kernel_breakpoints(double s) {
  std::vector<double> pts{0.0};
  if (s < 1.0) {
    for (double edge = std::sqrt(s); edge < kPi; edge *= 4.0) pts.push_back(edge);
  }
  pts.push_back(kPi);
  return pts;
}

// int_0^pi cos sin^{d-3} / [x + s]^{e/2}, where e = d-2 for F and e = d for
// F' (without its -(d/2-1) prefactor). For s >= 1 the vanishing zeroth
// moment is subtracted analytically to avoid the O(1/s) cancellation.
double kernel_integral(int d, int twice_exponent, double s, double rel_tol, const char* name) {
  const double e = 0.5 * twice_exponent;
  auto direct = [=](double t) {
    return angular_weight(t, d) / pow_half(chord_sq(t) + s, twice_exponent);
  };
  const double scale = 1.0 / pow_half(s, twice_exponent);
  auto subtracted = [=](double t) {
    return angular_weight(t, d) * std::expm1(-e * std::log1p(chord_sq(t) / s));
  };

  const auto pts = kernel_breakpoints(s);
  quad::Options opt;
  opt.rel_tol = rel_tol;
  quad::Result r;
  if (s < 1.0) {
    r = quad::integrate(direct, pts, opt);
  } else {
    r = quad::integrate(subtracted, pts, opt);
    r.value *= scale;
    r.error *= scale;
  }
  if (!r.converged) {
    throw AccuracyError(std::string(name) + " quadrature did not converge at s=" + std::to_string(s),
                        r.error / std::abs(r.value));
  }
  return r.value;
}

void check_argument(double s, const char* name) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError(std::string(name) + " requires s > 0, got " + std::to_string(s));
  }
  if (s < KernelEvaluator::kMinArgument * (1.0 - 1e-12)) {
    throw DomainError(std::string(name) + " argument below 1e-8 is not supported: " +
                      std::to_string(s));
  }
}

// Coefficients in f of the cubic through y at the offsets {o, o+1, o+2, o+3}.
std::array<double, 4> lagrange_cubic(const std::array<double, 4>& y, int o) {
  std::array<double, 4> out{};  // highest degree first
  for (int m = 0; m < 4; ++m) {
    std::array<double, 4> poly{0.0, 0.0, 0.0, 1.0};
    double denom = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k == m) continue;
      const double root = o + k;
      // poly *= (f - root)
      for (int j = 0; j < 3; ++j) poly[j] = poly[j + 1] - root * poly[j];
      poly[3] = -root * poly[3];
      denom *= static_cast<double>(m - k);
    }
    for (int j = 0; j < 4; ++j) out[j] += y[m] * poly[j] / denom;
  }
  return out;
}

}  // namespace

Dimension::Dimension(int d) : d_(d) {
  if (d < kMin || d > kMax) {
    throw DomainError("dimension d=" + std::to_string(d) + " outside supported range [4, 8]");
  }
}

double unit_ball_volume(int d) {
  if (d < 1) throw DomainError("unit_ball_volume requires d >= 1");
  double v = (d % 2 == 0) ? kPi : 2.0;
  for (int k = (d % 2 == 0) ? 4 : 3; k <= d; k += 2) v *= 2.0 * kPi / k;
  return v;
}

double wallis_integral(int k) {
  if (k < 0) throw DomainError("wallis_integral requires k >= 0");
  double w = (k % 2 == 0) ? kPi : 2.0;
  for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) w *= static_cast<double>(j - 1) / j;
  return w;
}

double beta_coefficient(Dimension d) {
  double b = 1.0;
  for (int k = 1; k <= d.value() - 4; ++k) b *= wallis_integral(k);
  return b;
}

double kernel_constant(Dimension d) {
  const int n = d.value();
  return 2.0 * kPi * beta_coefficient(d) / (n * (n - 2) * unit_ball_volume(n));
}

double sphere_area(Dimension d) {
  const int n = d.value();
  return (n - 1) * unit_ball_volume(n - 1);
}

double tail_coefficient(Dimension d) {
  const int n = d.value();
  // J_d = int cos^2 sin^{d-3} = W(d-3) - W(d-1).
  const double j = wallis_integral(n - 3) - wallis_integral(n - 1);
  return 0.5 * n * (n - 2) * j;
}

double angular_moment(Dimension d, int k, double abs_tol) {
  const int n = d.value();
  auto f = [=](double t) {
    const double x = chord_sq(t);
    double v = angular_weight(t, n);
    for (int i = 0; i < k; ++i) v *= x;
    return v;
  };
  const std::array<double, 3> pts{0.0, 0.5 * kPi, kPi};
  quad::Options opt;
  opt.rel_tol = 1e-14;
  opt.abs_tol = abs_tol;
  return quad::integrate(f, pts, opt).value;
}

KernelEvaluator::KernelEvaluator(Dimension d, KernelOptions options)
    : d_(d),
      options_(options),
      c_d_(kernel_constant(d)),
      alpha_d_(unit_ball_volume(d.value())),
      beta_d_(beta_coefficient(d)),
      sphere_area_(hdeuler::sphere_area(d)) {
  if (!(options_.quad_rel_tol > 0.0)) throw DomainError("quad_rel_tol must be positive");
  const double p = d_.half() - 1.0;
  for (int k = 1; k <= kSeriesTerms; ++k) {
    const double moment = angular_moment(d_, k);
    series_F_.push_back(neg_binomial(p, k) * moment);
    series_Fp_.push_back(-p * neg_binomial(p + 1.0, k) * moment);
  }
  if (options_.tabulate) build_table();
}

double KernelEvaluator::eval_F(double s) const {
  check_argument(s, "F_d");
  return kernel_integral(d_.value(), d_.value() - 2, s, options_.quad_rel_tol, "F_d");
}

double KernelEvaluator::eval_F_prime(double s) const {
  check_argument(s, "F_d'");
  const double p = d_.half() - 1.0;
  return -p * kernel_integral(d_.value(), d_.value(), s, options_.quad_rel_tol, "F_d'");
}

KernelValues KernelEvaluator::asymptotic(double s) const noexcept {
  const double p = d_.half() - 1.0;
  const double inv = 1.0 / s;
  // Horner in 1/s from the highest term down.
  double f = 0.0;
  double g = 0.0;
  for (int k = kSeriesTerms - 1; k >= 0; --k) {
    f = f * inv + series_F_[k];
    g = g * inv + series_Fp_[k];
  }
  const double base = std::pow(s, -(p + 1.0));
  return {f * base, g * base * inv};
}

void KernelEvaluator::build_table() {
  const std::size_t n = options_.table_points;
  if (n < 4 || !(options_.table_s_min >= kMinArgument) ||
      !(options_.table_s_max > options_.table_s_min)) {
    throw DomainError("invalid kernel table configuration");
  }
  x0_ = std::log(options_.table_s_min);
  const double dx = (std::log(options_.table_s_max) - x0_) / static_cast<double>(n - 1);
  inv_dx_ = 1.0 / dx;
  last_interval_ = n - 2;

  const int d = d_.value();
  std::vector<double> hf(n);
  std::vector<double> hp(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = std::exp(x0_ + dx * static_cast<double>(k));
    if (k == 0) s = options_.table_s_min;
    if (k + 1 == n) s = options_.table_s_max;
    const double w = pow_half(1.0 + s, d);
    hf[k] = eval_F(s) * w;
    hp[k] = s * eval_F_prime(s) * w;
  }

  coef_.assign(8 * (n - 1), 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    int o = -1;
    if (i == 0) o = 0;
    if (i + 2 >= n) o = -2;
    std::array<double, 4> yf{};
    std::array<double, 4> yp{};
    for (int m = 0; m < 4; ++m) {
      const std::size_t idx = static_cast<std::size_t>(static_cast<long>(i) + o + m);
      yf[m] = hf[idx];
      yp[m] = hp[idx];
    }
    const auto cf = lagrange_cubic(yf, o);
    const auto cp = lagrange_cubic(yp, o);
    std::copy(cf.begin(), cf.end(), coef_.begin() + 8 * i);
    std::copy(cp.begin(), cp.end(), coef_.begin() + 8 * i + 4);
  }

  // Construction-time validation at 100 log-uniform random arguments.
  std::mt19937_64 rng(0x5eed'0f'd1ULL + static_cast<std::uint64_t>(d));
  const double span = std::log(options_.table_s_max) - x0_;
  const double limit = 10.0 * options_.quad_rel_tol;
  table_error_ = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double s = std::exp(x0_ + u * span);
    const KernelValues table = eval(s);
    const double f = eval_F(s);
    const double fp = eval_F_prime(s);
    table_error_ = std::max({table_error_, std::abs(table.F - f) / std::abs(f),
                             std::abs(table.F_prime - fp) / std::abs(fp)});
  }
  if (table_error_ > limit) {
    throw AccuracyError("kernel table failed validation against direct quadrature", table_error_);
  }
}

BoundReport verify_F_prime_bounds(const KernelEvaluator& kernel, std::span<const double> s_grid) {
  if (s_grid.empty() || !(s_grid.front() > 0.0)) {
    throw DomainError("s grid must be nonempty and positive");
  }
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw DomainError("s grid must be sorted");
  if (s_grid.front() > 1e-6 || s_grid.back() < 1e6) {
    throw DomainError("s grid must span at least [1e-6, 1e6]");
  }
  const double tail_power = kernel.dimension().half() + 1.0;
  BoundReport rep;
  for (double s : s_grid) {
    const double fp = std::abs(kernel.eval_F_prime(s));
    if (s <= 1.0 && s * fp > rep.small_s_sup) {
      rep.small_s_sup = s * fp;
      rep.small_s_argmax = s;
    }
    if (s >= 10.0) {
      const double v = std::pow(s, tail_power) * fp;
      if (v > rep.large_s_sup) {
        rep.large_s_sup = v;
        rep.large_s_argmax = s;
      }
    }
  }
  return rep;
}

double fit_tail_exponent(const KernelEvaluator& kernel, double s_lo, double s_hi, int points) {
  if (points < 2 || !(s_lo > 0.0) || !(s_hi > s_lo)) throw DomainError("invalid tail fit range");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double s : log_grid(s_lo, s_hi, static_cast<std::size_t>(points))) {
    const double x = std::log(s);
    const double y = std::log(std::abs(kernel.eval_F_prime(s)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = points;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw DomainError("invalid log grid");
  std::vector<double> g(n);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace hdeuler
