#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hdeuler/kernel.hpp"

using namespace hdeuler;

namespace {

// F_4 in closed form, with the u = 4/s series for large s.
KernelValues f4_exact(double s) {
  if (s < 40.0) {
    const double l = std::log1p(4.0 / s);
    return {(2.0 + s) / 4.0 * l - 1.0, 0.25 * l - (s + 2.0) / (s * (s + 4.0))};
  }
  const double u = 4.0 / s;
  double f = 0.0;
  double fp = 0.0;
  for (int k = 40; k >= 2; --k) {
    const double a = (k % 2 == 0 ? 1.0 : -1.0) * (1.0 / (k + 1) - 1.0 / (2.0 * k));
    f += a * std::pow(u, k);
    fp += k * a * std::pow(u, k + 1);
  }
  return {f, -0.25 * fp};
}

// Composite Gauss-Legendre, nodes by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;

  explicit GaussLegendre(int n) {
    for (int i = 1; i <= n; ++i) {
      double t = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-16) break;
      }
      x.push_back(t);
      w.push_back(2.0 / ((1.0 - t * t) * dp * dp));
    }
  }

  template <typename F>
  double integrate(F f, double a, double b, int panels) const {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * f(mid + 0.5 * h * x[i]);
    }
    return 0.5 * h * sum;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("dimension range is 4..8") {
  CHECK_THROWS_AS(Dimension(3), DomainError);
  CHECK_THROWS_AS(Dimension(9), DomainError);
  CHECK(Dimension(6).half() == 3.0);
}

TEST_CASE("geometric constants") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
  CHECK(wallis_integral(0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(wallis_integral(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(wallis_integral(3) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  // |S^2| = 4 pi, |S^3| = 2 pi^2.
  CHECK(sphere_area(Dimension(4)) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(sphere_area(Dimension(5)) ==
        doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("tail coefficients 8/3 and 16/5") {
  CHECK(tail_coefficient(Dimension(4)) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  CHECK(tail_coefficient(Dimension(6)) == doctest::Approx(16.0 / 5.0).epsilon(1e-13));
}

TEST_CASE("zeroth angular moment vanishes") {
  for (int d = 4; d <= 8; ++d) CHECK(std::abs(angular_moment(Dimension(d), 0)) < 1e-14);
}

TEST_CASE("F_4 matches the closed form") {
  const KernelEvaluator k(Dimension(4));
  for (double s : log_grid(1e-6, 1e6, 61)) {
    const auto exact = f4_exact(s);
    CHECK(rel(k.eval_F(s), exact.F) < 1e-9);
    CHECK(rel(k.eval_F_prime(s), exact.F_prime) < 1e-9);
  }
  CHECK(k.eval_F(1.0) == doctest::Approx(0.207078434326).epsilon(1e-11));
}

TEST_CASE("closed-form branches agree at the switch") {
  const double s = 40.0;
  const double l = std::log1p(4.0 / s);
  CHECK(rel(f4_exact(s).F, (2.0 + s) / 4.0 * l - 1.0) < 1e-11);
}

TEST_CASE("quadrature agrees with composite Gauss-Legendre for d = 5..8") {
  const GaussLegendre gl(10);
  for (int d = 5; d <= 8; ++d) {
    const KernelEvaluator k{Dimension(d)};
    const double p = 0.5 * d - 1.0;
    for (double s : {0.05, 0.5, 3.0, 40.0}) {
      auto f = [&](double t) {
        return std::cos(t) * std::pow(std::sin(t), d - 3) / std::pow(2.0 * (1.0 - std::cos(t)) + s, p);
      };
      auto fp = [&](double t) {
        return -p * std::cos(t) * std::pow(std::sin(t), d - 3) /
               std::pow(2.0 * (1.0 - std::cos(t)) + s, p + 1.0);
      };
      const double ref = gl.integrate(f, 0.0, std::numbers::pi, 4000);
      const double ref_p = gl.integrate(fp, 0.0, std::numbers::pi, 4000);
      CHECK(rel(k.eval_F(s), ref) < 1e-9);
      CHECK(rel(k.eval_F_prime(s), ref_p) < 1e-9);
    }
  }
}

TEST_CASE("F' is the derivative of F") {
  for (int d = 4; d <= 8; ++d) {
    const KernelEvaluator k{Dimension(d)};
    for (double s : {0.01, 0.7, 5.0, 200.0}) {
      const double h = 1e-4 * s;
      const double fd = (k.eval_F(s + h) - k.eval_F(s - h)) / (2.0 * h);
      CHECK(rel(fd, k.eval_F_prime(s)) < 1e-5);
    }
  }
}

TEST_CASE("table agrees with quadrature") {
  for (int d = 4; d <= 8; ++d) {
    const KernelEvaluator k{Dimension(d)};
    CHECK(k.tabulated());
    CHECK(k.table_validation_error() < 1e-9);
    for (double s : log_grid(1.3e-8, 0.9e8, 97)) {
      const auto v = k.eval(s);
      CHECK(rel(v.F, k.eval_F(s)) < 1e-9);
      CHECK(rel(v.F_prime, k.eval_F_prime(s)) < 1e-9);
    }
  }
}

TEST_CASE("asymptotic branch continues the table") {
  for (int d = 4; d <= 8; ++d) {
    const KernelEvaluator k{Dimension(d)};
    const double s = 2e8;
    CHECK(rel(k.eval(s).F_prime, -tail_coefficient(Dimension(d)) * std::pow(s, -(0.5 * d + 1.0))) <
          1e-7);
    CHECK(rel(k.asymptotic(1e5).F, k.eval_F(1e5)) < 1e-9);
  }
}

TEST_CASE("untabulated evaluator uses quadrature") {
  KernelOptions o;
  o.tabulate = false;
  const KernelEvaluator k(Dimension(5), o);
  CHECK_FALSE(k.tabulated());
  CHECK(k.eval(0.3).F == k.eval_F(0.3));
}

TEST_CASE("arguments below 1e-8 are rejected") {
  const KernelEvaluator k(Dimension(4));
  CHECK_THROWS_AS(k.eval_F(0.0), DomainError);
  CHECK_THROWS_AS(k.eval_F_prime(-1.0), DomainError);
  CHECK_THROWS_AS(k.eval(1e-9), DomainError);
  CHECK_NOTHROW(k.eval(1e-8));
}

TEST_CASE("F' two-sided bound and tail fit") {
  for (int d = 4; d <= 8; ++d) {
    const KernelEvaluator k{Dimension(d)};
    const auto rep = verify_F_prime_bounds(k, log_grid(1e-6, 1e6, 200));
    CHECK(std::isfinite(rep.small_s_sup));
    CHECK(std::isfinite(rep.large_s_sup));
    CHECK(rep.small_s_sup < 1.0);
    CHECK(rel(fit_tail_exponent(k), -(0.5 * d + 1.0)) < 1e-2);
    // s F' -> -1/2 for every d.
    CHECK(std::abs(1e-8 * k.eval_F_prime(1e-8) + 0.5) < 1e-3);
  }
  const KernelEvaluator k(Dimension(4));
  CHECK_THROWS_AS(verify_F_prime_bounds(k, log_grid(1e-3, 1e3, 10)), DomainError);
}
