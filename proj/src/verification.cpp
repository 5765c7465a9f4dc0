#include "hdeuler/verification.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hdeuler/calibration.hpp"

namespace hdeuler {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void add_check(json& checks, const std::string& name, double value, double limit) {
  const bool ok = std::isfinite(value) && value <= limit;
  checks.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"passed", ok}});
}

bool all_passed(const json& checks) {
  for (const auto& c : checks) {
    if (!c.at("passed").get<bool>()) return false;
  }
  return true;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

KernelValues closed_form_F4(double s) {
  if (!(s > 0.0)) throw DomainError("closed_form_F4 requires s > 0");
  if (s < 40.0) {
    const double l = std::log1p(4.0 / s);
    return {(2.0 + s) / 4.0 * l - 1.0, 0.25 * l - (s + 2.0) / (s * (s + 4.0))};
  }
  // F = sum_{k>=2} a_k u^k, a_k = (-1)^k (1/(k+1) - 1/(2k)); dF/ds = -sum k a_k u^{k+1} / 4.
  const double u = 4.0 / s;
  double f = 0.0;
  double fp = 0.0;
  for (int k = 40; k >= 2; --k) {
    const double a = ((k % 2 == 0) ? 1.0 : -1.0) * (1.0 / (k + 1) - 1.0 / (2.0 * k));
    f += a * std::pow(u, k);
    fp += k * a * std::pow(u, k + 1);
  }
  return {f, -0.25 * fp};
}

GriddedField disk_indicator(double rho, double h) {
  GriddedField f;
  const double half = 1.1 * rho;
  f.nx = f.ny = static_cast<std::size_t>(std::ceil(2.0 * half / h));
  f.hx = f.hy = h;
  f.x_min = f.y_min = -0.5 * h * static_cast<double>(f.nx);
  f.values.assign(f.nx * f.ny, 0.0);
  for (std::size_t i = 0; i < f.nx; ++i) {
    const double x = f.x_min + h * (static_cast<double>(i) + 0.5);
    for (std::size_t j = 0; j < f.ny; ++j) {
      const double y = f.y_min + h * (static_cast<double>(j) + 0.5);
      if (x * x + y * y <= rho * rho) f.values[i * f.ny + j] = 1.0;
    }
  }
  return f;
}

json verify_kernel_report(Dimension d) {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelEvaluator kernel(d);
  const int v = d.value();
  json checks = json::array();

  const auto grid = log_grid(1e-6, 1e6, 200);
  json samples = json::array();
  double closed_err = 0.0;
  for (double s : grid) {
    const double f = kernel.eval_F(s);
    const double fp = kernel.eval_F_prime(s);
    samples.push_back({{"s", s}, {"F", f}, {"F_prime", fp}});
    if (v == 4) {
      const auto exact = closed_form_F4(s);
      closed_err = std::max({closed_err, rel(f, exact.F), rel(fp, exact.F_prime)});
    }
  }
  if (v == 4) add_check(checks, "closed_form_max_rel_error", closed_err, 1e-8);

  const auto bounds = verify_F_prime_bounds(kernel, grid);
  const double small_limit = 1e-7 * kernel.eval_F_prime(1e-7);
  add_check(checks, "small_s_limit_abs_error", std::abs(small_limit + 0.5), 1e-3);

  const double tail = tail_coefficient(d);
  const double tail_at_1e4 = std::pow(1e4, 0.5 * v + 1.0) * std::abs(kernel.eval_F_prime(1e4));
  add_check(checks, "tail_coefficient_rel_error_at_1e4", rel(tail_at_1e4, tail), 5e-3);

  const double slope = fit_tail_exponent(kernel);
  const double expected = -(0.5 * v + 1.0);
  add_check(checks, "tail_exponent_rel_error", rel(slope, expected), 1e-2);
  add_check(checks, "table_validation_error", kernel.table_validation_error(),
            10.0 * kernel.quad_rel_tol());
  add_check(checks, "small_s_sup_finite", std::isfinite(bounds.small_s_sup) ? 0.0 : 1.0, 0.0);
  add_check(checks, "large_s_sup_finite", std::isfinite(bounds.large_s_sup) ? 0.0 : 1.0, 0.0);

  return {{"schema", "hdeuler.kernel/1"},
          {"version", HDEULER_VERSION},
          {"d", v},
          {"c_d", kernel.c_d()},
          {"alpha_d", kernel.alpha_d()},
          {"beta_d", kernel.beta_d()},
          {"sphere_area", kernel.sphere_area()},
          {"tail_coefficient", tail},
          {"tail_coefficient_at_1e4", tail_at_1e4},
          {"fitted_tail_exponent", slope},
          {"expected_tail_exponent", expected},
          {"small_s_limit", small_limit},
          {"table_validation_error", kernel.table_validation_error()},
          {"bounds",
           {{"small_s_sup", bounds.small_s_sup},
            {"small_s_argmax", bounds.small_s_argmax},
            {"large_s_sup", bounds.large_s_sup},
            {"large_s_argmax", bounds.large_s_argmax}}},
          {"grid", samples},
          {"checks", checks},
          {"passed", all_passed(checks)},
          {"wall_seconds", seconds_since(t0)}};
}

json verify_estimates_report(Dimension d, std::size_t sweep, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelEvaluator kernel(d);
  json checks = json::array();

  // Calibration sweep against the frozen constant.
  CalibrationFamily family;
  family.members = sweep;
  const auto cal = calibration_sweep(kernel, family, workers);
  const double c_cal = calibrated_constant(d);
  double worst = 0.0;
  for (double r : cal.ratios) worst = std::max(worst, std::isfinite(r) && r > 0.0 ? 0.0 : 1.0);
  add_check(checks, "ratios_finite_positive", worst, 0.0);
  if (!cal.ratios.empty()) add_check(checks, "max_ratio_over_c_cal", cal.max_ratio / c_cal, 1.01);

  // Scaling and translation invariance on the reference ring.
  const auto base = calibration_particles(ProfileSpec{}, d);
  const SupOptions sup{family.probe_resolution, {workers, 1.0}};
  const double p0 = feng_sverak_product(base);
  const double q0 = feng_sverak_ratio(kernel, base, sup);
  std::mt19937_64 gen(7);
  double product_dev = 0.0;
  double ratio_dev = 0.0;
  json transforms = json::array();
  for (int k = 0; k < 10; ++k) {
    const double lambda = std::exp(uniform(gen, std::log(0.1), std::log(10.0)));
    const double z0 = uniform(gen, -5.0, 5.0);
    const auto ps = rescale(base, lambda, z0);
    const double dp = rel(feng_sverak_product(ps), p0);
    const double dq = rel(feng_sverak_ratio(kernel, ps, sup), q0);
    product_dev = std::max(product_dev, dp);
    ratio_dev = std::max(ratio_dev, dq);
    transforms.push_back({{"lambda", lambda}, {"z0", z0}, {"product_dev", dp}, {"ratio_dev", dq}});
  }
  add_check(checks, "product_scaling_rel_dev", product_dev, 1e-10);
  add_check(checks, "ratio_scaling_rel_dev", ratio_dev, 1e-10);

  // 1/|x| inequality: disk oracle 2 sqrt(pi), then random blob fields.
  const double disk = kernelf_inequality_check(disk_indicator(1.0, 1e-3), {0.0, 0.0});
  const double disk_exact = 2.0 * std::sqrt(std::numbers::pi);
  add_check(checks, "disk_ratio_rel_error", rel(disk, disk_exact), 1e-3);
  double blob_max = 0.0;
  for (int k = 0; k < 50; ++k) {
    GriddedField f;
    f.nx = f.ny = 160;
    f.hx = f.hy = 0.025;
    f.x_min = f.y_min = -2.0;
    f.values.assign(f.nx * f.ny, 0.0);
    const int blobs = 1 + static_cast<int>(uniform(gen, 0.0, 4.0));
    for (int b = 0; b < blobs; ++b) {
      const double cx = uniform(gen, -1.0, 1.0);
      const double cy = uniform(gen, -1.0, 1.0);
      const double w = uniform(gen, 0.1, 0.5);
      const double a = uniform(gen, 0.2, 1.0);
      for (std::size_t i = 0; i < f.nx; ++i) {
        const double x = f.x_min + f.hx * (static_cast<double>(i) + 0.5) - cx;
        for (std::size_t j = 0; j < f.ny; ++j) {
          const double y = f.y_min + f.hy * (static_cast<double>(j) + 0.5) - cy;
          f.values[i * f.ny + j] += a * std::exp(-(x * x + y * y) / (2.0 * w * w));
        }
      }
    }
    const HalfPlanePoint x0{uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0)};
    blob_max = std::max(blob_max, kernelf_inequality_check(f, x0));
  }
  add_check(checks, "blob_ratio_over_disk", blob_max / disk_exact, 1.01);

  // Radial-velocity integrand suprema on the two regions.
  const auto region = urintbd_region_check(kernel, log_biased_grid(400));
  add_check(checks, "region_suprema_finite",
            std::isfinite(region.inner_sup) && std::isfinite(region.outer_sup) ? 0.0 : 1.0, 0.0);

  return {{"schema", "hdeuler.estimates/1"},
          {"version", HDEULER_VERSION},
          {"d", d.value()},
          {"c_cal", c_cal},
          {"sweep",
           {{"members", sweep},
            {"ratios", cal.ratios},
            {"max_ratio", cal.max_ratio},
            {"argmax", cal.argmax}}},
          {"scaling", {{"product", p0}, {"ratio", q0}, {"transforms", transforms}}},
          {"kernelf", {{"disk_ratio", disk}, {"disk_exact", disk_exact}, {"blob_max_ratio", blob_max}}},
          {"urintbd",
           {{"inner_sup", region.inner_sup},
            {"inner_argmax", {region.inner_argmax.r, region.inner_argmax.z}},
            {"outer_sup", region.outer_sup},
            {"outer_argmax", {region.outer_argmax.r, region.outer_argmax.z}}}},
          {"checks", checks},
          {"passed", all_passed(checks)},
          {"wall_seconds", seconds_since(t0)}};
}

}  // namespace hdeuler
