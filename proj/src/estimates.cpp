#include "hdeuler/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hdeuler/summation.hpp"

namespace hdeuler {

namespace {

// sphere_area * sum_i g(i) with compensated summation.
template <typename G>
double measure_sum(const ParticleSet& ps, G g) {
  NeumaierSum sum;
  for (std::size_t i = 0; i < ps.size(); ++i) sum.add(g(i));
  return sphere_area(ps.d) * sum.value();
}

double power(double r, int k) { return k >= 0 ? pow_half(r, 2 * k) : 1.0 / pow_half(r, -2 * k); }

const double& constant(const GrowthEnvelope& env, const char* name) {
  const auto it = env.constants.find(name);
  if (it == env.constants.end()) {
    throw DomainError(to_string(env.kind) + " envelope is missing constant " + name);
  }
  if (!(it->second > 0.0) || !std::isfinite(it->second)) {
    throw DomainError(to_string(env.kind) + " constant " + name + " must be finite and > 0");
  }
  return it->second;
}

}  // namespace

double weighted_L1(const ParticleSet& ps, int k) {
  const int d = ps.d.value();
  if (k < -(d - 2)) throw DomainError("weighted_L1 requires k >= -(d-2)");
  return measure_sum(ps, [&](std::size_t i) {
    return std::abs(ps.xi[i]) * power(ps.positions[i].r, d - 2 + k) * ps.mu[i];
  });
}

double xi_l1(const ParticleSet& ps) {
  return measure_sum(ps, [&](std::size_t i) { return std::abs(ps.xi[i]) * ps.mu[i]; });
}

double xi_l2(const ParticleSet& ps) {
  return std::sqrt(measure_sum(ps, [&](std::size_t i) { return ps.xi[i] * ps.xi[i] * ps.mu[i]; }));
}

double xi_linf(const ParticleSet& ps) {
  double m = 0.0;
  for (double x : ps.xi) m = std::max(m, std::abs(x));
  return m;
}

double omega_linf(const ParticleSet& ps) {
  const int d = ps.d.value();
  double m = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    m = std::max(m, std::abs(ps.xi[i]) * power(ps.positions[i].r, d - 2));
  }
  return m;
}

double angular_impulse(const ParticleSet& ps) {
  const int d = ps.d.value();
  return measure_sum(ps, [&](std::size_t i) {
    return ps.xi[i] * power(ps.positions[i].r, d - 1) * ps.mu[i];
  });
}

double support_radius(const ParticleSet& ps) {
  double s = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.xi[i] != 0.0) s = std::max(s, ps.positions[i].r);
  }
  return s;
}

double distortion(const ParticleSet& ps) {
  const std::size_t n = ps.size();
  if (n < 2) return 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ps.positions[a].r < ps.positions[b].r;
  });
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = ps.positions[order[k]];
    double best2 = std::numeric_limits<double>::infinity();
    // Sweep outward in r; stop once the r-gap alone exceeds the best distance.
    for (std::size_t m = k + 1; m < n; ++m) {
      const auto& q = ps.positions[order[m]];
      const double dr = q.r - p.r;
      if (dr * dr >= best2) break;
      best2 = std::min(best2, dr * dr + (q.z - p.z) * (q.z - p.z));
    }
    for (std::size_t m = k; m-- > 0;) {
      const auto& q = ps.positions[order[m]];
      const double dr = p.r - q.r;
      if (dr * dr >= best2) break;
      best2 = std::min(best2, dr * dr + (q.z - p.z) * (q.z - p.z));
    }
    lo = std::min(lo, best2);
    hi = std::max(hi, best2);
  }
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

double feng_sverak_product(const ParticleSet& ps) {
  const double l1 = xi_l1(ps);
  const double linf = xi_linf(ps);
  if (!(l1 > 0.0) || !(linf > 0.0)) throw DomainError("Feng-Sverak product of a zero field");
  const double rd2 = weighted_L1(ps, ps.d.value() - 2);
  return std::pow(rd2, 0.25) * std::pow(l1, 0.25) * std::sqrt(linf);
}

std::vector<HalfPlanePoint> probe_grid(const ParticleSet& ps, std::size_t resolution) {
  double r_lo = std::numeric_limits<double>::infinity();
  double r_hi = -r_lo;
  double z_lo = r_lo;
  double z_hi = r_hi;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.xi[i] == 0.0) continue;
    r_lo = std::min(r_lo, ps.positions[i].r);
    r_hi = std::max(r_hi, ps.positions[i].r);
    z_lo = std::min(z_lo, ps.positions[i].z);
    z_hi = std::max(z_hi, ps.positions[i].z);
  }
  std::vector<HalfPlanePoint> pts;
  if (resolution == 0 || r_lo > r_hi) return pts;
  const double steps = resolution > 1 ? static_cast<double>(resolution - 1) : 1.0;
  pts.reserve(resolution * resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / steps;
    for (std::size_t j = 0; j < resolution; ++j) {
      pts.push_back({r, z_lo + (z_hi - z_lo) * static_cast<double>(j) / steps});
    }
  }
  return pts;
}

double radial_velocity_sup(const KernelEvaluator& kernel, const ParticleSet& ps, BlobParameter blob,
                           const SupOptions& options) {
  if (ps.empty()) return 0.0;
  std::vector<VelocitySample> at_particles;
  if (blob.delta == ps.blob.delta) {
    at_particles = self_velocity(kernel, ps, options.induction);
  } else {
    at_particles = velocity_field(kernel, ps, ps.positions, blob, options.induction);
  }
  const auto probes = probe_grid(ps, options.probe_resolution);
  const auto at_probes = velocity_field(kernel, ps, probes, blob, options.induction);
  double m = 0.0;
  for (const auto& u : at_particles) m = std::max(m, std::abs(u.ur));
  for (const auto& u : at_probes) m = std::max(m, std::abs(u.ur));
  return m;
}

double feng_sverak_ratio(const KernelEvaluator& kernel, const ParticleSet& ps,
                         const SupOptions& options) {
  const double product = feng_sverak_product(ps);
  return radial_velocity_sup(kernel, ps, ps.blob, options) / product;
}

std::string to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::thm1_exponential:
      return "thm1_exponential";
    case EnvelopeKind::thm2_polynomial:
      return "thm2_polynomial";
    case EnvelopeKind::thm2_exponential_d7:
      return "thm2_exponential_d7";
    case EnvelopeKind::support_exponential:
      return "support_exponential";
  }
  return "unknown";
}

double polynomial_growth_exponent(Dimension d) {
  const int v = d.value();
  if (v >= 7) throw DomainError("polynomial growth exponent is defined for d <= 6");
  return 4.0 * (v - 2) / (7.0 - v);
}

double envelope_value(const GrowthEnvelope& env, double t) {
  if (!(t >= 0.0)) throw DomainError("envelope_value requires t >= 0");
  const int d = env.d.value();
  switch (env.kind) {
    case EnvelopeKind::thm1_exponential:
      if (d != 4) throw DomainError("thm1_exponential is a d = 4 envelope");
      return constant(env, "C1") * std::exp(2.0 * constant(env, "C0") * t);
    case EnvelopeKind::thm2_polynomial:
      if (d > 6) throw DomainError("thm2_polynomial is defined for d in {4, 5, 6}");
      return constant(env, "C2") * std::pow(1.0 + t, polynomial_growth_exponent(env.d));
    case EnvelopeKind::thm2_exponential_d7:
      if (d != 7) throw DomainError("thm2_exponential_d7 is a d = 7 envelope");
      return constant(env, "C3") * std::exp(constant(env, "C4") * t);
    case EnvelopeKind::support_exponential:
      return constant(env, "S0") * std::exp(constant(env, "C") * t);
  }
  throw DomainError("unknown envelope kind");
}

GrowthEnvelope theorem1_envelope(const DiagnosticsRecord& init, double c_cal) {
  const double c1 = init.xi_linf + init.omega_sup;
  const double c0 = c_cal * std::pow(init.xi_l1 + init.rd2_omega_l1, 0.25) *
                    std::pow(init.xi_l1, 0.25) * std::sqrt(init.xi_linf);
  return {EnvelopeKind::thm1_exponential, {{"C0", c0}, {"C1", c1}}, Dimension(4)};
}

double support_rate_constant(const DiagnosticsRecord& init, Dimension d, double c_cal) {
  return c_cal * std::sqrt(init.xi_l1) * std::sqrt(init.xi_linf) *
         std::pow(init.S, 0.5 * (d.value() - 4));
}

GrowthEnvelope support_envelope(const DiagnosticsRecord& init, Dimension d, double c) {
  return {EnvelopeKind::support_exponential, {{"S0", init.S}, {"C", c}}, d};
}

GrowthEnvelope theorem2_envelope_calibrated(const DiagnosticsRecord& init, Dimension d,
                                            double c_cal, SeriesQuantity q) {
  const int v = d.value();
  if (v > 7) throw DomainError("polynomial growth envelopes are defined for d <= 7");
  const double k = c_cal * std::pow(init.r_omega_l1, 0.25) * std::pow(init.xi_l1, 0.25) *
                   std::sqrt(init.xi_linf);
  const bool omega = q == SeriesQuantity::omega_sup;
  if (v == 7) {
    // S' <= K S gives S <= S0 e^{K t}.
    if (!omega) return {EnvelopeKind::thm2_exponential_d7, {{"C3", init.S}, {"C4", k}}, d};
    return {EnvelopeKind::thm2_exponential_d7,
            {{"C3", init.xi_linf * pow_half(init.S, 2 * (v - 2))}, {"C4", (v - 2) * k}},
            d};
  }
  // max(S0^a, aK)^{1/a}, kept exact when S0 dominates.
  const double a = (7.0 - v) / 4.0;
  const double base = std::max(init.S, std::pow(a * k, 1.0 / a));
  const double c2 = omega ? init.xi_linf * pow_half(base, 2 * (v - 2)) : base;
  return {EnvelopeKind::thm2_polynomial, {{"C2", c2}}, d};
}

double quantity(const DiagnosticsRecord& rec, SeriesQuantity q) {
  return q == SeriesQuantity::omega_sup ? rec.omega_sup : rec.S;
}

GrowthEnvelope theorem2_envelope_fitted(std::span<const DiagnosticsRecord> series, Dimension d,
                                        SeriesQuantity q, double fit_fraction) {
  if (series.empty()) throw DomainError("cannot fit an envelope to an empty series");
  const int v = d.value();
  if (v > 7) throw DomainError("polynomial growth envelopes are defined for d <= 7");
  const double t_fit = fit_fraction * series.back().t;
  if (v == 7) {
    // Rate from the calibrated-free form: fit C3 at t = 0 and C4 as the
    // smallest rate covering the fit window.
    const double c3 = std::max(quantity(series.front(), q), std::numeric_limits<double>::min());
    double c4 = std::numeric_limits<double>::min();
    for (const auto& rec : series) {
      if (rec.t > t_fit) break;
      if (rec.t > 0.0) c4 = std::max(c4, std::log(quantity(rec, q) / c3) / rec.t);
    }
    return {EnvelopeKind::thm2_exponential_d7, {{"C3", c3}, {"C4", c4}}, d};
  }
  const double e = polynomial_growth_exponent(d);
  double c2 = std::numeric_limits<double>::min();
  for (const auto& rec : series) {
    if (rec.t > t_fit) break;
    c2 = std::max(c2, quantity(rec, q) / std::pow(1.0 + rec.t, e));
  }
  return {EnvelopeKind::thm2_polynomial, {{"C2", c2}}, d};
}

double CheckSample::margin() const {
  return value > 0.0 ? bound / value : std::numeric_limits<double>::infinity();
}

bool CheckReport::passed() const {
  return std::all_of(samples.begin(), samples.end(), [](const CheckSample& s) { return s.pass(); });
}

double CheckReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.margin());
  return m;
}

CheckReport lemma24_check(std::span<const DiagnosticsRecord> series, const DiagnosticsRecord& init,
                          Dimension d) {
  if (d.value() != 4) throw DomainError("lemma24_check applies to d = 4 series");
  const double c_inf = init.xi_linf + init.omega_sup;
  const double c_one = init.xi_l1 + init.rd2_omega_l1;
  CheckReport report{"lemma24", {}};
  for (const auto& rec : series) {
    const double r2 = rec.R * rec.R;
    report.samples.push_back({rec.t, "omega_sup", rec.omega_sup, c_inf * r2});
    report.samples.push_back({rec.t, "rd2_omega_l1", rec.rd2_omega_l1, c_one * r2 * r2});
  }
  return report;
}

CheckReport envelope_check(std::span<const DiagnosticsRecord> series, const GrowthEnvelope& env,
                           SeriesQuantity q) {
  CheckReport report{to_string(env.kind), {}};
  const char* name = q == SeriesQuantity::omega_sup ? "omega_sup" : "S";
  for (const auto& rec : series) {
    report.samples.push_back({rec.t, name, quantity(rec, q), envelope_value(env, rec.t)});
  }
  return report;
}

CheckReport support_envelope_check(std::span<const DiagnosticsRecord> series, Dimension d,
                                   double c) {
  if (series.empty()) return {"support_exponential", {}};
  auto report = envelope_check(series, support_envelope(series.front(), d, c), SeriesQuantity::support);
  return report;
}

std::vector<EnvelopeColumn> envelope_columns(std::span<const DiagnosticsRecord> series, Dimension d,
                                             double c_cal, bool fitted) {
  std::vector<EnvelopeColumn> out;
  if (series.empty()) return out;
  const auto& init = series.front();
  auto add = [&](std::string name, const CheckReport& report, std::string kind,
                 std::map<std::string, double> constants, std::size_t stride, std::size_t offset) {
    EnvelopeColumn col{std::move(name), "", std::move(kind), std::move(constants), {}, {}, true, 0.0};
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = offset; i < report.samples.size(); i += stride) {
      const auto& s = report.samples[i];
      col.quantity = s.quantity;
      col.bound.push_back(s.bound);
      col.pass.push_back(s.pass());
      col.passed = col.passed && s.pass();
      margin = std::min(margin, s.margin());
    }
    col.min_margin = margin;
    out.push_back(std::move(col));
  };
  if (d.value() == 4) {
    const auto lemma = lemma24_check(series, init, d);
    add("lemma24_omega", lemma, "lemma24", {{"C", init.xi_linf + init.omega_sup}}, 2, 0);
    add("lemma24_rd2", lemma, "lemma24", {{"C", init.xi_l1 + init.rd2_omega_l1}}, 2, 1);
    const auto thm1 = theorem1_envelope(init, c_cal);
    add("thm1_omega", envelope_check(series, thm1, SeriesQuantity::omega_sup), to_string(thm1.kind),
        thm1.constants, 1, 0);
  }
  const double c = support_rate_constant(init, d, c_cal);
  add("support_S", support_envelope_check(series, d, c), to_string(EnvelopeKind::support_exponential),
      {{"S0", init.S}, {"C", c}}, 1, 0);
  if (d.value() <= 7) {
    for (const auto q : {SeriesQuantity::omega_sup, SeriesQuantity::support}) {
      const auto env = fitted ? theorem2_envelope_fitted(series, d, q)
                              : theorem2_envelope_calibrated(init, d, c_cal, q);
      add(q == SeriesQuantity::omega_sup ? "thm2_omega" : "thm2_S", envelope_check(series, env, q),
          to_string(env.kind), env.constants, 1, 0);
    }
  }
  return out;
}

namespace {

// Antiderivative of 1/sqrt(x^2 + y^2) in x and y, up to terms that cancel
// in a rectangle difference.
double cell_potential(double x, double y) {
  double v = 0.0;
  if (x != 0.0) v += x * std::asinh(y / std::abs(x));
  if (y != 0.0) v += y * std::asinh(x / std::abs(y));
  return v;
}

}  // namespace

double kernelf_inequality_check(const GriddedField& f, HalfPlanePoint x0) {
  if (f.nx == 0 || f.ny == 0 || f.values.size() != f.nx * f.ny) {
    throw DomainError("gridded field is empty or has mismatched size");
  }
  if (!(f.hx > 0.0) || !(f.hy > 0.0)) throw DomainError("gridded field needs positive cell sizes");
  NeumaierSum integral;
  NeumaierSum mass;
  double peak = 0.0;
  // Cell edges relative to x0; each potential is shared by four cells.
  std::vector<double> ex(f.nx + 1);
  std::vector<double> ey(f.ny + 1);
  for (std::size_t i = 0; i <= f.nx; ++i) ex[i] = f.x_min + f.hx * static_cast<double>(i) - x0.r;
  for (std::size_t j = 0; j <= f.ny; ++j) ey[j] = f.y_min + f.hy * static_cast<double>(j) - x0.z;
  std::vector<double> lower(f.ny + 1);
  std::vector<double> upper(f.ny + 1);
  for (std::size_t j = 0; j <= f.ny; ++j) lower[j] = cell_potential(ex[0], ey[j]);
  for (std::size_t i = 0; i < f.nx; ++i) {
    for (std::size_t j = 0; j <= f.ny; ++j) upper[j] = cell_potential(ex[i + 1], ey[j]);
    for (std::size_t j = 0; j < f.ny; ++j) {
      const double v = f.values[i * f.ny + j];
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("gridded field must be finite and >= 0");
      if (v == 0.0) continue;
      integral.add(v * (upper[j + 1] - upper[j] - lower[j + 1] + lower[j]));
      mass.add(v);
      peak = std::max(peak, v);
    }
    std::swap(lower, upper);
  }
  if (peak == 0.0) throw DomainError("kernelf check of a zero field");
  const double l1 = mass.value() * f.hx * f.hy;
  return std::abs(integral.value()) / (std::sqrt(l1) * std::sqrt(peak));
}

double urintbd_quantity(const KernelEvaluator& kernel, double r, double z) {
  if (!(r > 0.0)) throw AxisError("urintbd quantity requires r > 0");
  const double s = ((r - 1.0) * (r - 1.0) + z * z) / r;
  if (z == 0.0) return 0.0;
  return pow_half(r, kernel.dimension().value() - 4) * std::abs(z * kernel.eval(s).F_prime);
}

RegionBoundReport urintbd_region_check(const KernelEvaluator& kernel,
                                       std::span<const HalfPlanePoint> grid) {
  RegionBoundReport out;
  for (const auto& p : grid) {
    const double rho2 = (p.r - 1.0) * (p.r - 1.0) + p.z * p.z;
    if (!(p.r > 0.0) || rho2 == 0.0) throw DomainError("grid must avoid the axis and (1, 0)");
    const double q = urintbd_quantity(kernel, p.r, p.z);
    const bool inner = p.r >= 0.5 && p.r <= 2.0 && p.z >= -1.0 && p.z <= 1.0;
    if (inner) {
      const double v = q * std::sqrt(rho2);
      if (v > out.inner_sup) {
        out.inner_sup = v;
        out.inner_argmax = p;
      }
    } else {
      const double v = q * rho2;
      if (v > out.outer_sup) {
        out.outer_sup = v;
        out.outer_argmax = p;
      }
    }
  }
  return out;
}

std::vector<HalfPlanePoint> log_biased_grid(std::size_t n, double rho_min, double extent) {
  if (n < 2 || !(rho_min > 0.0) || !(extent > rho_min)) {
    throw DomainError("log_biased_grid needs n >= 2 and 0 < rho_min < extent");
  }
  const auto radii = log_grid(rho_min, extent, n);
  std::vector<HalfPlanePoint> pts;
  pts.reserve(n * n);
  for (double rho : radii) {
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      const double r = 1.0 + rho * std::cos(theta);
      if (r > 1e-6) pts.push_back({r, rho * std::sin(theta)});
    }
  }
  return pts;
}

}  // namespace hdeuler
