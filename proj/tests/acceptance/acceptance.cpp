// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hdeuler/calibration.hpp"
#include "hdeuler/series_io.hpp"
#include "hdeuler/verification.hpp"

using namespace hdeuler;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s %-24s %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Closed form of F_4, with the u = 4/s series where the logarithm cancels.
KernelValues f4_oracle(double s) {
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

ProfileSpec wide_ring() {
  ProfileSpec p;
  p.r0 = 2.0;
  p.sigma = 0.4;
  return p;
}

FieldResiduals residuals_on(const ProfileSpec& p, std::size_t n, double delta, double h,
                            double half_width) {
  const KernelEvaluator k(Dimension(4));
  const auto ps = init_particles(p, Dimension(4), n, delta);
  const GridSpec g{p.r0 - half_width, p.r0 + half_width, p.z0 - half_width, p.z0 + half_width, h};
  return field_residuals(k, ps, g, ps.blob,
                         [&](double r, double z) { return profile_omega(p, Dimension(4), r, z); });
}

double max_position_gap(const ParticleSet& a, const ParticleSet& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::hypot(a.positions[i].r - b.positions[i].r, a.positions[i].z - b.positions[i].z));
  }
  return m;
}

double record_rel_gap(const std::vector<DiagnosticsRecord>& a, const std::vector<DiagnosticsRecord>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (auto f : {&DiagnosticsRecord::omega_sup, &DiagnosticsRecord::ur_sup, &DiagnosticsRecord::S,
                   &DiagnosticsRecord::R, &DiagnosticsRecord::angular_impulse,
                   &DiagnosticsRecord::distortion}) {
      const double x = a[i].*f;
      const double y = b[i].*f;
      if (x != y) m = std::max(m, std::abs(x - y) / std::max(std::abs(x), std::abs(y)));
    }
  }
  return m;
}

}  // namespace

int main() {
  const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  report("kernel-exactness", [] {
    const auto t0 = Clock::now();
    const KernelEvaluator k(Dimension(4));
    double worst = 0.0;
    for (double s : log_grid(1e-6, 1e6, 200)) {
      const auto exact = f4_oracle(s);
      worst = std::max({worst, rel(k.eval_F(s), exact.F), rel(k.eval_F_prime(s), exact.F_prime)});
    }
    const double t = seconds_since(t0);
    return Verdict{worst < 1e-8 && t < 5.0, fmt("max rel err %.2e (< 1e-8), %.2f s (< 5 s)", worst, t)};
  });

  report("kernel-limits", [] {
    const KernelEvaluator k4(Dimension(4));
    const double small = 1e-8 * k4.eval_F_prime(1e-8);
    const double tail = std::pow(1e4, 3) * std::abs(k4.eval_F_prime(1e4));
    const double c6 = tail_coefficient(Dimension(6));
    bool ok = std::abs(small + 0.5) < 1e-3 && rel(tail, 8.0 / 3.0) < 5e-3 && rel(c6, 16.0 / 5.0) < 5e-3;
    double worst_fit = 0.0;
    for (int d = 4; d <= 7; ++d) {
      const KernelEvaluator k{Dimension(d)};
      worst_fit = std::max(worst_fit, rel(fit_tail_exponent(k), -(0.5 * d + 1.0)));
    }
    ok = ok && worst_fit < 1e-2;
    return Verdict{ok, fmt("sF'(1e-8)=%.6f, s^3|F'|(1e4)=%.5f, C_6=%.6f, tail exponent err %.1e",
                           small, tail, c6, worst_fit)};
  });

  report("scaling-invariance", [] {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    const KernelEvaluator k(Dimension(4));
    const auto ps = init_particles(ProfileSpec{}, Dimension(4), 1024, 0.05);
    const double p0 = feng_sverak_product(ps);
    const double q0 = feng_sverak_ratio(k, ps);
    double dp = 0.0;
    double dq = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto sc = rescale(ps, std::exp(log_lambda(gen)), shift(gen));
      dp = std::max(dp, rel(feng_sverak_product(sc), p0));
      dq = std::max(dq, rel(feng_sverak_ratio(k, sc), q0));
    }
    return Verdict{dp < 1e-10 && dq < 1e-10, fmt("product drift %.1e, ratio drift %.1e (< 1e-10)", dp, dq)};
  });

  report("velocity-correctness", [] {
    // Wide ring (r0 = 2, sigma = 0.4) so that delta / sigma = 1/8 meets the
    // small-blob precondition; residuals on a window about the core.
    const auto p = wide_ring();
    const auto base = residuals_on(p, 16384, 0.05, 0.02, 0.8);
    const auto fine = residuals_on(p, 65536, 0.025, 0.01, 0.8);
    // The narrow default ring (sigma = 0.1, delta / sigma = 1/2) for the record.
    const auto narrow = residuals_on(ProfileSpec{}, 16384, 0.05, 0.02, 0.2);
    const bool ok = base.curl < 5e-2 && base.divergence < 1e-2 && fine.curl * 2.0 <= base.curl &&
                    fine.divergence * 2.0 <= base.divergence;
    return Verdict{ok, fmt("curl %.3e -> %.3e, div %.3e -> %.3e; narrow ring curl %.3e div %.3e "
                           "(informational)",
                           base.curl, fine.curl, base.divergence, fine.divergence, narrow.curl,
                           narrow.divergence)};
  });

  // Reference run shared by the conservation and d = 4 growth criteria.
  SimulationConfig ref;
  ref.n_particles = 4096;
  ref.dt = 0.01;
  ref.t_end = 2.0;
  ref.output_every = 10;
  RunOptions ref_opts;
  ref_opts.workers = workers;
  const auto ref_t0 = Clock::now();
  RunResult ref_run;
  try {
    ref_run = run(ref, ref_opts);
  } catch (const std::exception& e) {
    ref_run.aborted = true;
    ref_run.abort_reason = e.what();
  }
  const double ref_seconds = seconds_since(ref_t0);

  report("conservation", [&] {
    if (ref_run.aborted) return Verdict{false, "reference run aborted: " + ref_run.abort_reason};
    const auto& r0 = ref_run.records.front();
    double xi_drift = 0.0;
    double impulse_drift = 0.0;
    for (const auto& r : ref_run.records) {
      xi_drift = std::max({xi_drift, rel(r.xi_l1, r0.xi_l1), rel(r.xi_l2, r0.xi_l2),
                           rel(r.xi_linf, r0.xi_linf)});
      impulse_drift = std::max(impulse_drift, rel(r.angular_impulse, r0.angular_impulse));
    }
    // Self-convergence of RK4 at t = 0.5 against a dt/4 reference.
    const KernelEvaluator k(Dimension(4));
    const auto ps = init_particles(ProfileSpec{}, Dimension(4), 1024, 0.05);
    auto at = [&](double dt) { return run(k, ps, dt, 0.5, 1000).final_state; };
    const auto reference = at(0.0125);
    const double e1 = max_position_gap(at(0.1), reference);
    const double e2 = max_position_gap(at(0.05), reference);
    const double ratio = e1 / e2;
    const bool ok = ref_run.steps == 200 && xi_drift < 1e-14 && impulse_drift < 1e-3 &&
                    std::abs(ratio - 16.0) <= 4.0;
    return Verdict{ok, fmt("%zu steps, xi norm drift %.1e, impulse drift %.2e (< 1e-3), "
                           "dt-halving ratio %.2f (16 +- 4)",
                           ref_run.steps, xi_drift, impulse_drift, ratio)};
  });

  report("omega-growth-d4", [&] {
    if (ref_run.aborted) return Verdict{false, "reference run aborted: " + ref_run.abort_reason};
    const auto& series = ref_run.records;
    const auto lemma = lemma24_check(series, series.front(), Dimension(4));
    const double c_cal = calibrated_constant(Dimension(4));
    const auto env = theorem1_envelope(series.front(), c_cal);
    const auto thm1 = envelope_check(series, env, SeriesQuantity::omega_sup);
    const bool ok = lemma.passed() && thm1.passed() && ref_seconds < 600.0;
    return Verdict{ok, fmt("%zu samples, lemma margin %.3f, thm1 margin %.3f (C_cal %.4f), "
                           "run %.0f s (< 600 s)",
                           series.size(), lemma.min_margin(), thm1.min_margin(), c_cal, ref_seconds)};
  });

  report("support-growth-d5", [&] {
    SimulationConfig cfg;
    cfg.d = Dimension(5);
    cfg.n_particles = 2048;
    cfg.dt = 0.01;
    cfg.t_end = 2.0;
    cfg.output_every = 10;
    RunOptions o;
    o.workers = workers;
    const auto r = run(cfg, o);
    if (r.aborted) return Verdict{false, "run aborted: " + r.abort_reason};
    const auto& series = r.records;
    const double c = support_rate_constant(series.front(), Dimension(5), calibrated_constant(Dimension(5)));
    const auto support = support_envelope_check(series, Dimension(5), c);
    const auto env = theorem2_envelope_fitted(series, Dimension(5), SeriesQuantity::support);
    const auto poly = envelope_check(series, env, SeriesQuantity::support);
    const double exponent = polynomial_growth_exponent(Dimension(5));
    const bool ok = support.passed() && poly.passed() && exponent == 6.0;
    return Verdict{ok, fmt("S %.4f -> %.4f, S0 e^{Ct} margin %.4f, fitted C2 (1+t)^%g margin %.4f",
                           series.front().S, series.back().S, support.min_margin(), exponent,
                           poly.min_margin())};
  });

  report("disk-ratio", [] {
    const double exact = 2.0 * std::sqrt(std::numbers::pi);
    const double ratio = kernelf_inequality_check(disk_indicator(1.0, 1e-3), {0.0, 0.0});
    return Verdict{rel(ratio, exact) < 1e-3, fmt("ratio %.6f vs 2 sqrt(pi) = %.6f", ratio, exact)};
  });

  report("determinism", [] {
    SimulationConfig cfg;
    cfg.n_particles = 1024;
    cfg.dt = 0.02;
    cfg.t_end = 0.2;
    cfg.output_every = 1;
    const auto a = format_series_csv(run(cfg).records);
    const auto b = format_series_csv(run(cfg).records);
    RunOptions many;
    many.workers = 4;
    const auto one = run(cfg).records;
    const double gap = record_rel_gap(one, run(cfg, many).records);
    return Verdict{a == b && gap <= 1e-13,
                   fmt("single-worker CSV %s, 4-worker max rel gap %.1e (<= 1e-13)",
                       a == b ? "identical" : "differs", gap)};
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
