#include "hdeuler/simulator.hpp"

#include <chrono>
#include <cmath>

namespace hdeuler {

std::string to_string(EnvelopeConstantSource source) {
  return source == EnvelopeConstantSource::calibrated ? "calibrated" : "fitted";
}

EnvelopeConstantSource parse_envelope_constant_source(const std::string& text) {
  if (text == "calibrated") return EnvelopeConstantSource::calibrated;
  if (text == "fitted") return EnvelopeConstantSource::fitted;
  throw ConfigError("envelope_constant_source", "expected calibrated or fitted, got '" + text + "'");
}

void SimulationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end", "must be >= 0");
  if (n_particles < 1) throw ConfigError("n_particles", "must be >= 1");
  // The blob self-interaction is singular at delta = 0.
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("delta", "must be > 0 for particle simulations");
  }
  if (output_every < 1) throw ConfigError("output_every", "must be >= 1");
  profile.validate();
}

ParticleSet init_profile(const SimulationConfig& cfg) {
  cfg.validate();
  return init_particles(cfg.profile, cfg.d, cfg.n_particles, cfg.delta);
}

namespace {

ParticleSet displaced(const ParticleSet& base, const std::vector<VelocitySample>& k, double h) {
  ParticleSet out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.positions[i].r += h * k[i].ur;
    out.positions[i].z += h * k[i].uz;
  }
  return out;
}

ParticleSet rk4(const KernelEvaluator& kernel, const ParticleSet& state,
                const std::vector<VelocitySample>& k1, double dt, const RunOptions& options) {
  const InductionOptions io{options.workers, 1.0};
  const auto k2 = self_velocity(kernel, displaced(state, k1, 0.5 * dt), io);
  const auto k3 = self_velocity(kernel, displaced(state, k2, 0.5 * dt), io);
  const auto k4 = self_velocity(kernel, displaced(state, k3, dt), io);
  ParticleSet out = state;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& p = out.positions[i];
    p.r += w * (k1[i].ur + 2.0 * k2[i].ur + 2.0 * k3[i].ur + k4[i].ur);
    p.z += w * (k1[i].uz + 2.0 * k2[i].uz + 2.0 * k3[i].uz + k4[i].uz);
    if (!(p.r > options.r_floor)) {
      throw AxisError("particle " + std::to_string(i) + " reached r = " + std::to_string(p.r) +
                      " <= r_floor");
    }
  }
  return out;
}

DiagnosticsRecord record_with(const KernelEvaluator& kernel, const ParticleSet& state, double t,
                              double R, double S_running, const RunOptions& options,
                              const std::vector<VelocitySample>* at_particles) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.R = R;
  rec.S = std::max(S_running, support_radius(state));
  if (state.empty()) return rec;
  const int d = state.d.value();
  rec.omega_sup = omega_linf(state);
  rec.xi_l1 = xi_l1(state);
  rec.xi_l2 = xi_l2(state);
  rec.xi_linf = xi_linf(state);
  rec.r_omega_l1 = weighted_L1(state, 1);
  rec.rd2_omega_l1 = weighted_L1(state, d - 2);
  rec.omega_over_rd2_l1 = weighted_L1(state, -(d - 2));
  rec.angular_impulse = angular_impulse(state);
  rec.distortion = distortion(state);
  if (rec.xi_linf == 0.0) return rec;
  rec.fs_product = feng_sverak_product(state);

  const InductionOptions io{options.workers, 1.0};
  double sup = 0.0;
  if (at_particles != nullptr) {
    for (const auto& u : *at_particles) sup = std::max(sup, std::abs(u.ur));
    const auto probes = probe_grid(state, options.probe_resolution);
    for (const auto& u : velocity_field(kernel, state, probes, state.blob, io)) {
      sup = std::max(sup, std::abs(u.ur));
    }
  } else {
    sup = radial_velocity_sup(kernel, state, state.blob, {options.probe_resolution, io});
  }
  rec.ur_sup = sup;
  return rec;
}

}  // namespace

ParticleSet step(const KernelEvaluator& kernel, const ParticleSet& state, double dt,
                 const RunOptions& options) {
  if (!(dt > 0.0)) throw DomainError("step requires dt > 0");
  const auto k1 = self_velocity(kernel, state, {options.workers, 1.0});
  return rk4(kernel, state, k1, dt, options);
}

DiagnosticsRecord diagnostics(const KernelEvaluator& kernel, const ParticleSet& state, double t,
                              double R, double S_running, const RunOptions& options) {
  return record_with(kernel, state, t, R, S_running, options, nullptr);
}

RunResult run(const KernelEvaluator& kernel, ParticleSet initial, double dt, double t_end,
              std::size_t output_every, const RunOptions& options) {
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(t_end >= 0.0)) throw ConfigError("t_end", "must be >= 0");
  if (output_every < 1) throw ConfigError("output_every", "must be >= 1");
  initial.validate();
  const auto start = std::chrono::steady_clock::now();

  RunResult result;
  // Steps of exactly dt, the last one shortened to land on t_end.
  const double ratio = t_end / dt;
  std::size_t n_steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  if (t_end == 0.0) n_steps = 0;

  ParticleSet state = std::move(initial);
  double R = 1.0;
  double S = support_radius(state);
  double t = 0.0;
  auto k1 = self_velocity(kernel, state, {options.workers, 1.0});
  result.records.push_back(record_with(kernel, state, t, R, S, options, &k1));

  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double t_next = k == n_steps ? t_end : static_cast<double>(k) * dt;
    try {
      state = rk4(kernel, state, k1, t_next - t, options);
      k1 = self_velocity(kernel, state, {options.workers, 1.0});
    } catch (const AxisError& e) {
      result.aborted = true;
      result.abort_reason = e.what();
      result.abort_time = t;
      break;
    }
    t = t_next;
    result.steps = k;
    S = std::max(S, support_radius(state));
    if (k % output_every == 0 || k == n_steps) {
      const auto& prev = result.records.back();
      auto rec = record_with(kernel, state, t, R, S, options, &k1);
      R = prev.R + 0.5 * (t - prev.t) * (prev.ur_sup + rec.ur_sup);
      rec.R = R;
      result.records.push_back(rec);
    }
  }
  result.final_state = std::move(state);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run(const SimulationConfig& cfg, const RunOptions& options) {
  const KernelEvaluator kernel(cfg.d);
  return run(kernel, init_profile(cfg), cfg.dt, cfg.t_end, cfg.output_every, options);
}

}  // namespace hdeuler
