#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hdeuler/estimates.hpp"
#include "hdeuler/profile.hpp"

namespace hdeuler {

enum class EnvelopeConstantSource { calibrated, fitted };

std::string to_string(EnvelopeConstantSource source);
EnvelopeConstantSource parse_envelope_constant_source(const std::string& text);

struct SimulationConfig {
  Dimension d{4};
  ProfileSpec profile;
  std::size_t n_particles = 4096;
  double dt = 0.01;
  double t_end = 0.0;
  double delta = 0.05;
  std::size_t output_every = 10;
  EnvelopeConstantSource envelope_constant_source = EnvelopeConstantSource::calibrated;
  std::string output_path;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct RunOptions {
  int workers = 1;
  double r_floor = 1e-6;
  std::size_t probe_resolution = 32;
};

ParticleSet init_profile(const SimulationConfig& cfg);

/// One classical RK4 step; xi, mu and the blob are carried over unchanged.
/// Throws AxisError when a particle ends at r <= r_floor or a stage leaves
/// the half-plane.
ParticleSet step(const KernelEvaluator& kernel, const ParticleSet& state, double dt,
                 const RunOptions& options = {});

/// Record at time t. `R` and `S_running` are carried by the caller; the
/// returned S is max(S_running, current support radius).
DiagnosticsRecord diagnostics(const KernelEvaluator& kernel, const ParticleSet& state, double t,
                              double R, double S_running, const RunOptions& options = {});

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  ParticleSet final_state{Dimension(4)};
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
};

/// Steps from 0 to t_end and emits a record every output_every steps plus
/// at t = 0 and t = t_end. R is integrated by the trapezoidal rule over the
/// emitted ur_sup samples; S is the running maximum of the support radius
/// over every step. An axis abort returns the partial series and the last
/// valid state.
RunResult run(const SimulationConfig& cfg, const RunOptions& options = {});

/// Same, from an explicit kernel and initial state.
RunResult run(const KernelEvaluator& kernel, ParticleSet initial, double dt, double t_end,
              std::size_t output_every, const RunOptions& options = {});

}  // namespace hdeuler
