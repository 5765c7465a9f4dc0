#pragma once

// Calibrated stand-ins for the implicit constants of the a-priori
// estimates: the largest Feng-Sverak ratio seen over a fixed, seeded family
// of admissible profiles, measured once per dimension and frozen here.

#include <cstdint>
#include <vector>

#include "hdeuler/estimates.hpp"
#include "hdeuler/profile.hpp"

namespace hdeuler {

struct CalibrationFamily {
  std::size_t members = 20;
  std::uint64_t seed = 20240917;
  std::size_t n_particles = 1024;
  std::size_t probe_resolution = 32;
};

/// Profiles of the family. Member 0 is the reference ring (r0 = 1,
/// sigma = 0.1); the rest are drawn from the seeded generator.
std::vector<ProfileSpec> calibration_profiles(const CalibrationFamily& family = {});

/// Particles for one member: family resolution, blob delta = sigma / 2.
ParticleSet calibration_particles(const ProfileSpec& profile, Dimension d,
                                  const CalibrationFamily& family = {});

struct CalibrationSweep {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
};

CalibrationSweep calibration_sweep(const KernelEvaluator& kernel,
                                   const CalibrationFamily& family = {}, int workers = 1);

/// Frozen C_cal for d = 4..8 (the default family's max ratio).
double calibrated_constant(Dimension d);

}  // namespace hdeuler
