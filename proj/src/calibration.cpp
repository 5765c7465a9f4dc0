#include "hdeuler/calibration.hpp"

#include <array>
#include <random>

namespace hdeuler {

namespace {

// Uniform draw in [lo, hi) from the top 53 bits, independent of the
// standard library's distribution implementation.
double uniform(std::mt19937_64& gen, double lo, double hi) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// max ratio of calibration_sweep with the default family, d = 4..8.
constexpr std::array<double, 5> kFrozen = {
    0.041174530712755321,  // d = 4
    0.031745665077750847,  // d = 5
    0.026403200190132006,  // d = 6
    0.023259837642422402,  // d = 7
    0.02143277688063815,   // d = 8
};

}  // namespace

std::vector<ProfileSpec> calibration_profiles(const CalibrationFamily& family) {
  std::vector<ProfileSpec> out;
  if (family.members == 0) return out;
  out.push_back(ProfileSpec{});
  std::mt19937_64 gen(family.seed);
  while (out.size() < family.members) {
    ProfileSpec p;
    const double pick = uniform(gen, 0.0, 3.0);
    p.kind = pick < 1.0 ? ProfileKind::gaussian_ring
                        : (pick < 2.0 ? ProfileKind::ring_pair : ProfileKind::signed_pair);
    p.r0 = uniform(gen, 0.5, 3.0);
    p.sigma = p.r0 * uniform(gen, 0.03, 0.2);
    p.z0 = uniform(gen, -1.0, 1.0);
    p.amplitude = uniform(gen, 0.5, 2.0);
    if (p.kind != ProfileKind::gaussian_ring) p.separation = p.sigma * uniform(gen, 8.0, 16.0);
    out.push_back(p);
  }
  return out;
}

ParticleSet calibration_particles(const ProfileSpec& profile, Dimension d,
                                  const CalibrationFamily& family) {
  return init_particles(profile, d, family.n_particles, 0.5 * profile.sigma);
}

CalibrationSweep calibration_sweep(const KernelEvaluator& kernel, const CalibrationFamily& family,
                                   int workers) {
  CalibrationSweep sweep;
  const SupOptions options{family.probe_resolution, {workers, 1.0}};
  for (const auto& p : calibration_profiles(family)) {
    const auto ps = calibration_particles(p, kernel.dimension(), family);
    const double ratio = feng_sverak_ratio(kernel, ps, options);
    if (ratio > sweep.max_ratio) {
      sweep.max_ratio = ratio;
      sweep.argmax = sweep.ratios.size();
    }
    sweep.ratios.push_back(ratio);
  }
  return sweep;
}

double calibrated_constant(Dimension d) {
  return kFrozen[static_cast<std::size_t>(d.value() - Dimension::kMin)];
}

}  // namespace hdeuler
