#pragma once

// Velocity induced by a particle discretization of the vorticity.
//
// With omega-mass m_j = xi_j mu_j at (rb_j, zb_j) and the regularized
// argument s_j = ((r - rb_j)^2 + (z - zb_j)^2 + delta^2) / (r rb_j),
//
//   psi(r, z) = c_d sum_j m_j (r rb_j)^{d/2-1} F_d(s_j),
//   u^r = -r^{-(d-2)} d_z psi = -2 c_d r^{-d/2} sum_j m_j rb_j^{d/2-2} (z - zb_j) F_d'(s_j),
//   u^z =  r^{-(d-2)} d_r psi
//       =  c_d r^{-d/2} sum_j m_j rb_j^{d/2-1} [(d/2-1) F_d(s_j) + F_d'(s_j)(2(r - rb_j)/rb_j - s_j)].
//
// The velocity is the exact derivative of the discrete psi, so the reduced
// divergence d_r(r^{d-2} u^r) + d_z(r^{d-2} u^z) vanishes identically.

#include <functional>
#include <span>
#include <vector>

#include "hdeuler/kernel.hpp"
#include "hdeuler/particles.hpp"

namespace hdeuler {

struct InductionOptions {
  int workers = 1;
  /// Test hook: multiplies u^r by this factor (-1 gives the wrong-sign control).
  double ur_sign = 1.0;
};

double stream_function(const KernelEvaluator& kernel, const ParticleSet& particles,
                       HalfPlanePoint target, BlobParameter blob);

/// Targets with r = 0 return u^r = 0 and the on-axis limit of u^z.
VelocitySample velocity(const KernelEvaluator& kernel, const ParticleSet& particles,
                        HalfPlanePoint target, BlobParameter blob,
                        const InductionOptions& options = {});

/// Batched `velocity`. Each target is reduced over sources in index order
/// with compensated summation, so the output does not depend on `workers`.
std::vector<VelocitySample> velocity_field(const KernelEvaluator& kernel,
                                           const ParticleSet& particles,
                                           std::span<const HalfPlanePoint> targets,
                                           BlobParameter blob,
                                           const InductionOptions& options = {});

/// velocity_field at the particles' own positions with their own blob,
/// bitwise equal to it. Single-worker runs evaluate each kernel value once
/// per unordered pair.
std::vector<VelocitySample> self_velocity(const KernelEvaluator& kernel,
                                          const ParticleSet& particles,
                                          const InductionOptions& options = {});

/// Uniform node grid r_min + i h, z_min + j h over a rectangle of the half-plane.
struct GridSpec {
  double r_min = 0.0;
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double h = 0.0;

  std::size_t nr() const;
  std::size_t nz() const;
  HalfPlanePoint node(std::size_t i, std::size_t j) const { return {r_min + h * i, z_min + h * j}; }
  std::vector<HalfPlanePoint> nodes() const;  // i-major
};

/// max over interior nodes of |d_r(r^{d-2} u^r) + d_z(r^{d-2} u^z)| by
/// central differences, divided by max over nodes of r^{d-2} |u|.
double divergence_residual(const KernelEvaluator& kernel, const ParticleSet& particles,
                           const GridSpec& grid, BlobParameter blob,
                           const InductionOptions& options = {});

/// max over interior nodes of |(d_z u^r - d_r u^z) - omega_exact| divided by
/// the largest |omega_exact| on the grid.
double curl_recovery_error(const KernelEvaluator& kernel, const ParticleSet& particles,
                           const GridSpec& grid, BlobParameter blob,
                           const std::function<double(double, double)>& omega_exact,
                           const InductionOptions& options = {});

struct FieldResiduals {
  double divergence = 0.0;
  double curl = 0.0;
};

/// Both checks above from a single velocity evaluation on the grid.
FieldResiduals field_residuals(const KernelEvaluator& kernel, const ParticleSet& particles,
                               const GridSpec& grid, BlobParameter blob,
                               const std::function<double(double, double)>& omega_exact,
                               const InductionOptions& options = {});

}  // namespace hdeuler
