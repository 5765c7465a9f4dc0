#pragma once

#include <cstddef>
#include <vector>

#include "hdeuler/kernel.hpp"

namespace hdeuler {

/// Point of the meridional half-plane {(r, z) : r >= 0}.
struct HalfPlanePoint {
  double r = 0.0;
  double z = 0.0;
};

struct VelocitySample {
  double ur = 0.0;
  double uz = 0.0;
};

/// Vortex-blob core size. delta = 0 recovers the singular kernel and is only
/// usable for targets away from every source.
struct BlobParameter {
  double delta = 0.0;
};

/// Lagrangian discretization of the relative vorticity xi = omega / r^{d-2}.
///
/// mu holds invariant weights of the measure r^{d-2} dr dz (fixed at
/// initialization); the omega-mass carried by particle i is xi[i] * mu[i]
/// in every frame because the flow preserves that measure.
struct ParticleSet {
  explicit ParticleSet(Dimension dim) : d(dim) {}

  Dimension d;
  std::vector<HalfPlanePoint> positions;
  std::vector<double> xi;
  std::vector<double> mu;
  BlobParameter blob;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }

  void push_back(HalfPlanePoint p, double xi_value, double mu_value) {
    positions.push_back(p);
    xi.push_back(xi_value);
    mu.push_back(mu_value);
  }

  /// Throws DomainError on mismatched arrays, r <= 0, mu <= 0 or delta < 0.
  void validate() const;
};

/// Particle image of omega~(r, z) = lambda * omega(lambda r, lambda z + z0):
/// positions map to ((r)/lambda, (z - z0)/lambda), xi scales by
/// lambda^{d-1}, mu by lambda^{-d}, and the blob size by 1/lambda.
ParticleSet rescale(const ParticleSet& particles, double lambda, double z0);

/// Concatenation of two sets over the same dimension (blob taken from `a`).
ParticleSet superpose(const ParticleSet& a, const ParticleSet& b);

}  // namespace hdeuler
