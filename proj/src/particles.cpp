#include "hdeuler/particles.hpp"

#include <cmath>
#include <string>

namespace hdeuler {

void ParticleSet::validate() const {
  if (xi.size() != positions.size() || mu.size() != positions.size()) {
    throw DomainError("particle arrays have mismatched lengths");
  }
  if (!(blob.delta >= 0.0)) throw DomainError("blob delta must be >= 0");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!(positions[i].r > 0.0) || !std::isfinite(positions[i].z)) {
      throw AxisError("particle " + std::to_string(i) + " is not strictly off the axis");
    }
    if (!(mu[i] > 0.0)) throw DomainError("particle " + std::to_string(i) + " has mu <= 0");
  }
}

ParticleSet rescale(const ParticleSet& particles, double lambda, double z0) {
  if (!(lambda > 0.0)) throw DomainError("rescale requires lambda > 0");
  const int d = particles.d.value();
  const double xi_factor = std::pow(lambda, d - 1);
  const double mu_factor = std::pow(lambda, -d);
  ParticleSet out(particles.d);
  out.blob.delta = particles.blob.delta / lambda;
  out.positions.reserve(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles.positions[i];
    out.push_back({p.r / lambda, (p.z - z0) / lambda}, particles.xi[i] * xi_factor,
                  particles.mu[i] * mu_factor);
  }
  return out;
}

ParticleSet superpose(const ParticleSet& a, const ParticleSet& b) {
  if (!(a.d == b.d)) throw DomainError("cannot superpose particle sets of different dimension");
  ParticleSet out = a;
  out.positions.insert(out.positions.end(), b.positions.begin(), b.positions.end());
  out.xi.insert(out.xi.end(), b.xi.begin(), b.xi.end());
  out.mu.insert(out.mu.end(), b.mu.begin(), b.mu.end());
  return out;
}

}  // namespace hdeuler
