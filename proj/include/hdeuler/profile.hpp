#pragma once

#include <string>
#include <string_view>

#include "hdeuler/particles.hpp"

namespace hdeuler {

enum class ProfileKind { gaussian_ring, ring_pair, signed_pair };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view text);

/// Gaussian vortex rings in xi, truncated at 4 sigma from each center.
///
/// ring_pair and signed_pair place two rings at (r0, z0 -/+ separation/2);
/// the upper ring of a signed_pair carries -amplitude.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::gaussian_ring;
  double r0 = 1.0;
  double z0 = 0.0;
  double sigma = 0.1;
  double amplitude = 1.0;
  double separation = 0.0;  // pair kinds only; 0 selects 10 sigma

  double effective_separation() const { return separation > 0.0 ? separation : 10.0 * sigma; }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Analytic relative vorticity of the profile.
double profile_xi(const ProfileSpec& profile, double r, double z);

/// Analytic scalar vorticity omega = r^{d-2} xi.
double profile_omega(const ProfileSpec& profile, Dimension d, double r, double z);

/// Particles on a node-centered square lattice clipped to each 4-sigma disk.
/// The lattice is the finest odd-sided one whose clipped node count fits in
/// `n_particles` (split evenly between the rings of a pair); mu_i is
/// r_i^{d-2} times the cell area.
ParticleSet init_particles(const ProfileSpec& profile, Dimension d, std::size_t n_particles,
                           double delta);

}  // namespace hdeuler
