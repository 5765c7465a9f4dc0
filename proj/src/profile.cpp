#include "hdeuler/profile.hpp"

#include <cmath>

namespace hdeuler {

namespace {

constexpr double kTruncation = 4.0;

struct RingCenter {
  double z;
  double amplitude;
};

std::vector<RingCenter> ring_centers(const ProfileSpec& p) {
  if (p.kind == ProfileKind::gaussian_ring) return {{p.z0, p.amplitude}};
  const double half = 0.5 * p.effective_separation();
  const double upper = p.kind == ProfileKind::signed_pair ? -p.amplitude : p.amplitude;
  return {{p.z0 - half, p.amplitude}, {p.z0 + half, upper}};
}

// Lattice nodes (i, j) in [-k, k]^2 with i^2 + j^2 <= k^2.
std::size_t clipped_count(long k) {
  std::size_t n = 0;
  for (long i = -k; i <= k; ++i) {
    for (long j = -k; j <= k; ++j) {
      if (i * i + j * j <= k * k) ++n;
    }
  }
  return n;
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::gaussian_ring:
      return "gaussian_ring";
    case ProfileKind::ring_pair:
      return "ring_pair";
    case ProfileKind::signed_pair:
      return "signed_pair";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(std::string_view text) {
  if (text == "gaussian_ring") return ProfileKind::gaussian_ring;
  if (text == "ring_pair") return ProfileKind::ring_pair;
  if (text == "signed_pair") return ProfileKind::signed_pair;
  throw ConfigError("kind", "unknown profile kind '" + std::string(text) +
                                "' (expected gaussian_ring, ring_pair or signed_pair)");
}

void ProfileSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be > 0");
  if (!std::isfinite(r0) || !std::isfinite(z0)) throw ConfigError("r0", "center must be finite");
  if (!(r0 - kTruncation * sigma > 0.0)) {
    throw ConfigError("r0", "support touches the axis (need r0 - 4 sigma > 0)");
  }
  if (!std::isfinite(amplitude) || amplitude == 0.0) {
    throw ConfigError("amplitude", "must be finite and nonzero");
  }
  if (kind != ProfileKind::gaussian_ring && effective_separation() < 2.0 * kTruncation * sigma) {
    throw ConfigError("separation", "ring supports overlap (need separation >= 8 sigma)");
  }
}

double profile_xi(const ProfileSpec& p, double r, double z) {
  const double cutoff = kTruncation * kTruncation * p.sigma * p.sigma;
  double xi = 0.0;
  for (const auto& c : ring_centers(p)) {
    const double rho2 = (r - p.r0) * (r - p.r0) + (z - c.z) * (z - c.z);
    if (rho2 <= cutoff * (1.0 + 1e-12)) xi += c.amplitude * std::exp(-rho2 / (2.0 * p.sigma * p.sigma));
  }
  return xi;
}

double profile_omega(const ProfileSpec& p, Dimension d, double r, double z) {
  return pow_half(r, 2 * (d.value() - 2)) * profile_xi(p, r, z);
}

ParticleSet init_particles(const ProfileSpec& profile, Dimension d, std::size_t n_particles,
                           double delta) {
  profile.validate();
  if (n_particles < 1) throw ConfigError("n_particles", "must be >= 1");
  if (!(delta >= 0.0)) throw ConfigError("delta", "must be >= 0");
  const auto centers = ring_centers(profile);
  const std::size_t budget = n_particles / centers.size();
  if (budget < 1) throw ConfigError("n_particles", "too few particles for a ring pair");

  // Largest half-width k (odd side 2k+1) whose clipped lattice fits the budget.
  long k = static_cast<long>(std::sqrt(static_cast<double>(budget) / 3.0)) + 2;
  while (k > 0 && clipped_count(k) > budget) --k;

  const double radius = kTruncation * profile.sigma;
  const double h = k > 0 ? radius / static_cast<double>(k) : 2.0 * radius;
  const int d2 = 2 * (d.value() - 2);

  ParticleSet out(d);
  out.blob.delta = delta;
  for (const auto& c : centers) {
    for (long i = -k; i <= k; ++i) {
      for (long j = -k; j <= k; ++j) {
        if (i * i + j * j > k * k) continue;
        const double dr = h * static_cast<double>(i);
        const double dz = h * static_cast<double>(j);
        const double r = profile.r0 + dr;
        const double xi = c.amplitude * std::exp(-(dr * dr + dz * dz) / (2.0 * profile.sigma * profile.sigma));
        out.push_back({r, c.z + dz}, xi, pow_half(r, d2) * h * h);
      }
    }
  }
  return out;
}

}  // namespace hdeuler
