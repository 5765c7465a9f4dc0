#include "hdeuler/induction.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "hdeuler/summation.hpp"

namespace hdeuler {

namespace {

// Source data hoisted out of the pair loop. Zero-mass particles are dropped;
// they contribute exact zeros to every sum.
struct Sources {
  std::vector<double> r;
  std::vector<double> z;
  std::vector<double> inv_r;
  std::vector<double> a;     // m rb^{d/2-2}
  std::vector<double> b;     // m rb^{d/2-1}
  std::vector<double> axis;  // m rb^{d-1}
  std::vector<std::size_t> origin;
};

Sources gather(const ParticleSet& particles) {
  particles.validate();
  const int d = particles.d.value();
  Sources s;
  for (std::size_t j = 0; j < particles.size(); ++j) {
    const double m = particles.xi[j] * particles.mu[j];
    if (m == 0.0) continue;
    const double rb = particles.positions[j].r;
    const double root = pow_half(rb, d - 4);  // rb^{d/2-2}
    s.r.push_back(rb);
    s.z.push_back(particles.positions[j].z);
    s.inv_r.push_back(1.0 / rb);
    s.a.push_back(m * root);
    s.b.push_back(m * root * rb);
    s.axis.push_back(m * pow_half(rb, 2 * (d - 1)));
    s.origin.push_back(j);
  }
  return s;
}

void check_target(HalfPlanePoint t) {
  if (!std::isfinite(t.r) || !std::isfinite(t.z)) throw DomainError("target is not finite");
  if (t.r < 0.0) throw AxisError("target has r < 0");
}

void check_blob(BlobParameter blob) {
  if (!(blob.delta >= 0.0) || !std::isfinite(blob.delta)) {
    throw DomainError("blob delta must be finite and >= 0");
  }
}

// On the axis u^r = 0 by symmetry, and the large-s expansion of the kernel
// gives u^z(0, z) = c_d (d-1)(d-2) J_d sum_j m_j rb^{d-1} / (rb^2 + dz^2 + delta^2)^{d/2}.
double axis_uz(const KernelEvaluator& kernel, const Sources& src, double z, double delta2) {
  const int d = kernel.dimension().value();
  const double jd = wallis_integral(d - 3) - wallis_integral(d - 1);
  NeumaierSum sum;
  for (std::size_t j = 0; j < src.r.size(); ++j) {
    const double dz = z - src.z[j];
    const double rho2 = src.r[j] * src.r[j] + dz * dz + delta2;
    sum.add(src.axis[j] / pow_half(rho2, d));
  }
  return kernel.c_d() * (d - 1) * (d - 2) * jd * sum.value();
}

VelocitySample induce(const KernelEvaluator& kernel, const Sources& src, HalfPlanePoint t,
                      double delta2, double ur_sign) {
  if (t.r == 0.0) return {0.0, axis_uz(kernel, src, t.z, delta2)};
  const int d = kernel.dimension().value();
  const double p = kernel.dimension().half() - 1.0;
  const double inv_r = 1.0 / t.r;
  NeumaierSum ur;
  NeumaierSum uz;
  const std::size_t n = src.r.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double dr = t.r - src.r[j];
    const double dz = t.z - src.z[j];
    const double s = (dr * dr + dz * dz + delta2) * (inv_r * src.inv_r[j]);
    const KernelValues k = kernel.eval(s);
    ur.add(src.a[j] * dz * k.F_prime);
    uz.add(src.b[j] * (p * k.F + k.F_prime * (2.0 * dr * src.inv_r[j] - s)));
  }
  const double scale = kernel.c_d() / pow_half(t.r, d);
  return {-2.0 * scale * ur.value() * ur_sign, scale * uz.value()};
}

}  // namespace

double stream_function(const KernelEvaluator& kernel, const ParticleSet& particles,
                       HalfPlanePoint target, BlobParameter blob) {
  check_target(target);
  check_blob(blob);
  if (!(particles.d == kernel.dimension())) throw DomainError("kernel/particle dimension mismatch");
  const Sources src = gather(particles);
  if (target.r == 0.0) {
    if (blob.delta > 0.0) return 0.0;
    throw AxisError("stream function on the axis requires delta > 0");
  }
  const int d = kernel.dimension().value();
  const double delta2 = blob.delta * blob.delta;
  NeumaierSum sum;
  for (std::size_t j = 0; j < src.r.size(); ++j) {
    const double dr = target.r - src.r[j];
    const double dz = target.z - src.z[j];
    const double rr = target.r * src.r[j];
    const double s = (dr * dr + dz * dz + delta2) / rr;
    if (!(s > 0.0)) throw DomainError("stream function target coincides with a source at delta = 0");
    // m (r rb)^{d/2-1} = b rb^{-(d/2-1)} (r rb)^{d/2-1} = b r^{d/2-1}
    sum.add(src.b[j] * kernel.eval(s).F);
  }
  return kernel.c_d() * pow_half(target.r, d - 2) * sum.value();
}

VelocitySample velocity(const KernelEvaluator& kernel, const ParticleSet& particles,
                        HalfPlanePoint target, BlobParameter blob, const InductionOptions& options) {
  const HalfPlanePoint targets[] = {target};
  return velocity_field(kernel, particles, targets, blob, options).front();
}

std::vector<VelocitySample> velocity_field(const KernelEvaluator& kernel,
                                           const ParticleSet& particles,
                                           std::span<const HalfPlanePoint> targets,
                                           BlobParameter blob, const InductionOptions& options) {
  check_blob(blob);
  if (!(particles.d == kernel.dimension())) throw DomainError("kernel/particle dimension mismatch");
  for (const auto& t : targets) check_target(t);
  const Sources src = gather(particles);
  const double delta2 = blob.delta * blob.delta;

  std::vector<VelocitySample> out(targets.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = induce(kernel, src, targets[i], delta2, options.ur_sign);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.workers, 1)), 1,
                              std::max<std::size_t>(targets.size(), 1));
  if (workers == 1) {
    work(0, targets.size());
    return out;
  }
  const std::size_t chunk = (targets.size() + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(targets.size(), begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<VelocitySample> self_velocity(const KernelEvaluator& kernel,
                                          const ParticleSet& particles,
                                          const InductionOptions& options) {
  if (options.workers > 1) {
    return velocity_field(kernel, particles, particles.positions, particles.blob, options);
  }
  check_blob(particles.blob);
  if (!(particles.d == kernel.dimension())) throw DomainError("kernel/particle dimension mismatch");
  const Sources src = gather(particles);
  const double delta2 = particles.blob.delta * particles.blob.delta;
  const int d = kernel.dimension().value();
  const double p = kernel.dimension().half() - 1.0;
  const std::size_t n = src.r.size();

  // Row i adds its self term and then the pairs (i, j > i) to both ends.
  // Target k thus receives sources 0..n-1 in index order, exactly as in
  // `induce`, and each pair term is bitwise the same expression.
  std::vector<NeumaierSum> ur(n);
  std::vector<NeumaierSum> uz(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = src.r[i];
    const double zi = src.z[i];
    const double inv_ri = src.inv_r[i];
    {
      const double s = (0.0 + 0.0 + delta2) * (inv_ri * inv_ri);
      const KernelValues k = kernel.eval(s);
      ur[i].add(src.a[i] * 0.0 * k.F_prime);
      uz[i].add(src.b[i] * (p * k.F + k.F_prime * (2.0 * 0.0 * inv_ri - s)));
    }
    NeumaierSum ur_i = ur[i];
    NeumaierSum uz_i = uz[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dr = ri - src.r[j];
      const double dz = zi - src.z[j];
      const double s = (dr * dr + dz * dz + delta2) * (inv_ri * src.inv_r[j]);
      const KernelValues k = kernel.eval(s);
      const double pf = p * k.F;
      ur_i.add(src.a[j] * dz * k.F_prime);
      uz_i.add(src.b[j] * (pf + k.F_prime * (2.0 * dr * src.inv_r[j] - s)));
      ur[j].add(src.a[i] * (-dz) * k.F_prime);
      uz[j].add(src.b[i] * (pf + k.F_prime * (2.0 * (-dr) * inv_ri - s)));
    }
    ur[i] = ur_i;
    uz[i] = uz_i;
  }

  std::vector<VelocitySample> out(particles.size());
  std::vector<bool> done(particles.size(), false);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = kernel.c_d() / pow_half(src.r[k], d);
    out[src.origin[k]] = {-2.0 * scale * ur[k].value() * options.ur_sign, scale * uz[k].value()};
    done[src.origin[k]] = true;
  }
  for (std::size_t k = 0; k < particles.size(); ++k) {
    if (!done[k]) out[k] = induce(kernel, src, particles.positions[k], delta2, options.ur_sign);
  }
  return out;
}

std::size_t GridSpec::nr() const {
  return static_cast<std::size_t>(std::floor((r_max - r_min) / h + 1e-9)) + 1;
}

std::size_t GridSpec::nz() const {
  return static_cast<std::size_t>(std::floor((z_max - z_min) / h + 1e-9)) + 1;
}

std::vector<HalfPlanePoint> GridSpec::nodes() const {
  std::vector<HalfPlanePoint> pts;
  pts.reserve(nr() * nz());
  for (std::size_t i = 0; i < nr(); ++i) {
    for (std::size_t j = 0; j < nz(); ++j) pts.push_back(node(i, j));
  }
  return pts;
}

namespace {

void check_grid(const GridSpec& g, BlobParameter blob) {
  if (!(g.h > 0.0) || !(g.r_max > g.r_min) || !(g.z_max > g.z_min)) {
    throw DomainError("grid must have h > 0 and a nonempty extent");
  }
  if (!(g.r_min > 0.0)) throw AxisError("grid must lie strictly inside r > 0");
  if (g.nr() < 3 || g.nz() < 3) throw DomainError("grid needs at least 3 nodes per direction");
  if (!(blob.delta > 0.0)) throw DomainError("field checks require delta > 0");
}

}  // namespace

namespace {

double divergence_of(const KernelEvaluator& kernel, const GridSpec& grid,
                     const std::vector<HalfPlanePoint>& nodes, const std::vector<VelocitySample>& u) {
  const int d = kernel.dimension().value();
  const std::size_t nr = grid.nr();
  const std::size_t nz = grid.nz();
  auto at = [nz](std::size_t i, std::size_t j) { return i * nz + j; };
  auto weight = [d](double r) { return pow_half(r, 2 * (d - 2)); };

  double scale = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    scale = std::max(scale, weight(nodes[k].r) * std::hypot(u[k].ur, u[k].uz));
  }
  if (scale == 0.0) return 0.0;

  double worst = 0.0;
  const double inv2h = 0.5 / grid.h;
  for (std::size_t i = 1; i + 1 < nr; ++i) {
    for (std::size_t j = 1; j + 1 < nz; ++j) {
      const double r = nodes[at(i, j)].r;
      const double dflux_r = (weight(nodes[at(i + 1, j)].r) * u[at(i + 1, j)].ur -
                              weight(nodes[at(i - 1, j)].r) * u[at(i - 1, j)].ur) *
                             inv2h;
      const double dflux_z = weight(r) * (u[at(i, j + 1)].uz - u[at(i, j - 1)].uz) * inv2h;
      worst = std::max(worst, std::abs(dflux_r + dflux_z));
    }
  }
  return worst / scale;
}

double curl_error_of(const GridSpec& grid, const std::vector<HalfPlanePoint>& nodes,
                     const std::vector<VelocitySample>& u,
                     const std::function<double(double, double)>& omega_exact) {
  const std::size_t nr = grid.nr();
  const std::size_t nz = grid.nz();
  auto at = [nz](std::size_t i, std::size_t j) { return i * nz + j; };

  double peak = 0.0;
  for (const auto& p : nodes) peak = std::max(peak, std::abs(omega_exact(p.r, p.z)));

  double worst = 0.0;
  const double inv2h = 0.5 / grid.h;
  for (std::size_t i = 1; i + 1 < nr; ++i) {
    for (std::size_t j = 1; j + 1 < nz; ++j) {
      const auto& p = nodes[at(i, j)];
      const double curl = (u[at(i, j + 1)].ur - u[at(i, j - 1)].ur) * inv2h -
                          (u[at(i + 1, j)].uz - u[at(i - 1, j)].uz) * inv2h;
      worst = std::max(worst, std::abs(curl - omega_exact(p.r, p.z)));
    }
  }
  return peak > 0.0 ? worst / peak : worst;
}

}  // namespace

double divergence_residual(const KernelEvaluator& kernel, const ParticleSet& particles,
                           const GridSpec& grid, BlobParameter blob,
                           const InductionOptions& options) {
  check_grid(grid, blob);
  const auto nodes = grid.nodes();
  return divergence_of(kernel, grid, nodes, velocity_field(kernel, particles, nodes, blob, options));
}

double curl_recovery_error(const KernelEvaluator& kernel, const ParticleSet& particles,
                           const GridSpec& grid, BlobParameter blob,
                           const std::function<double(double, double)>& omega_exact,
                           const InductionOptions& options) {
  check_grid(grid, blob);
  const auto nodes = grid.nodes();
  return curl_error_of(grid, nodes, velocity_field(kernel, particles, nodes, blob, options),
                       omega_exact);
}

FieldResiduals field_residuals(const KernelEvaluator& kernel, const ParticleSet& particles,
                               const GridSpec& grid, BlobParameter blob,
                               const std::function<double(double, double)>& omega_exact,
                               const InductionOptions& options) {
  check_grid(grid, blob);
  const auto nodes = grid.nodes();
  const auto u = velocity_field(kernel, particles, nodes, blob, options);
  return {divergence_of(kernel, grid, nodes, u), curl_error_of(grid, nodes, u, omega_exact)};
}

}  // namespace hdeuler
