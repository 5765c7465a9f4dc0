#pragma once

// Norms, products and growth envelopes of the a-priori estimates, evaluated
// on particle states and diagnostic time series.
//
// Integrals over R^d are reduced to the half-plane with
//   int_{R^d} f dx = |S^{d-2}| int int f r^{d-2} dr dz,
// so for a particle set  ||r^k omega||_{L^1(R^d)} = |S^{d-2}| sum_i |xi_i| r_i^{d-2+k} mu_i.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hdeuler/induction.hpp"
#include "hdeuler/particles.hpp"

namespace hdeuler {

/// One time sample of the monitored quantities.
struct DiagnosticsRecord {
  double t = 0.0;
  double omega_sup = 0.0;          // ||omega||_inf
  double ur_sup = 0.0;             // ||u^r||_inf (particles + probe grid)
  double S = 0.0;                  // running max support radius
  double R = 1.0;                  // 1 + int_0^t ||u^r||_inf
  double xi_l1 = 0.0;
  double xi_l2 = 0.0;
  double xi_linf = 0.0;
  double r_omega_l1 = 0.0;         // ||r omega||_1
  double rd2_omega_l1 = 0.0;       // ||r^{d-2} omega||_1
  double omega_over_rd2_l1 = 0.0;  // ||omega / r^{d-2}||_1 = ||xi||_1
  double angular_impulse = 0.0;    // int r omega dx (signed)
  double fs_product = 0.0;
  double distortion = 1.0;
};

/// ||r^k omega||_{L^1(R^d)}; requires k >= -(d-2).
double weighted_L1(const ParticleSet& particles, int k);

double xi_l1(const ParticleSet& particles);
double xi_l2(const ParticleSet& particles);
double xi_linf(const ParticleSet& particles);
double omega_linf(const ParticleSet& particles);
double angular_impulse(const ParticleSet& particles);

/// Largest r over particles with xi != 0 (0 for an empty support).
double support_radius(const ParticleSet& particles);

/// Max over particles of nearest-neighbour distance divided by the min.
double distortion(const ParticleSet& particles);

/// ||r^{d-2} omega||_1^{1/4} ||xi||_1^{1/4} ||xi||_inf^{1/2}; DomainError on a zero field.
double feng_sverak_product(const ParticleSet& particles);

struct SupOptions {
  std::size_t probe_resolution = 32;
  InductionOptions induction;
};

/// Probe nodes: a resolution x resolution grid over the bounding box of the support.
std::vector<HalfPlanePoint> probe_grid(const ParticleSet& particles, std::size_t resolution);

/// Lower estimate of ||u^r||_inf: max over particle locations and probe nodes.
double radial_velocity_sup(const KernelEvaluator& kernel, const ParticleSet& particles,
                           BlobParameter blob, const SupOptions& options = {});

/// radial_velocity_sup / feng_sverak_product, using the particles' own blob.
double feng_sverak_ratio(const KernelEvaluator& kernel, const ParticleSet& particles,
                         const SupOptions& options = {});

enum class EnvelopeKind { thm1_exponential, thm2_polynomial, thm2_exponential_d7, support_exponential };

std::string to_string(EnvelopeKind kind);

/// Theoretical upper-bound curve. Constants by kind:
///   thm1_exponential     C1 e^{2 C0 t}          {"C0", "C1"}
///   thm2_polynomial      C2 (1+t)^{4(d-2)/(7-d)} {"C2"}, d in {4, 5, 6}
///   thm2_exponential_d7  C3 e^{C4 t}            {"C3", "C4"}, d = 7
///   support_exponential  S0 e^{C t}             {"S0", "C"}
struct GrowthEnvelope {
  EnvelopeKind kind;
  std::map<std::string, double> constants;
  Dimension d;
};

/// Throws DomainError on a kind/dimension mismatch, a missing or
/// non-positive constant, or t < 0.
double envelope_value(const GrowthEnvelope& env, double t);

/// 4(d-2)/(7-d), defined for d <= 6.
double polynomial_growth_exponent(Dimension d);

/// Exponential vorticity envelope (d = 4) from the initial sample:
///   C1 = ||xi_0||_inf + ||omega_0||_inf,
///   C0 = C_cal (||xi_0||_1 + ||r^2 omega_0||_1)^{1/4} ||xi_0||_1^{1/4} ||xi_0||_inf^{1/2}.
GrowthEnvelope theorem1_envelope(const DiagnosticsRecord& init, double c_cal);

/// C = C_cal ||xi_0||_1^{1/2} ||xi_0||_inf^{1/2} S0^{(d-4)/2}.
double support_rate_constant(const DiagnosticsRecord& init, Dimension d, double c_cal);

GrowthEnvelope support_envelope(const DiagnosticsRecord& init, Dimension d, double c);

enum class SeriesQuantity { omega_sup, support };

double quantity(const DiagnosticsRecord& rec, SeriesQuantity q);

/// Polynomial growth envelope for one-signed data, with constants from integrating
/// S' <= K S^{(d-3)/4}, K = C_cal ||r omega_0||_1^{1/4} ||xi_0||_1^{1/4} ||xi_0||_inf^{1/2}.
/// With a = (7-d)/4 this gives S <= max(S0^a, aK)^{1/a} (1+t)^{1/a}, and
/// ||omega||_inf <= ||xi_0||_inf S^{d-2}. Both are reported against the
/// exponent 4(d-2)/(7-d) >= 1/a; d = 7 gives the exponential form.
GrowthEnvelope theorem2_envelope_calibrated(const DiagnosticsRecord& init, Dimension d,
                                            double c_cal,
                                            SeriesQuantity q = SeriesQuantity::omega_sup);

/// Polynomial growth envelope with its constant fitted to the samples with
/// t <= fit_fraction * t_last; later samples are then out-of-sample checks.
GrowthEnvelope theorem2_envelope_fitted(std::span<const DiagnosticsRecord> series, Dimension d,
                                        SeriesQuantity q, double fit_fraction = 0.5);

struct CheckSample {
  double t;
  std::string quantity;
  double value;
  double bound;
  bool pass() const { return value <= bound; }
  double margin() const;  // bound / value (infinite for value <= 0)
};

struct CheckReport {
  std::string name;
  std::vector<CheckSample> samples;

  bool passed() const;
  double min_margin() const;
};

/// ||omega(t)||_inf <= (||xi_0||_inf + ||omega_0||_inf) R^2 and
/// ||r^2 omega(t)||_1 <= (||xi_0||_1 + ||r^2 omega_0||_1) R^4 at every sample (d = 4).
CheckReport lemma24_check(std::span<const DiagnosticsRecord> series, const DiagnosticsRecord& init,
                          Dimension d);

/// quantity(t) <= envelope_value(env, t) at every sample.
CheckReport envelope_check(std::span<const DiagnosticsRecord> series, const GrowthEnvelope& env,
                           SeriesQuantity q);

/// S(t) <= S(0) e^{C t} at every sample.
CheckReport support_envelope_check(std::span<const DiagnosticsRecord> series, Dimension d, double c);

/// One envelope evaluated along a series, as written by the envelopes command.
struct EnvelopeColumn {
  std::string name;      // column name in the output CSV
  std::string quantity;  // series column it bounds
  std::string kind;
  std::map<std::string, double> constants;
  std::vector<double> bound;
  std::vector<bool> pass;
  bool passed = true;
  double min_margin = 0.0;
};

/// Every envelope applicable in dimension d:
///   d = 4: lemma24_omega, lemma24_rd2, thm1_omega;
///   all d: support_S;
///   d <= 7: thm2_omega and thm2_S (constants calibrated or fitted).
std::vector<EnvelopeColumn> envelope_columns(std::span<const DiagnosticsRecord> series, Dimension d,
                                             double c_cal, bool fitted);

/// Nonnegative samples f_ij at the centers of a uniform nx x ny cell grid.
struct GriddedField {
  double x_min = 0.0;
  double y_min = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;  // row-major in x: values[i * ny + j]
};

/// |int f(x) / |x - x0| dx| / (||f||_1^{1/2} ||f||_inf^{1/2}), with f piecewise
/// constant on cells and each cell's kernel integral taken in closed form.
double kernelf_inequality_check(const GriddedField& f, HalfPlanePoint x0);

/// r^{d/2-2} |z F_d'(((r-1)^2 + z^2)/r)|.
double urintbd_quantity(const KernelEvaluator& kernel, double r, double z);

struct RegionBoundReport {
  double inner_sup = 0.0;  // sup over I1 of quantity * rho
  HalfPlanePoint inner_argmax;
  double outer_sup = 0.0;  // sup over I2 of quantity * rho^2
  HalfPlanePoint outer_argmax;
};

/// I1 = [1/2, 2] x [-1, 1], I2 its complement; rho = |(r, z) - (1, 0)|.
RegionBoundReport urintbd_region_check(const KernelEvaluator& kernel,
                                       std::span<const HalfPlanePoint> grid);

/// n x n points clustered geometrically toward (1, 0) and reaching out to
/// `extent`; avoids the axis and the point (1, 0).
std::vector<HalfPlanePoint> log_biased_grid(std::size_t n, double rho_min = 1e-3,
                                            double extent = 1e3);

}  // namespace hdeuler
