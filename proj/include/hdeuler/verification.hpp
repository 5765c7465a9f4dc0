#pragma once

// Self-contained verification reports behind `verify-kernel` and
// `verify-estimates`. Each report carries a `checks` array of
// {name, value, limit, passed} and an overall `passed` flag.

#include <cstddef>

#include "json.hpp"

#include "hdeuler/estimates.hpp"

namespace hdeuler {

/// Kernel constants, bound suprema, tail fit, small-s and tail limits, and
/// (d = 4) agreement with the closed form on 200 log-spaced s in [1e-6, 1e6].
nlohmann::json verify_kernel_report(Dimension d);

/// Calibration sweep over `sweep` family members, scaling invariance of the
/// Feng-Sverak product and ratio, the disk oracle of the 1/|x| inequality,
/// random blob fields, and the region suprema of the radial-velocity integrand.
nlohmann::json verify_estimates_report(Dimension d, std::size_t sweep, int workers = 1);

/// F_4 and F_4' in closed form:
///   F_4 = (2+s)/4 ln(1+4/s) - 1,  F_4' = ln(1+4/s)/4 - (s+2)/(s(s+4)).
/// Large s switches to the series in u = 4/s to avoid cancellation.
KernelValues closed_form_F4(double s);

/// Indicator of the disk of radius rho about the origin, sampled at the
/// centres of square cells of side h covering [-1.1 rho, 1.1 rho]^2.
GriddedField disk_indicator(double rho, double h);

}  // namespace hdeuler
