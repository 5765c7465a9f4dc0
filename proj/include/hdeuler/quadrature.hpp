#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "hdeuler/summation.hpp"

namespace hdeuler::quad {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK abscissae and weights).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double a;
  double b;
  double value;
  double error;
};

template <class Fn>
PanelEstimate gauss_kronrod_15(Fn&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 20000;
};

/// Globally adaptive Gauss-Kronrod integration over the partition given by
/// `breakpoints` (sorted, at least two entries). The panel with the largest
/// error estimate is bisected until the summed estimate satisfies
/// err <= max(abs_tol, rel_tol * |value|) or the panel budget is exhausted.
template <class Fn>
Result integrate(Fn&& f, std::span<const double> breakpoints, const Options& opt = {}) {
  auto by_error = [](const PanelEstimate& x, const PanelEstimate& y) { return x.error < y.error; };
  std::priority_queue<PanelEstimate, std::vector<PanelEstimate>, decltype(by_error)> heap(by_error);

  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    auto p = gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    value += p.value;
    error += p.error;
    heap.push(p);
  }

  std::size_t panels = heap.size();
  auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
  while (!done() && panels < opt.max_panels) {
    const PanelEstimate worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel at roundoff width
    heap.pop();
    const auto left = gauss_kronrod_15(f, worst.a, mid);
    const auto right = gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum from scratch: the running totals above drift after many updates.
  NeumaierSum v;
  NeumaierSum e;
  while (!heap.empty()) {
    v.add(heap.top().value);
    e.add(heap.top().error);
    heap.pop();
  }
  Result r;
  r.value = v.value();
  r.error = e.value();
  r.panels = panels;
  r.converged = r.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace hdeuler::quad
