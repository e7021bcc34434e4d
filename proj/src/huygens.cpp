#include "lswe/huygens.hpp"

#include <algorithm>
#include <cmath>

#include "lswe/geometry.hpp"

namespace lswe {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Condition1Result condition_one(const SurfaceGauge& gauge) {
  const int n = gauge.dimension();
  const double G = gauge.G;
  const double G2 = G * G;
  const double trH = gauge.trace_H;
  const double sum_dH = gauge.sum_dscript_H_diag();
  const double sum_H2 = gauge.sum_script_H_sq();
  const double ratio = static_cast<double>(n - 1) / static_cast<double>(n);

  Condition1Result r;
  r.terms.trace_term = trH * trH / (4.0 * G);
  r.terms.divergence_term = -(sum_dH / (2.0 * G)) * (1.0 + ratio);
  r.terms.script_term = (sum_H2 / (4.0 * G2)) * (5.0 + 6.0 * ratio);
  r.value = r.terms.trace_term + r.terms.divergence_term + r.terms.script_term;

  // Independent assembly: -(1/2) div A - (1/4) A.A - ((N-1)/4N) R.
  r.assembly.covariant_divergence = sum_H2 / G2 - sum_dH / (2.0 * G) + sum_H2 / (2.0 * G2);
  r.assembly.a_dot_a = -sum_H2 / (4.0 * G2) + trH * trH / (4.0 * G);
  r.assembly.curvature_piece = -(ratio / 4.0) * curvature(gauge).scalar_R;
  r.assembled =
      r.assembly.covariant_divergence + r.assembly.a_dot_a + r.assembly.curvature_piece;
  return r;
}

Condition1Result condition_one(const PotentialSurface& surface, std::span<const double> point) {
  return condition_one(surface.gauge(point));
}

Condition2Result condition_two(const PotentialSurface& surface, std::span<const double> point,
                               double fd_step) {
  const SurfaceGauge center = surface.gauge(point);
  const int n = center.dimension();
  const double G = center.G;

  // f(q) = -TrH(q)/G(q), sampled through order-2 gauges.
  auto f_at = [&](std::span<const double> q) {
    SurfaceGauge g = surface.gauge(q, 2);
    return -g.trace_H / g.G;
  };

  const double f0 = -center.trace_H / G;

  Condition2Result r;
  r.spatial.assign(sz(n), 0.0);  // cancels identically; see condition docs
  r.second_terms.assign(sz(n), 0.0);
  r.first_terms.assign(sz(n), 0.0);

  std::vector<double> q(point.begin(), point.end());
  for (int j = 0; j < n; ++j) {
    const double h = fd_step;
    const double qj = q[sz(j)];

    q[sz(j)] = qj + h;
    double fp = f_at(q);
    q[sz(j)] = qj - h;
    double fm = f_at(q);
    q[sz(j)] = qj + 0.5 * h;
    double fph = f_at(q);
    q[sz(j)] = qj - 0.5 * h;
    double fmh = f_at(q);
    q[sz(j)] = qj;

    double d1_h = (fp - fm) / (2.0 * h);
    double d1_h2 = (fph - fmh) / h;
    double d1 = (4.0 * d1_h2 - d1_h) / 3.0;

    double d2_h = (fp - 2.0 * f0 + fm) / (h * h);
    double d2_h2 = (fph - 2.0 * f0 + fmh) / (0.25 * h * h);
    double d2 = (4.0 * d2_h2 - d2_h) / 3.0;

    r.second_terms[sz(j)] = 0.5 * d2;
    r.first_terms[sz(j)] = 0.5 * (center.script_H[sz(j)] / G) * d1;
    r.nu += r.second_terms[sz(j)] + r.first_terms[sz(j)];
  }
  return r;
}

HuygensReport huygens_report(const PotentialSurface& surface, std::span<const double> point,
                             double fd_step, double tol) {
  HuygensReport rep;
  rep.condition1 = condition_one(surface, point);
  rep.condition2 = condition_two(surface, point, fd_step);

  double scale1 = std::max({std::abs(rep.condition1.terms.trace_term),
                            std::abs(rep.condition1.terms.divergence_term),
                            std::abs(rep.condition1.terms.script_term)});
  rep.condition1_satisfied = std::abs(rep.condition1.value) < tol * std::max(1.0, scale1);

  double scale2 = 0.0;
  for (std::size_t j = 0; j < rep.condition2.second_terms.size(); ++j) {
    scale2 = std::max({scale2, std::abs(rep.condition2.second_terms[j]),
                       std::abs(rep.condition2.first_terms[j])});
  }
  rep.condition2_satisfied = std::abs(rep.condition2.nu) < tol * std::max(1.0, scale2);
  return rep;
}

}  // namespace lswe
