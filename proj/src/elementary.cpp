#include "lswe/elementary.hpp"

#include <cmath>

#include "lswe/errors.hpp"

namespace lswe {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double elementary_prefactor() { return 1.0 / (std::sqrt(2.0) * kPi); }

ElementaryPart singular_part(const PotentialSurface& surface, const GeodesicPath& path) {
  if (path.samples.empty()) {
    throw ValidationError("singular_part needs a non-empty path");
  }
  if (path.truncated) {
    throw ValidationError("singular_part needs a complete (non-truncated) path");
  }

  const GeodesicState& first = path.samples.front();
  const GeodesicState& last = path.samples.back();

  ElementaryPart out;
  out.base_q = first.q;
  out.base_nu = first.nu;
  out.end_q = last.q;
  out.end_nu = last.nu;

  // Integrand f(s) = (TrH/G) nu_dot sampled at the path nodes.
  double integral = 0.0;
  double prev_f = 0.0;
  double prev_s = 0.0;
  double G_first = 0.0;
  double G_last = 0.0;
  for (std::size_t k = 0; k < path.samples.size(); ++k) {
    const GeodesicState& st = path.samples[k];
    SurfaceGauge g = surface.gauge(st.q, 2);
    double f = (g.trace_H / g.G) * st.nu_dot;
    if (k == 0) {
      G_first = g.G;
    } else {
      integral += 0.5 * (prev_f + f) * (st.s - prev_s);
    }
    if (k + 1 == path.samples.size()) G_last = g.G;
    prev_f = f;
    prev_s = st.s;
  }
  if (path.samples.size() == 1) G_last = G_first;

  out.path_integral = integral;
  double ratio = G_last / G_first;
  out.discriminant_factor = std::pow(ratio, 0.25);
  out.U = elementary_prefactor() * std::sqrt(ratio) * std::exp(-0.5 * integral);
  return out;
}

namespace {

/** U at one stencil node, by shooting from the base and transporting along. */
double stencil_U(const PotentialSurface& surface, std::span<const double> base_q, double base_nu,
                 const std::vector<double>& node_q, double node_nu) {
  GeodesicPath path = connect(surface, base_q, base_nu, node_q, node_nu,
                              /*max_iters=*/50, /*tol=*/1e-12, /*steps=*/100);
  return singular_part(surface, path).U;
}

struct StencilData {
  double U[5][5];    // U[a+2][b+2] at (q + a h, nu + b h)
  double a_q[5];     // A^q = script_H/G at q + a h
  double G = 0.0;
  double script_H = 0.0;
  double trace_H = 0.0;
};

StencilData build_stencil(const PotentialSurface& surface, std::span<const double> base_q,
                          double base_nu, std::span<const double> sample_q, double sample_nu,
                          double h) {
  if (surface.dimension() != 1) {
    throw ValidationError("adjoint_residual is defined for one-dimensional surfaces");
  }
  if (h <= 0.0) throw ValidationError("stencil_step must be positive");

  StencilData d;
  SurfaceGauge center = surface.gauge(sample_q, 2);
  d.G = center.G;
  d.script_H = center.script_H[0];
  d.trace_H = center.trace_H;

  std::vector<double> node(1);
  for (int a = -2; a <= 2; ++a) {
    node[0] = sample_q[0] + static_cast<double>(a) * h;
    SurfaceGauge g = surface.gauge(node, 2);
    d.a_q[a + 2] = g.script_H[0] / g.G;
    for (int b = -2; b <= 2; ++b) {
      double nu = sample_nu + static_cast<double>(b) * h;
      d.U[a + 2][b + 2] = stencil_U(surface, base_q, base_nu, node, nu);
    }
  }
  return d;
}

/** PU from the plus-shaped subset at offset scale m (m=1: step h, m=2: step 2h). */
double pu_from_stencil(const StencilData& d, double h, int m) {
  const double step = h * static_cast<double>(m);
  const double u0 = d.U[2][2];
  const double uxp = d.U[2 + m][2];
  const double uxm = d.U[2 - m][2];
  const double unp = d.U[2][2 + m];
  const double unm = d.U[2][2 - m];

  const double du_q = (uxp - uxm) / (2.0 * step);
  const double du_nu = (unp - unm) / (2.0 * step);
  const double d2u_q = (uxp - 2.0 * u0 + uxm) / (step * step);
  const double d2u_nu = (unp - 2.0 * u0 + unm) / (step * step);

  // d_q(A^q U) by the same central difference.
  const double daU = (d.a_q[2 + m] * uxp - d.a_q[2 - m] * uxm) / (2.0 * step);

  const double G = d.G;
  const double sH = d.script_H;
  return d2u_q - G * d2u_nu - (sH / G) * du_q - daU - d.trace_H * du_nu +
         (sH * sH) / (G * G) * u0;
}

}  // namespace

double adjoint_residual(const PotentialSurface& surface, std::span<const double> base_q,
                        double base_nu, std::span<const double> sample_q, double sample_nu,
                        double stencil_step) {
  StencilData d = build_stencil(surface, base_q, base_nu, sample_q, sample_nu, stencil_step);
  return pu_from_stencil(d, stencil_step, 1);
}

std::pair<double, double> adjoint_residual_pair(const PotentialSurface& surface,
                                                std::span<const double> base_q, double base_nu,
                                                std::span<const double> sample_q,
                                                double sample_nu, double stencil_step) {
  StencilData d = build_stencil(surface, base_q, base_nu, sample_q, sample_nu, stencil_step);
  return {pu_from_stencil(d, stencil_step, 1), pu_from_stencil(d, stencil_step, 2)};
}

}  // namespace lswe
