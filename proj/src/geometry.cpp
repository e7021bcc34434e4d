#include "lswe/geometry.hpp"

namespace lswe {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

std::vector<std::vector<double>> square(int n) {
  return std::vector<std::vector<double>>(sz(n), std::vector<double>(sz(n), 0.0));
}

}  // namespace

MetricAtPoint metric(const SurfaceGauge& gauge) {
  const int n = gauge.dimension();
  MetricAtPoint m;
  m.covariant.assign(sz(n + 1), 1.0);
  m.contravariant.assign(sz(n + 1), 1.0);
  m.gamma = 1.0 / gauge.G;
  m.covariant[sz(n)] = -m.gamma;
  m.contravariant[sz(n)] = -gauge.G;
  return m;
}

ChristoffelSet christoffels(const SurfaceGauge& gauge) {
  const int n = gauge.dimension();
  const double G = gauge.G;
  ChristoffelSet c;
  c.i_nunu.resize(sz(n));
  c.nu_nuk.resize(sz(n));
  for (int i = 0; i < n; ++i) {
    c.i_nunu[sz(i)] = -gauge.script_H[sz(i)] / (G * G);
    c.nu_nuk[sz(i)] = -gauge.script_H[sz(i)] / G;
  }
  return c;
}

CurvatureReport curvature(const SurfaceGauge& gauge) {
  const int n = gauge.dimension();
  const double G = gauge.G;
  const double G2 = G * G;
  const double G3 = G2 * G;

  // First and second derivatives of 1/G, all in terms of script-H and its
  // Jacobian:  d_i(1/G) = -2 script_H_i / G^2,
  //            d2_il(1/G) = -2 dscript_H(i,l)/G^2 + 8 script_H_i script_H_l / G^3.
  std::vector<double> u(sz(n));
  for (int i = 0; i < n; ++i) u[sz(i)] = -2.0 * gauge.script_H[sz(i)] / G2;

  CurvatureReport r;
  r.riemann_i_nunu_l = square(n);
  r.riemann_nu_jk_nu = square(n);
  r.ricci = square(n);

  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      double dH = gauge.dscript_H(i, l);
      double u_il = -2.0 * dH / G2 + 8.0 * gauge.script_H[sz(i)] * gauge.script_H[sz(l)] / G3;
      r.riemann_i_nunu_l[sz(i)][sz(l)] = 0.5 * u_il - 0.25 * G * u[sz(i)] * u[sz(l)];

      // d_j(G d_k(1/G)) = -2 dscript_H(k,j)/G + 4 script_H_k script_H_j / G^2
      double dGu = -2.0 * dH / G + 4.0 * gauge.script_H[sz(i)] * gauge.script_H[sz(l)] / G2;
      r.riemann_nu_jk_nu[sz(i)][sz(l)] = -0.5 * dGu - 0.25 * G2 * u[sz(i)] * u[sz(l)];
      r.ricci[sz(i)][sz(l)] = r.riemann_nu_jk_nu[sz(i)][sz(l)];
    }
  }

  double ric_nunu = 0.0;
  for (int m = 0; m < n; ++m) {
    double u_mm = -2.0 * gauge.dscript_H(m, m) / G2 +
                  8.0 * gauge.script_H[sz(m)] * gauge.script_H[sz(m)] / G3;
    ric_nunu += 0.5 * u_mm - 0.25 * G * u[sz(m)] * u[sz(m)];
  }
  r.ricci_nunu = ric_nunu;

  double trace_spatial = 0.0;
  for (int j = 0; j < n; ++j) trace_spatial += r.ricci[sz(j)][sz(j)];
  r.scalar_R = trace_spatial - G * ric_nunu;

  double closed = 0.0;
  for (int j = 0; j < n; ++j) {
    double hj = gauge.script_H[sz(j)];
    closed += -6.0 * hj * hj / G2 + 2.0 * gauge.dscript_H(j, j) / G;
  }
  r.scalar_R_closed = closed;

  return r;
}

CurvatureReport curvature(const PotentialSurface& surface, std::span<const double> q) {
  return curvature(surface.gauge(q));
}

}  // namespace lswe
