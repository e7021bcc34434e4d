#include "lswe/surface.hpp"

#include <cassert>
#include <utility>

#include "lswe/errors.hpp"

namespace lswe {

double SurfaceGauge::dscript_H(int i, int l) const {
  double s = 0.0;
  for (int k = 0; k < dimension(); ++k) {
    s += hess(k, l) * hess(k, i) + grad(k) * third(k, i, l);
  }
  return s;
}

double SurfaceGauge::sum_dscript_H_diag() const {
  double s = 0.0;
  for (int i = 0; i < dimension(); ++i) s += dscript_H(i, i);
  return s;
}

double SurfaceGauge::sum_script_H_sq() const {
  double s = 0.0;
  for (double h : script_H) s += h * h;
  return s;
}

PotentialSurface::PotentialSurface(PotentialExpr expr, double stationary_eps)
    : expr_(std::move(expr)), stationary_eps_(stationary_eps) {}

PotentialSurface PotentialSurface::from_source(std::string_view source, int dimension,
                                               double stationary_eps) {
  return PotentialSurface(PotentialExpr::parse(source, dimension), stationary_eps);
}

SurfaceGauge PotentialSurface::gauge(std::span<const double> q, int order) const {
  const int n = dimension();
  SurfaceGauge out;
  out.point.assign(q.begin(), q.end());
  out.jet = derive(expr_, q, order);
  out.value = out.jet.value;

  double G = 0.0;
  for (int i = 0; i < n; ++i) {
    double gi = out.jet.grad(i);
    G += gi * gi;
  }
  out.G = G;
  if (G < stationary_eps_) {
    throw StationaryPointError("stationary point: squared gradient below threshold", out.point, G);
  }

  if (order >= 2) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += out.jet.hess(i, i);
    out.trace_H = tr;

    out.script_H.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += out.jet.grad(i) * out.jet.hess(i, k);
      out.script_H[static_cast<std::size_t>(k)] = s;
    }
    out.dG.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
      out.dG[static_cast<std::size_t>(k)] = 2.0 * out.script_H[static_cast<std::size_t>(k)];
    }

#ifndef NDEBUG
    for (int k = 0; k < n; ++k) {
      assert(out.dG[static_cast<std::size_t>(k)] ==
             2.0 * out.script_H[static_cast<std::size_t>(k)]);
    }
#endif
  }
  return out;
}

FirstOrderCoefficients first_order_coefficients(const SurfaceGauge& gauge) {
  const int n = gauge.dimension();
  FirstOrderCoefficients out;
  out.upper.reserve(static_cast<std::size_t>(n + 1));
  out.lower.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) {
    double a = gauge.script_H[static_cast<std::size_t>(i)] / gauge.G;
    out.upper.push_back(a);  // spatial block of the metric is the identity,
    out.lower.push_back(a);  // so upper and lower spatial slots coincide
  }
  out.upper.push_back(gauge.trace_H);
  out.lower.push_back(-gauge.trace_H / gauge.G);
  return out;
}

}  // namespace lswe
