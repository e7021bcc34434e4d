#pragma once

#include <span>
#include <vector>

#include "lswe/expr.hpp"
#include "lswe/taylor.hpp"

namespace lswe {

/**
 * Everything the wave operator needs to know about the potential at one point:
 *
 *   value    V(q)
 *   jet      gradient g, Hessian H and third-derivative tensor of V
 *   G        squared gradient, sum_i g_i^2   (never below the stationary threshold)
 *   trace_H  Laplacian of V, sum_i H_ii
 *   script_H script-H_k = sum_i g_i H_ik, equal to dG_k / 2
 *   dG       gradient of G
 */
struct SurfaceGauge {
  std::vector<double> point;
  double value = 0.0;
  double G = 0.0;
  double trace_H = 0.0;
  std::vector<double> script_H;
  std::vector<double> dG;
  TaylorJet jet;

  int dimension() const { return jet.dimension; }
  double grad(int i) const { return jet.grad(i); }
  double hess(int i, int j) const { return jet.hess(i, j); }
  double third(int i, int j, int k) const { return jet.third_at(i, j, k); }

  /**
   * d(script-H_i)/dq_l = sum_k (H_kl H_ki + g_k T_kil); symmetric in (i, l).
   * Needs an order-3 gauge.
   */
  double dscript_H(int i, int l) const;

  /** sum_i d(script-H_i)/dq_i (needs order 3). */
  double sum_dscript_H_diag() const;

  /** sum_i script_H_i^2. */
  double sum_script_H_sq() const;
};

/**
 * A potential V over q1..qN with the machinery to gauge it pointwise.
 * Immutable and safe to share across threads.
 */
class PotentialSurface {
 public:
  explicit PotentialSurface(PotentialExpr expr, double stationary_eps = 1e-10);

  /** Convenience: parse `source` over `dimension` variables first. */
  static PotentialSurface from_source(std::string_view source, int dimension,
                                      double stationary_eps = 1e-10);

  const PotentialExpr& expr() const { return expr_; }
  int dimension() const { return expr_.dimension(); }
  double stationary_eps() const { return stationary_eps_; }

  /**
   * Gauge the surface at q with derivatives up to `order` (default 3, the only
   * order that fills the third tensor).  Throws StationaryPointError when
   * G < stationary_eps, because 1/G quantities stop making sense there.
   */
  SurfaceGauge gauge(std::span<const double> q, int order = 3) const;

  /** V(q) alone — no derivatives and no stationary-point guard. */
  double value(std::span<const double> q) const { return expr_.evaluate(q); }

 private:
  PotentialExpr expr_;
  double stationary_eps_;
};

/**
 * First-order coefficients A of the wave operator in covariant form,
 * index range 0..N-1 spatial plus slot N for the level coordinate nu:
 *
 *   upper: A^i = script_H_i / G,  A^nu = TrH
 *   lower: A_i = script_H_i / G,  A_nu = -TrH / G
 *
 * Lowering the nu slot with the metric (g_nunu = -1/G) maps upper to lower.
 */
struct FirstOrderCoefficients {
  std::vector<double> upper;
  std::vector<double> lower;
};

FirstOrderCoefficients first_order_coefficients(const SurfaceGauge& gauge);

}  // namespace lswe
