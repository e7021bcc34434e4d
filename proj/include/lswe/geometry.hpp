#pragma once

#include <span>
#include <vector>

#include "lswe/surface.hpp"

namespace lswe {

/**
 * The diagonal metric attached to the level-set geometry at one point.
 * Index order: spatial slots 0..N-1, then the nu slot.
 *
 *   covariant:     diag(1, ..., 1, -1/G)
 *   contravariant: diag(1, ..., 1, -G)
 *   gamma = 1/G (the nu-nu entry up to sign)
 */
struct MetricAtPoint {
  std::vector<double> covariant;
  std::vector<double> contravariant;
  double gamma = 0.0;
};

MetricAtPoint metric(const SurfaceGauge& gauge);

/**
 * The only non-zero Christoffel symbols of the connection:
 *
 *   i_nunu[i] = Gamma^i_{nu nu}    = -script_H_i / G^2
 *   nu_nuk[k] = Gamma^nu_{nu k}    = -script_H_k / G   (symmetric in the lower pair)
 *
 * Every purely spatial symbol and every other mixed symbol vanishes.
 */
struct ChristoffelSet {
  std::vector<double> i_nunu;
  std::vector<double> nu_nuk;
};

ChristoffelSet christoffels(const SurfaceGauge& gauge);

/**
 * Curvature of the level-set metric.  Only two families of Riemann components
 * survive; everything else is zero by the structure of the connection.
 *
 *   riemann_i_nunu_l[i][l] = R_{i,nu,nu}^{l}
 *     = (1/2) d2_il(1/G) - (G/4) d_i(1/G) d_l(1/G)
 *   riemann_nu_jk_nu[j][k] = R_{nu,j,k}^{nu}
 *     = -(1/2) d_j(G d_k(1/G)) - (G^2/4) d_j(1/G) d_k(1/G)
 *
 * Ricci keeps the nu-nu entry and the spatial block; scalar_R contracts them
 * and scalar_R_closed is the independent closed form
 *   sum_j ( -6 script_H_j^2 / G^2 + 2 d_j(script_H_j) / G ),
 * kept separately so the two routes can be compared.
 */
struct CurvatureReport {
  std::vector<std::vector<double>> riemann_i_nunu_l;
  std::vector<std::vector<double>> riemann_nu_jk_nu;
  double ricci_nunu = 0.0;
  std::vector<std::vector<double>> ricci;
  double scalar_R = 0.0;
  double scalar_R_closed = 0.0;
};

CurvatureReport curvature(const SurfaceGauge& gauge);
CurvatureReport curvature(const PotentialSurface& surface, std::span<const double> q);

}  // namespace lswe
