#pragma once

#include <span>
#include <vector>

#include "lswe/geodesics.hpp"
#include "lswe/surface.hpp"

namespace lswe {

/**
 * Singular part of the elementary solution transported along a connecting
 * geodesic from base to endpoint:
 *
 *   U = (1 / (sqrt(2) pi)) (G / G0)^{1/2} exp(-(1/2) path_integral),
 *   path_integral = integral of (TrH / G) dnu along the path.
 *
 * discriminant_factor is (G / G0)^{1/4}; it equals one at coincidence.
 */
struct ElementaryPart {
  std::vector<double> base_q;
  double base_nu = 0.0;
  std::vector<double> end_q;
  double end_nu = 0.0;
  double discriminant_factor = 1.0;
  double path_integral = 0.0;
  double U = 0.0;
};

/** Prefactor 1 / (sqrt(2) pi). */
double elementary_prefactor();

/**
 * Evaluate the singular part over `path` (trapezoid rule for the dnu
 * integral, dnu = nu_dot ds between samples).  The path must have at least
 * one sample and stay clear of stationary points.
 */
ElementaryPart singular_part(const PotentialSurface& surface, const GeodesicPath& path);

/**
 * Residual of the adjoint operator applied to U, at `sample` relative to
 * `base`, for one-dimensional surfaces:
 *
 *   PU = d2_q U - G d2_nu U - (script_H/G) d_q U
 *        - d_q(A^q U) - TrH d_nu U + (script_H^2/G^2) U
 *
 * U is built on a 5x5 stencil of spacing `stencil_step` around the sample by
 * shooting a geodesic from the base to every node; derivatives are central
 * differences.  The wave theory predicts PU != 0 away from flat surfaces.
 */
double adjoint_residual(const PotentialSurface& surface, std::span<const double> base_q,
                        double base_nu, std::span<const double> sample_q, double sample_nu,
                        double stencil_step = 1e-3);

/**
 * Same computation returning the step-h estimate and the step-2h estimate
 * taken from the same 5x5 stencil (handy for observing the O(h^2) behaviour
 * without extra shooting).
 */
std::pair<double, double> adjoint_residual_pair(const PotentialSurface& surface,
                                                std::span<const double> base_q, double base_nu,
                                                std::span<const double> sample_q,
                                                double sample_nu, double stencil_step = 1e-3);

}  // namespace lswe
