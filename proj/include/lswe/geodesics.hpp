#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "lswe/surface.hpp"

namespace lswe {

/** One point on a geodesic: position (q, nu), tangent (q_dot, nu_dot), parameter s. */
struct GeodesicState {
  std::vector<double> q;
  double nu = 0.0;
  std::vector<double> q_dot;
  double nu_dot = 0.0;
  double s = 0.0;
};

enum class PathKind { steepest_ascent, hyperplane, general, shooting };

/**
 * An integrated geodesic.  D is the conserved quantity
 *   D = sum_k (q_dot_k)^2 - (nu_dot)^2 / G,
 * recorded from the initial state; conserved_residuals tracks its drift per
 * sample.  `truncated` is set when integration stopped early at a stationary
 * region and the path holds only the part before the stop.
 */
struct GeodesicPath {
  std::vector<GeodesicState> samples;
  std::vector<double> conserved_residuals;
  double D = 0.0;
  PathKind kind = PathKind::general;
  bool truncated = false;

  /** Parameter span covered by the samples. */
  double total_s() const {
    return samples.empty() ? 0.0 : samples.back().s - samples.front().s;
  }
};

/**
 * Fixed-step classical Runge-Kutta integration of the geodesic system
 *   qddot_i  = (script_H_i / G^2) nu_dot^2
 *   nuddot   = (2/G) nu_dot sum_j q_dot_j script_H_j
 * over the given parameter length.  A stationary point mid-path truncates the
 * result (flag set); a stationary initial point throws.
 */
GeodesicPath integrate_geodesic(const PotentialSurface& surface, const GeodesicState& initial,
                                double length, double step);

/**
 * The steepest-ascent line dq/ds = grad V, dnu/ds = G: a null geodesic
 * (D = 0).  Started at nu0 = V(q0) it stays on the surface V(q(s)) = nu(s).
 */
GeodesicPath steepest_ascent(const PotentialSurface& surface, std::span<const double> q0,
                             double nu0, double length, double step);

/**
 * The straight segment from q0 to q1 inside the hyperplane nu = const, which
 * is a geodesic for every surface.  Parametrized over s in [0, 1] with the
 * constant tangent (q1 - q0, 0).
 */
GeodesicPath hyperplane_path(const PotentialSurface& surface, std::span<const double> q0,
                             std::span<const double> q1, double nu, int steps);

/** sum_k (q_dot_k)^2 - (nu_dot)^2 / G at one state. */
double conserved_quantity(const SurfaceGauge& gauge, const GeodesicState& state);

/**
 * Arclength sqrt(D) * (parameter span).  Null paths give zero; a path with
 * D < -1e-10 raises TimelikePathError (distance is defined for D >= 0 only).
 */
double geodesic_distance(const GeodesicPath& path);

/**
 * Local quadratic form of the world function around p0:
 *   Lambda = |q - q0|^2 - (nu - nu0)^2 / G(q0).
 * Exact to all orders when G is constant; otherwise valid for small
 * separations.
 */
double world_function_local(const PotentialSurface& surface, std::span<const double> q0,
                            double nu0, std::span<const double> q, double nu);

/**
 * Boundary-value geodesic between p0 and p1 by damped-Newton shooting on the
 * initial velocity (Jacobian by forward differences, step halving with floor
 * 2^-10).  `tol` bounds the endpoint mismatch per coordinate.
 */
GeodesicPath connect(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                     std::span<const double> q1, double nu1, int max_iters = 50,
                     double tol = 1e-8, int steps = 100);

/** Global world function: square of the geodesic distance delivered by connect. */
double world_function(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                      std::span<const double> q1, double nu1);

/** CSV export: s, q1..qN, nu, qdot1..qdotN, nudot, D_residual. */
void write_path_csv(const GeodesicPath& path, std::ostream& out);

}  // namespace lswe
