#pragma once

#include <span>
#include <vector>

#include "lswe/surface.hpp"

namespace lswe {

/** The three summands of the closed-form first condition. */
struct Condition1Terms {
  double trace_term = 0.0;       //  (1/4G) (TrH)^2
  double divergence_term = 0.0;  // -(1/2G) (sum_i d_i script_H_i) (1 + (N-1)/N)
  double script_term = 0.0;      //  (1/4G^2) (sum_i script_H_i^2) (5 + 6(N-1)/N)
};

/** Pieces of the direct assembly: C - (1/2) div A - (1/4) A.A - ((N-1)/4N) R with C = 0. */
struct Condition1Assembly {
  double covariant_divergence = 0.0;  // -(1/2) sum_I nabla_I A^I
  double a_dot_a = 0.0;               // -(1/4) sum_I A_I A^I
  double curvature_piece = 0.0;       // -((N-1)/4N) scalar_R
};

struct Condition1Result {
  double value = 0.0;  // closed form; equals the sum of `terms`
  Condition1Terms terms;
  Condition1Assembly assembly;
  double assembled = 0.0;  // sum of the assembly pieces, computed independently
};

struct Condition2Result {
  std::vector<double> spatial;  // div^J K_{iJ}; identically zero by cancellation
  double nu = 0.0;              // div^J K_{nu J}
  // Per-coordinate pieces of nu: nu = sum_j (second_terms[j] + first_terms[j]).
  std::vector<double> second_terms;  // (1/2) d2_j f,  f = -TrH/G
  std::vector<double> first_terms;   // (1/2) (script_H_j / G) d_j f
};

/**
 * First necessary condition for a strong Huygens principle: the scalar that a
 * Huygens operator would have to cancel.  Returns the closed form together
 * with its term breakdown and an independently assembled value (covariant
 * divergence + A.A + curvature), which must agree with the closed form.
 */
Condition1Result condition_one(const SurfaceGauge& gauge);
Condition1Result condition_one(const PotentialSurface& surface, std::span<const double> point);

/**
 * Second necessary condition, the covariant divergence of the K tensor.  The
 * spatial components cancel identically and are returned as exact zeros; the
 * nu component is
 *     sum_j (1/2) (d2_j + (script_H_j / G) d_j) (-TrH / G),
 * with the derivatives of TrH/G taken by central differences of gauges at
 * step `fd_step`, Richardson-extrapolated once.
 */
Condition2Result condition_two(const PotentialSurface& surface, std::span<const double> point,
                               double fd_step = 1e-4);

struct HuygensReport {
  Condition1Result condition1;
  Condition2Result condition2;
  bool condition1_satisfied = false;
  bool condition2_satisfied = false;
};

/**
 * Both conditions at one point.  "Satisfied" means the residual magnitude is
 * below tol * max(1, scale of its terms).
 */
HuygensReport huygens_report(const PotentialSurface& surface, std::span<const double> point,
                             double fd_step = 1e-4, double tol = 1e-9);

}  // namespace lswe
