#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "lswe/surface.hpp"
#include "lswe/waves.hpp"

namespace lswe {

/**
 * Uniform tensor grid for the nu-evolution solver (N = 1 or 2).
 * `cells` counts intervals per axis; dnu = 0 asks the solver to pick the
 * largest stable step (cfl_safety * dq_min * sqrt(min G)) that divides the nu
 * range evenly.
 */
struct Grid {
  std::vector<std::array<double, 2>> bounds;  // [lo, hi] per coordinate
  std::vector<int> cells;                     // intervals per coordinate
  double nu0 = 0.0;
  double nu1 = 1.0;
  double dnu = 0.0;
  double cfl_safety = 0.9;

  int dimension() const { return static_cast<int>(bounds.size()); }
  double dq(int d) const {
    return (bounds[static_cast<std::size_t>(d)][1] - bounds[static_cast<std::size_t>(d)][0]) /
           static_cast<double>(cells[static_cast<std::size_t>(d)]);
  }
  int points(int d) const { return cells[static_cast<std::size_t>(d)] + 1; }
};

/**
 * The field at one nu level, with its deviation from the analytic
 * superposition (L-infinity and volume-weighted L2) and the wake energy: the
 * L2 deviation from the matching single-front wave F(V + nu~), restricted to
 * grid points with |V(q) - nu| > 3 * pulse width.
 */
struct FieldSnapshot {
  double nu = 0.0;
  std::vector<double> values;  // row-major over the grid points
  double error_linf = 0.0;
  double error_l2 = 0.0;
  double wake_energy = 0.0;
};

struct IvpRun {
  Grid grid;
  double dnu = 0.0;  // the step actually used
  int nu_steps = 0;
  std::vector<FieldSnapshot> snapshots;
};

/**
 * Explicit second-order scheme for psi_nunu = (Lap psi + TrH psi_nu) / G with
 * initial data psi = F(V), psi_nu = D'(V) at nu0 and analytic Dirichlet
 * boundaries.  Snapshots are taken every `snapshot_stride` steps (0 = about
 * ten per run), always including the first and last level.
 *
 * Throws CflViolationError when dnu is explicitly set too large (or the
 * first-order term destabilizes it) and StationaryPointError when the grid
 * contains a point with G below the surface threshold.
 */
IvpRun solve_ivp(const PotentialSurface& surface, const Grid& grid, const WaveProfile& f,
                 const WaveProfile& d, int snapshot_stride = 0);

/**
 * Recompute the wake energy of a snapshot: L2 of (values - F(V + nu~)) over
 * the points with |V - nu| > 3 * width.  The profile must be a gaussian so
 * the width is defined.
 */
double wake_metric(const PotentialSurface& surface, const Grid& grid, const WaveProfile& f,
                   const FieldSnapshot& snapshot);

struct ConvergenceStudy {
  std::vector<double> dq;    // finest axis spacing per level
  std::vector<double> dnu;
  std::vector<double> error_linf;  // at the final nu level
  double order = 0.0;              // mean log2 ratio of successive errors
};

/**
 * Run solve_ivp on `refinements` grids, doubling every cell count each time
 * (dnu always auto-picked so it co-refines), and estimate the convergence
 * order from the final-level L-infinity errors.  Needs refinements >= 2.
 */
ConvergenceStudy convergence_study(const PotentialSurface& surface, const Grid& base,
                                   const WaveProfile& f, const WaveProfile& d, int refinements);

/** CSV export: header comments with nu/dq/dnu, then q1[,q2],value rows. */
void write_snapshot_csv(const Grid& grid, const FieldSnapshot& snapshot, std::ostream& out);

}  // namespace lswe
