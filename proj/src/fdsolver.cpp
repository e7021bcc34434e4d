#include "lswe/fdsolver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "lswe/errors.hpp"

namespace lswe {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

void validate_grid(const Grid& grid) {
  const int n = grid.dimension();
  if (n < 1 || n > 2) throw ValidationError("grid must be one- or two-dimensional");
  if (static_cast<int>(grid.cells.size()) != n) {
    throw ValidationError("grid cells/bounds dimension mismatch");
  }
  for (int d = 0; d < n; ++d) {
    if (grid.cells[sz(d)] < 4) throw ValidationError("grid needs at least 4 cells per axis");
    if (n == 2 && grid.cells[sz(d)] > 256) {
      throw ValidationError("two-dimensional runs are capped at 256 cells per axis");
    }
    if (!(grid.bounds[sz(d)][1] > grid.bounds[sz(d)][0])) {
      throw ValidationError("grid bounds must satisfy hi > lo");
    }
  }
  if (!(grid.nu1 > grid.nu0)) throw ValidationError("grid needs nu1 > nu0");
  if (!(grid.cfl_safety > 0.0 && grid.cfl_safety <= 1.0)) {
    throw ValidationError("cfl_safety must lie in (0, 1]");
  }
}

struct GridGeometry {
  int n = 1;
  std::vector<int> pts;      // points per axis
  std::vector<double> dq;
  std::size_t total = 0;
  std::vector<std::size_t> stride;

  explicit GridGeometry(const Grid& g) {
    n = g.dimension();
    pts.resize(sz(n));
    dq.resize(sz(n));
    stride.resize(sz(n));
    total = 1;
    for (int d = 0; d < n; ++d) {
      pts[sz(d)] = g.points(d);
      dq[sz(d)] = g.dq(d);
    }
    // Row-major: the last axis is contiguous.
    for (int d = n - 1; d >= 0; --d) {
      stride[sz(d)] = total;
      total *= sz(pts[sz(d)]);
    }
  }

  void coords(const Grid& g, std::size_t idx, double* out) const {
    for (int d = 0; d < n; ++d) {
      std::size_t i = (idx / stride[sz(d)]) % sz(pts[sz(d)]);
      out[d] = g.bounds[sz(d)][0] + static_cast<double>(i) * dq[sz(d)];
    }
  }

  bool on_boundary(std::size_t idx) const {
    for (int d = 0; d < n; ++d) {
      std::size_t i = (idx / stride[sz(d)]) % sz(pts[sz(d)]);
      if (i == 0 || i + 1 == sz(pts[sz(d)])) return true;
    }
    return false;
  }
};

/** Per-point surface data, gathered once. */
struct PointData {
  std::vector<double> V, G, trH;
};

PointData gather_points(const PotentialSurface& surface, const Grid& grid,
                        const GridGeometry& geo) {
  PointData p;
  p.V.resize(geo.total);
  p.G.resize(geo.total);
  p.trH.resize(geo.total);
  std::vector<double> q(sz(geo.n));
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    geo.coords(grid, idx, q.data());
    SurfaceGauge g;
    try {
      g = surface.gauge(q, 2);
    } catch (const StationaryPointError& e) {
      throw StationaryPointError("stationary point on grid: " + std::string(e.what()), e.point(),
                                 e.G());
    }
    p.V[idx] = g.value;
    p.G[idx] = g.G;
    p.trH[idx] = g.trace_H;
  }
  return p;
}

double analytic_value(const WaveProfile& f, const WaveProfile& d, double V, double nu_tilde) {
  return 0.5 * (f.value(V + nu_tilde) + f.value(V - nu_tilde) + d.value(V + nu_tilde) -
                d.value(V - nu_tilde));
}

double cell_volume(const GridGeometry& geo) {
  double vol = 1.0;
  for (int d = 0; d < geo.n; ++d) vol *= geo.dq[sz(d)];
  return vol;
}

FieldSnapshot make_snapshot(const PotentialSurface& surface, const Grid& grid,
                            const GridGeometry& geo, const PointData& pd, const WaveProfile& f,
                            const WaveProfile& d, const std::vector<double>& values, double nu) {
  FieldSnapshot snap;
  snap.nu = nu;
  snap.values = values;

  const double nu_tilde = nu - grid.nu0;
  double linf = 0.0;
  double sum2 = 0.0;
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    double err = values[idx] - analytic_value(f, d, pd.V[idx], nu_tilde);
    linf = std::max(linf, std::abs(err));
    sum2 += err * err;
  }
  snap.error_linf = linf;
  snap.error_l2 = std::sqrt(sum2 * cell_volume(geo));
  if (f.kind() == WaveProfile::Kind::gaussian) {
    snap.wake_energy = wake_metric(surface, grid, f, snap);
  }
  return snap;
}

}  // namespace

IvpRun solve_ivp(const PotentialSurface& surface, const Grid& grid, const WaveProfile& f,
                 const WaveProfile& d, int snapshot_stride) {
  validate_grid(grid);
  if (surface.dimension() != grid.dimension()) {
    throw ValidationError("surface and grid dimension mismatch");
  }

  GridGeometry geo(grid);
  PointData pd = gather_points(surface, grid, geo);

  const double G_min = *std::min_element(pd.G.begin(), pd.G.end());
  const double dq_min = *std::min_element(geo.dq.begin(), geo.dq.end());
  const double dnu_max = grid.cfl_safety * dq_min * std::sqrt(G_min);
  const double range = grid.nu1 - grid.nu0;

  double dnu = grid.dnu;
  int steps = 0;
  if (dnu <= 0.0) {
    double steps_needed = range / dnu_max;
    if (steps_needed > 1e7) throw ValidationError("nu range needs too many steps at this grid");
    steps = static_cast<int>(std::ceil(steps_needed - 1e-12));
    steps = std::max(steps, 1);
    dnu = range / static_cast<double>(steps);
  } else {
    if (dnu > dnu_max * (1.0 + 1e-12)) {
      throw CflViolationError("dnu violates the CFL bound cfl_safety * dq_min * sqrt(min G)");
    }
    double steps_f = range / dnu;
    steps = static_cast<int>(std::lround(steps_f));
    if (steps < 1 || std::abs(static_cast<double>(steps) * dnu - range) > 1e-9 * range) {
      throw ValidationError("dnu must divide the nu range evenly");
    }
  }

  // Denominator of the update; must stay positive wherever the stencil runs.
  std::vector<double> denom(geo.total);
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    denom[idx] = pd.G[idx] / (dnu * dnu) - pd.trH[idx] / (2.0 * dnu);
    if (!geo.on_boundary(idx) && !(denom[idx] > 0.0)) {
      throw CflViolationError("first-order term destabilizes this dnu; refine the step");
    }
  }

  if (snapshot_stride < 0) throw ValidationError("snapshot_stride must be >= 0");
  int stride = snapshot_stride;
  if (stride == 0) stride = std::max(1, steps / 10);

  IvpRun run;
  run.grid = grid;
  run.dnu = dnu;
  run.nu_steps = steps;

  auto laplacian = [&](const std::vector<double>& u, std::size_t idx) {
    double lap = 0.0;
    for (int dd = 0; dd < geo.n; ++dd) {
      std::size_t st = geo.stride[sz(dd)];
      lap += (u[idx + st] - 2.0 * u[idx] + u[idx - st]) / (geo.dq[sz(dd)] * geo.dq[sz(dd)]);
    }
    return lap;
  };

  // Level 0: psi = F(V).
  std::vector<double> prev(geo.total);
  for (std::size_t idx = 0; idx < geo.total; ++idx) prev[idx] = f.value(pd.V[idx]);
  run.snapshots.push_back(make_snapshot(surface, grid, geo, pd, f, d, prev, grid.nu0));

  if (steps == 0) return run;

  // Level 1: second-order Taylor start with psi_nu = D'(V) and psi_nunu from the PDE.
  std::vector<double> curr(geo.total);
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    if (geo.on_boundary(idx)) {
      curr[idx] = analytic_value(f, d, pd.V[idx], dnu);
    } else {
      double dprime = d.first(pd.V[idx]);
      double psi_nunu = (laplacian(prev, idx) + pd.trH[idx] * dprime) / pd.G[idx];
      curr[idx] = prev[idx] + dnu * dprime + 0.5 * dnu * dnu * psi_nunu;
    }
  }
  if (1 % stride == 0 && steps > 1) {
    run.snapshots.push_back(make_snapshot(surface, grid, geo, pd, f, d, curr, grid.nu0 + dnu));
  }

  std::vector<double> next(geo.total);
  for (int step = 2; step <= steps; ++step) {
    double nu = grid.nu0 + static_cast<double>(step) * dnu;
    double nu_tilde = nu - grid.nu0;
    for (std::size_t idx = 0; idx < geo.total; ++idx) {
      if (geo.on_boundary(idx)) {
        next[idx] = analytic_value(f, d, pd.V[idx], nu_tilde);
      } else {
        double rhs = laplacian(curr, idx) +
                     (pd.G[idx] / (dnu * dnu)) * (2.0 * curr[idx] - prev[idx]) -
                     (pd.trH[idx] / (2.0 * dnu)) * prev[idx];
        next[idx] = rhs / denom[idx];
      }
    }
    prev.swap(curr);
    curr.swap(next);
    if (step == steps || step % stride == 0) {
      run.snapshots.push_back(make_snapshot(surface, grid, geo, pd, f, d, curr, nu));
    }
  }

  // The start level made it in unconditionally; make sure a 1-step run still
  // reports its final level.
  if (steps == 1) {
    run.snapshots.push_back(make_snapshot(surface, grid, geo, pd, f, d, curr, grid.nu0 + dnu));
  }
  return run;
}

double wake_metric(const PotentialSurface& surface, const Grid& grid, const WaveProfile& f,
                   const FieldSnapshot& snapshot) {
  if (f.kind() != WaveProfile::Kind::gaussian) {
    throw ValidationError("wake_metric needs a gaussian pulse profile (width undefined otherwise)");
  }
  validate_grid(grid);
  GridGeometry geo(grid);
  if (snapshot.values.size() != geo.total) {
    throw ValidationError("snapshot does not match the grid");
  }

  const double width = f.width();
  const double nu_tilde = snapshot.nu - grid.nu0;
  std::vector<double> q(sz(geo.n));
  double sum2 = 0.0;
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    geo.coords(grid, idx, q.data());
    double V = surface.value(q);
    if (std::abs(V - snapshot.nu) > 3.0 * width) {
      double dev = snapshot.values[idx] - f.value(V + nu_tilde);
      sum2 += dev * dev;
    }
  }
  return std::sqrt(sum2 * cell_volume(geo));
}

ConvergenceStudy convergence_study(const PotentialSurface& surface, const Grid& base,
                                   const WaveProfile& f, const WaveProfile& d, int refinements) {
  if (refinements < 2) throw ValidationError("convergence_study needs refinements >= 2");
  ConvergenceStudy study;
  for (int r = 0; r < refinements; ++r) {
    Grid g = base;
    g.dnu = 0.0;  // co-refine the nu step through the CFL rule
    for (std::size_t dd = 0; dd < g.cells.size(); ++dd) g.cells[dd] = base.cells[dd] << r;
    IvpRun run = solve_ivp(surface, g, f, d, /*snapshot_stride=*/1 << 30);
    double dq_min = g.dq(0);
    for (int dd = 1; dd < g.dimension(); ++dd) dq_min = std::min(dq_min, g.dq(dd));
    study.dq.push_back(dq_min);
    study.dnu.push_back(run.dnu);
    study.error_linf.push_back(run.snapshots.back().error_linf);
  }
  double acc = 0.0;
  int cnt = 0;
  for (std::size_t r = 0; r + 1 < study.error_linf.size(); ++r) {
    double e0 = study.error_linf[r];
    double e1 = study.error_linf[r + 1];
    if (e0 > 0.0 && e1 > 0.0) {
      acc += std::log2(e0 / e1);
      ++cnt;
    }
  }
  study.order = cnt > 0 ? acc / static_cast<double>(cnt) : 0.0;
  return study;
}

void write_snapshot_csv(const Grid& grid, const FieldSnapshot& snapshot, std::ostream& out) {
  GridGeometry geo(grid);
  out << "# nu=" << fmt(snapshot.nu);
  for (int d = 0; d < geo.n; ++d) out << " dq" << (d + 1) << "=" << fmt(geo.dq[sz(d)]);
  out << " dnu=" << fmt(grid.dnu) << "\n";
  for (int d = 0; d < geo.n; ++d) out << "q" << (d + 1) << ",";
  out << "value\n";
  std::vector<double> q(sz(geo.n));
  for (std::size_t idx = 0; idx < geo.total; ++idx) {
    geo.coords(grid, idx, q.data());
    for (int d = 0; d < geo.n; ++d) out << fmt(q[sz(d)]) << ',';
    out << fmt(snapshot.values[idx]) << '\n';
  }
}

}  // namespace lswe
