#include "lswe/geodesics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>

#include "lswe/errors.hpp"

namespace lswe {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

/** Flat phase-space vector (q, nu, q_dot, nu_dot) used by the integrators. */
using Phase = std::vector<double>;

Phase to_phase(const GeodesicState& st) {
  const int n = static_cast<int>(st.q.size());
  Phase y(sz(2 * n + 2));
  for (int i = 0; i < n; ++i) y[sz(i)] = st.q[sz(i)];
  y[sz(n)] = st.nu;
  for (int i = 0; i < n; ++i) y[sz(n + 1 + i)] = st.q_dot[sz(i)];
  y[sz(2 * n + 1)] = st.nu_dot;
  return y;
}

GeodesicState to_state(const Phase& y, int n, double s) {
  GeodesicState st;
  st.q.assign(y.begin(), y.begin() + n);
  st.nu = y[sz(n)];
  st.q_dot.assign(y.begin() + n + 1, y.begin() + 2 * n + 1);
  st.nu_dot = y[sz(2 * n + 1)];
  st.s = s;
  return st;
}

/** Right-hand side of the geodesic system. */
Phase geodesic_rhs(const PotentialSurface& surface, const Phase& y, int n) {
  std::span<const double> q(y.data(), sz(n));
  SurfaceGauge g = surface.gauge(q, 2);
  const double G = g.G;
  const double nu_dot = y[sz(2 * n + 1)];

  Phase dy(y.size());
  for (int i = 0; i < n; ++i) dy[sz(i)] = y[sz(n + 1 + i)];
  dy[sz(n)] = nu_dot;
  for (int i = 0; i < n; ++i) {
    dy[sz(n + 1 + i)] = g.script_H[sz(i)] / (G * G) * nu_dot * nu_dot;
  }
  double hdot = 0.0;
  for (int j = 0; j < n; ++j) hdot += y[sz(n + 1 + j)] * g.script_H[sz(j)];
  dy[sz(2 * n + 1)] = (2.0 / G) * nu_dot * hdot;
  return dy;
}

/** One classical RK4 step of size h; throws StationaryPointError from the gauge. */
template <typename Rhs>
Phase rk4_step(const Phase& y, double h, Rhs&& rhs) {
  Phase k1 = rhs(y);
  Phase tmp(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  Phase k2 = rhs(tmp);
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  Phase k3 = rhs(tmp);
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
  Phase k4 = rhs(tmp);
  Phase out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

double residual_at(const PotentialSurface& surface, const GeodesicState& st, double D) {
  SurfaceGauge g = surface.gauge(st.q, 1);
  double v = 0.0;
  for (double qd : st.q_dot) v += qd * qd;
  return v - st.nu_dot * st.nu_dot / g.G - D;
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

double conserved_quantity(const SurfaceGauge& gauge, const GeodesicState& state) {
  double v = 0.0;
  for (double qd : state.q_dot) v += qd * qd;
  return v - state.nu_dot * state.nu_dot / gauge.G;
}

GeodesicPath integrate_geodesic(const PotentialSurface& surface, const GeodesicState& initial,
                                double length, double step) {
  if (step <= 0.0 || length < 0.0) {
    throw ValidationError("integrate_geodesic needs step > 0 and length >= 0");
  }
  const int n = surface.dimension();
  if (static_cast<int>(initial.q.size()) != n || static_cast<int>(initial.q_dot.size()) != n) {
    throw ValidationError("initial state dimension mismatch");
  }

  GeodesicPath path;
  path.kind = PathKind::general;
  path.D = conserved_quantity(surface.gauge(initial.q, 1), initial);  // throws if stationary

  auto rhs = [&](const Phase& y) { return geodesic_rhs(surface, y, n); };

  Phase y = to_phase(initial);
  double s = initial.s;
  path.samples.push_back(to_state(y, n, s));
  path.conserved_residuals.push_back(residual_at(surface, path.samples.back(), path.D));

  double remaining = length;
  while (remaining > 1e-15 * std::max(1.0, length)) {
    double h = std::min(step, remaining);
    try {
      y = rk4_step(y, h, rhs);
    } catch (const StationaryPointError&) {
      path.truncated = true;
      break;
    }
    s += h;
    remaining -= h;
    GeodesicState st = to_state(y, n, s);
    double res;
    try {
      res = residual_at(surface, st, path.D);
    } catch (const StationaryPointError&) {
      path.truncated = true;
      break;
    }
    path.samples.push_back(std::move(st));
    path.conserved_residuals.push_back(res);
  }
  return path;
}

GeodesicPath steepest_ascent(const PotentialSurface& surface, std::span<const double> q0,
                             double nu0, double length, double step) {
  if (step <= 0.0 || length < 0.0) {
    throw ValidationError("steepest_ascent needs step > 0 and length >= 0");
  }
  const int n = surface.dimension();

  // State is just (q, nu); the tangent is read off the gauge.
  auto rhs = [&](const Phase& y) {
    std::span<const double> q(y.data(), sz(n));
    SurfaceGauge g = surface.gauge(q, 1);
    Phase dy(y.size());
    for (int i = 0; i < n; ++i) dy[sz(i)] = g.jet.grad(i);
    dy[sz(n)] = g.G;
    return dy;
  };

  auto sample = [&](const Phase& y, double s) {
    std::span<const double> q(y.data(), sz(n));
    SurfaceGauge g = surface.gauge(q, 1);
    GeodesicState st;
    st.q.assign(y.begin(), y.begin() + n);
    st.nu = y[sz(n)];
    st.q_dot.resize(sz(n));
    for (int i = 0; i < n; ++i) st.q_dot[sz(i)] = g.jet.grad(i);
    st.nu_dot = g.G;
    st.s = s;
    return st;
  };

  GeodesicPath path;
  path.kind = PathKind::steepest_ascent;
  path.D = 0.0;  // null by construction: sum g_i^2 - G^2/G

  Phase y(sz(n + 1));
  for (int i = 0; i < n; ++i) y[sz(i)] = q0[sz(i)];
  y[sz(n)] = nu0;

  double s = 0.0;
  path.samples.push_back(sample(y, s));  // throws if q0 is stationary
  path.conserved_residuals.push_back(residual_at(surface, path.samples.back(), path.D));

  double remaining = length;
  while (remaining > 1e-15 * std::max(1.0, length)) {
    double h = std::min(step, remaining);
    try {
      y = rk4_step(y, h, rhs);
      s += h;
      remaining -= h;
      path.samples.push_back(sample(y, s));
    } catch (const StationaryPointError&) {
      path.truncated = true;
      break;
    }
    path.conserved_residuals.push_back(residual_at(surface, path.samples.back(), path.D));
  }
  return path;
}

GeodesicPath hyperplane_path(const PotentialSurface& surface, std::span<const double> q0,
                             std::span<const double> q1, double nu, int steps) {
  const int n = surface.dimension();
  if (static_cast<int>(q0.size()) != n || static_cast<int>(q1.size()) != n) {
    throw ValidationError("hyperplane_path endpoint dimension mismatch");
  }
  if (steps < 1) throw ValidationError("hyperplane_path needs steps >= 1");

  GeodesicPath path;
  path.kind = PathKind::hyperplane;
  double d2 = 0.0;
  std::vector<double> tangent(sz(n));
  for (int i = 0; i < n; ++i) {
    tangent[sz(i)] = q1[sz(i)] - q0[sz(i)];
    d2 += tangent[sz(i)] * tangent[sz(i)];
  }
  path.D = d2;

  for (int k = 0; k <= steps; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(steps);
    GeodesicState st;
    st.q.resize(sz(n));
    for (int i = 0; i < n; ++i) st.q[sz(i)] = q0[sz(i)] + t * tangent[sz(i)];
    st.nu = nu;
    st.q_dot = tangent;
    st.nu_dot = 0.0;
    st.s = t;
    path.conserved_residuals.push_back(residual_at(surface, st, path.D));
    path.samples.push_back(std::move(st));
  }
  return path;
}

double geodesic_distance(const GeodesicPath& path) {
  if (path.D < -1e-10) {
    throw TimelikePathError("geodesic distance undefined for timelike path (D < 0)");
  }
  double d = std::max(path.D, 0.0);
  return std::sqrt(d) * path.total_s();
}

double world_function_local(const PotentialSurface& surface, std::span<const double> q0,
                            double nu0, std::span<const double> q, double nu) {
  SurfaceGauge g0 = surface.gauge(q0, 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < q0.size(); ++i) {
    double d = q[i] - q0[i];
    sum += d * d;
  }
  double dn = nu - nu0;
  return sum - dn * dn / g0.G;
}

namespace {

struct Shot {
  Phase end;       // (q, nu) endpoint
  GeodesicPath path;
};

/** Integrate the geodesic over parameter span [0,1] from p0 with velocity v. */
std::optional<Shot> shoot(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                          const std::vector<double>& v, int steps) {
  const int n = surface.dimension();
  GeodesicState init;
  init.q.assign(q0.begin(), q0.end());
  init.nu = nu0;
  init.q_dot.assign(v.begin(), v.begin() + n);
  init.nu_dot = v[sz(n)];
  GeodesicPath p = integrate_geodesic(surface, init, 1.0, 1.0 / static_cast<double>(steps));
  if (p.truncated || p.samples.empty()) return std::nullopt;
  const GeodesicState& last = p.samples.back();
  Phase end(sz(n + 1));
  for (int i = 0; i < n; ++i) end[sz(i)] = last.q[sz(i)];
  end[sz(n)] = last.nu;
  return Shot{std::move(end), std::move(p)};
}

struct NewtonOutcome {
  bool converged = false;
  std::optional<Shot> shot;
  std::vector<double> v;
  const char* reason = "no convergence after max_iters";
};

/** Solve the small dense system J x = b in place; returns false when singular. */
bool solve_dense(std::vector<std::vector<double>>& J, std::vector<double>& b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(J[r][col]) > std::abs(J[pivot][col])) pivot = r;
    }
    if (std::abs(J[pivot][col]) < 1e-14) return false;
    std::swap(J[col], J[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < m; ++r) {
      double f = J[r][col] / J[col][col];
      for (std::size_t c = col; c < m; ++c) J[r][c] -= f * J[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t col = m; col-- > 0;) {
    double acc = b[col];
    for (std::size_t c = col + 1; c < m; ++c) acc -= J[col][c] * b[c];
    b[col] = acc / J[col][col];
  }
  return true;
}

/** Damped Newton iteration on the endpoint map, starting from velocity v0. */
NewtonOutcome newton_from(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                          const std::vector<double>& target, std::vector<double> v0,
                          int max_iters, double tol, int steps) {
  const std::size_t m = target.size();
  NewtonOutcome out;
  out.v = std::move(v0);

  auto error_of = [&](const Shot& sh) {
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) e = std::max(e, std::abs(sh.end[i] - target[i]));
    return e;
  };

  std::optional<Shot> current = shoot(surface, q0, nu0, out.v, steps);
  if (!current) {
    out.reason = "initial shot crossed a stationary region";
    return out;
  }
  double err = error_of(*current);

  for (int iter = 0; iter < max_iters && err >= tol; ++iter) {
    // Forward-difference Jacobian of the endpoint map.
    std::vector<std::vector<double>> J(m, std::vector<double>(m, 0.0));
    bool jac_ok = true;
    for (std::size_t col = 0; col < m; ++col) {
      double dv = 1e-6 * std::max(1.0, std::abs(out.v[col]));
      std::vector<double> vp = out.v;
      vp[col] += dv;
      std::optional<Shot> sh = shoot(surface, q0, nu0, vp, steps);
      if (!sh) {
        jac_ok = false;
        break;
      }
      for (std::size_t r = 0; r < m; ++r) J[r][col] = (sh->end[r] - current->end[r]) / dv;
    }
    if (!jac_ok) {
      out.reason = "Jacobian probe crossed a stationary region";
      out.shot = std::move(current);
      return out;
    }

    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = target[i] - current->end[i];
    if (!solve_dense(J, rhs)) {
      out.reason = "singular shooting Jacobian";
      out.shot = std::move(current);
      return out;
    }

    // Damped update: halve while the endpoint error does not improve.
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= std::pow(2.0, -10)) {
      std::vector<double> vn = out.v;
      for (std::size_t i = 0; i < m; ++i) vn[i] += lambda * rhs[i];
      std::optional<Shot> sh = shoot(surface, q0, nu0, vn, steps);
      if (sh) {
        double en = error_of(*sh);
        if (en < err) {
          out.v = std::move(vn);
          current = std::move(sh);
          err = en;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      out.reason = "damping floor reached without improvement";
      out.shot = std::move(current);
      return out;
    }
  }

  out.converged = err < tol;
  out.shot = std::move(current);
  return out;
}

}  // namespace

GeodesicPath connect(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                     std::span<const double> q1, double nu1, int max_iters, double tol,
                     int steps) {
  const int n = surface.dimension();
  if (static_cast<int>(q0.size()) != n || static_cast<int>(q1.size()) != n) {
    throw ValidationError("connect endpoint dimension mismatch");
  }
  bool same = std::equal(q0.begin(), q0.end(), q1.begin()) && nu0 == nu1;
  if (same) throw ValidationError("connect endpoints must be distinct");
  surface.gauge(q0, 1);
  surface.gauge(q1, 1);

  const std::size_t m = sz(n + 1);
  std::vector<double> source(q0.begin(), q0.end());
  source.push_back(nu0);
  std::vector<double> target(q1.begin(), q1.end());
  target.push_back(nu1);

  // The local world-function expansion says the straight chord is the right
  // first guess for the initial velocity.
  std::vector<double> chord(m);
  for (std::size_t i = 0; i < m; ++i) chord[i] = target[i] - source[i];

  NewtonOutcome direct =
      newton_from(surface, q0, nu0, target, chord, max_iters, tol, steps);
  if (direct.converged) {
    GeodesicPath path = std::move(direct.shot->path);
    path.kind = PathKind::shooting;
    return path;
  }

  // Strongly curved legs can leave the chord guess outside the Newton basin.
  // Fall back on continuation: march the target out from the source in stages,
  // warm-starting each stage from the previous velocity.
  const int stages = 8;
  std::vector<double> v;
  double t_prev = 0.0;
  for (int k = 1; k <= stages; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(stages);
    std::vector<double> tgt(m), guess(m);
    for (std::size_t i = 0; i < m; ++i) {
      tgt[i] = source[i] + t * (target[i] - source[i]);
      guess[i] = v.empty() ? t * chord[i] : v[i] * (t / t_prev);
    }
    NewtonOutcome stage = newton_from(surface, q0, nu0, tgt, guess, max_iters, tol, steps);
    if (!stage.converged) {
      throw NoConvergenceError(std::string("connect: ") + stage.reason);
    }
    v = std::move(stage.v);
    t_prev = t;
    if (k == stages) {
      GeodesicPath path = std::move(stage.shot->path);
      path.kind = PathKind::shooting;
      return path;
    }
  }
  throw NoConvergenceError("connect: no convergence after max_iters");  // unreachable
}

double world_function(const PotentialSurface& surface, std::span<const double> q0, double nu0,
                      std::span<const double> q1, double nu1) {
  GeodesicPath p = connect(surface, q0, nu0, q1, nu1);
  double j = geodesic_distance(p);
  return j * j;
}

void write_path_csv(const GeodesicPath& path, std::ostream& out) {
  const int n = path.samples.empty() ? 0 : static_cast<int>(path.samples.front().q.size());
  out << "s";
  for (int i = 1; i <= n; ++i) out << ",q" << i;
  out << ",nu";
  for (int i = 1; i <= n; ++i) out << ",qdot" << i;
  out << ",nudot,D_residual\n";
  for (std::size_t k = 0; k < path.samples.size(); ++k) {
    const GeodesicState& st = path.samples[k];
    out << fmt(st.s);
    for (int i = 0; i < n; ++i) out << ',' << fmt(st.q[sz(i)]);
    out << ',' << fmt(st.nu);
    for (int i = 0; i < n; ++i) out << ',' << fmt(st.q_dot[sz(i)]);
    out << ',' << fmt(st.nu_dot);
    out << ',' << fmt(path.conserved_residuals[k]);
    out << '\n';
  }
}

}  // namespace lswe
