#include "lswe/waves.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lswe/errors.hpp"

namespace lswe {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

WaveProfile WaveProfile::polynomial(std::vector<double> coefficients) {
  WaveProfile p;
  p.kind_ = Kind::polynomial;
  p.coeff_ = std::move(coefficients);
  return p;
}

WaveProfile WaveProfile::gaussian(double center, double width) {
  if (width <= 0.0) throw ValidationError("gaussian profile needs a positive width");
  WaveProfile p;
  p.kind_ = Kind::gaussian;
  p.center_ = center;
  p.width_ = width;
  return p;
}

WaveProfile WaveProfile::tabulated(std::vector<double> x, std::vector<double> f,
                                   std::vector<double> df) {
  if (x.size() < 2 || x.size() != f.size() || x.size() != df.size()) {
    throw ValidationError("tabulated profile needs matching x/f/df arrays with >= 2 knots");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw ValidationError("tabulated profile knots must increase");
  }
  WaveProfile p;
  p.kind_ = Kind::tabulated;
  p.tab_x_ = std::move(x);
  p.tab_f_ = std::move(f);
  p.tab_df_ = std::move(df);
  return p;
}

namespace {

/** Hermite cubic on [x0, x1] with data (f0, d0), (f1, d1); returns value/first/second. */
void hermite_eval(double x, double x0, double x1, double f0, double f1, double d0, double d1,
                  double out[3]) {
  double hh = x1 - x0;
  double t = (x - x0) / hh;
  double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  double h10 = t * (1.0 - t) * (1.0 - t);
  double h01 = t * t * (3.0 - 2.0 * t);
  double h11 = t * t * (t - 1.0);
  out[0] = h00 * f0 + hh * h10 * d0 + h01 * f1 + hh * h11 * d1;

  double g00 = 6.0 * t * (t - 1.0);
  double g10 = (1.0 - t) * (1.0 - 3.0 * t);
  double g01 = -g00;
  double g11 = t * (3.0 * t - 2.0);
  out[1] = (g00 * f0 + g01 * f1) / hh + g10 * d0 + g11 * d1;

  double s00 = 12.0 * t - 6.0;
  double s10 = 6.0 * t - 4.0;
  double s01 = -s00;
  double s11 = 6.0 * t - 2.0;
  out[2] = (s00 * f0 + s01 * f1) / (hh * hh) + (s10 * d0 + s11 * d1) / hh;
}

}  // namespace

double WaveProfile::value(double x) const {
  switch (kind_) {
    case Kind::polynomial: {
      double v = 0.0;
      for (std::size_t i = coeff_.size(); i-- > 0;) v = v * x + coeff_[i];
      return v;
    }
    case Kind::gaussian: {
      double z = (x - center_) / width_;
      return std::exp(-0.5 * z * z);
    }
    case Kind::tabulated: {
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - tab_x_.begin() - 1, 0, static_cast<std::ptrdiff_t>(tab_x_.size()) - 2));
      double out[3];
      hermite_eval(x, tab_x_[i], tab_x_[i + 1], tab_f_[i], tab_f_[i + 1], tab_df_[i],
                   tab_df_[i + 1], out);
      return out[0];
    }
  }
  throw Error("unreachable profile kind");
}

double WaveProfile::first(double x) const {
  switch (kind_) {
    case Kind::polynomial: {
      double v = 0.0;
      for (std::size_t i = coeff_.size(); i-- > 1;) {
        v = v * x + static_cast<double>(i) * coeff_[i];
      }
      return v;
    }
    case Kind::gaussian: {
      double z = (x - center_) / width_;
      return -(z / width_) * std::exp(-0.5 * z * z);
    }
    case Kind::tabulated: {
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - tab_x_.begin() - 1, 0, static_cast<std::ptrdiff_t>(tab_x_.size()) - 2));
      double out[3];
      hermite_eval(x, tab_x_[i], tab_x_[i + 1], tab_f_[i], tab_f_[i + 1], tab_df_[i],
                   tab_df_[i + 1], out);
      return out[1];
    }
  }
  throw Error("unreachable profile kind");
}

double WaveProfile::second(double x) const {
  switch (kind_) {
    case Kind::polynomial: {
      double v = 0.0;
      for (std::size_t i = coeff_.size(); i-- > 2;) {
        v = v * x + static_cast<double>(i) * static_cast<double>(i - 1) * coeff_[i];
      }
      return v;
    }
    case Kind::gaussian: {
      double z = (x - center_) / width_;
      return ((z * z - 1.0) / (width_ * width_)) * std::exp(-0.5 * z * z);
    }
    case Kind::tabulated: {
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - tab_x_.begin() - 1, 0, static_cast<std::ptrdiff_t>(tab_x_.size()) - 2));
      double out[3];
      hermite_eval(x, tab_x_[i], tab_x_[i + 1], tab_f_[i], tab_f_[i + 1], tab_df_[i],
                   tab_df_[i + 1], out);
      return out[2];
    }
  }
  throw Error("unreachable profile kind");
}

WaveField WaveField::progressing(WaveProfile profile, int sign_on_nu, double nu0) {
  if (sign_on_nu != 1 && sign_on_nu != -1) {
    throw ValidationError("progressing sign must be +1 or -1");
  }
  WaveField w;
  w.kind_ = Kind::progressing;
  w.f_ = std::move(profile);
  w.sign_ = sign_on_nu;
  w.nu0_ = nu0;
  return w;
}

WaveField WaveField::ivp(WaveProfile f, WaveProfile d, double nu0) {
  WaveField w;
  w.kind_ = Kind::ivp;
  w.f_ = std::move(f);
  w.d_ = std::move(d);
  w.nu0_ = nu0;
  return w;
}

WaveField WaveField::custom(JetFn jet) {
  WaveField w;
  w.kind_ = Kind::custom;
  w.jet_fn_ = std::move(jet);
  return w;
}

FieldJet WaveField::jet(const SurfaceGauge& gauge, double nu) const {
  const int n = gauge.dimension();
  FieldJet out;
  out.dq.assign(sz(n), 0.0);
  out.d2q_diag.assign(sz(n), 0.0);

  switch (kind_) {
    case Kind::progressing: {
      double x = gauge.value + static_cast<double>(sign_) * (nu - nu0_);
      double f1 = f_.first(x);
      double f2 = f_.second(x);
      out.value = f_.value(x);
      for (int i = 0; i < n; ++i) {
        double gi = gauge.grad(i);
        out.dq[sz(i)] = f1 * gi;
        out.d2q_diag[sz(i)] = f2 * gi * gi + f1 * gauge.hess(i, i);
      }
      out.dnu = static_cast<double>(sign_) * f1;
      out.d2nu = f2;
      return out;
    }
    case Kind::ivp: {
      double nt = nu - nu0_;
      double a = gauge.value + nt;  // advanced phase
      double b = gauge.value - nt;  // retarded phase
      double va = f_.first(a) + d_.first(a);
      double vb = f_.first(b) - d_.first(b);
      double wa = f_.second(a) + d_.second(a);
      double wb = f_.second(b) - d_.second(b);
      out.value = 0.5 * (f_.value(a) + f_.value(b) + d_.value(a) - d_.value(b));
      for (int i = 0; i < n; ++i) {
        double gi = gauge.grad(i);
        out.dq[sz(i)] = 0.5 * (va + vb) * gi;
        out.d2q_diag[sz(i)] = 0.5 * ((wa + wb) * gi * gi + (va + vb) * gauge.hess(i, i));
      }
      out.dnu = 0.5 * (va - vb);
      out.d2nu = 0.5 * (wa + wb);
      return out;
    }
    case Kind::custom:
      return jet_fn_(gauge.point, nu);
  }
  throw Error("unreachable field kind");
}

double apply_operator(const PotentialSurface& surface, const WaveField& field,
                      std::span<const double> q, double nu) {
  SurfaceGauge gauge = surface.gauge(q, 2);
  FieldJet j = field.jet(gauge, nu);
  double lap = 0.0;
  for (double d : j.d2q_diag) lap += d;
  return lap - gauge.G * j.d2nu + gauge.trace_H * j.dnu;
}

double eikonal_residual(const PotentialSurface& surface, const WaveField& phase,
                        std::span<const double> q, double nu) {
  SurfaceGauge gauge = surface.gauge(q, 2);
  FieldJet j = phase.jet(gauge, nu);
  double grad2 = 0.0;
  for (double d : j.dq) grad2 += d * d;
  return grad2 - gauge.G * j.dnu * j.dnu;
}

double transport_residual(const SurfaceGauge& gauge) {
  double lap = 0.0;
  for (int i = 0; i < gauge.dimension(); ++i) lap += gauge.hess(i, i);
  return lap - gauge.trace_H;
}

double ivp_solution(const PotentialSurface& surface, const WaveProfile& f, const WaveProfile& d,
                    std::span<const double> q, double nu, double nu0) {
  double v = surface.value(q);
  double nt = nu - nu0;
  return 0.5 * (f.value(v + nt) + f.value(v - nt) + d.value(v + nt) - d.value(v - nt));
}

std::pair<double, double> split_operator(const PotentialSurface& surface,
                                         const std::vector<int>& partition,
                                         const WaveField& field, std::span<const double> q,
                                         double nu) {
  const int n = surface.dimension();
  std::set<int> block(partition.begin(), partition.end());
  if (block.size() != partition.size()) {
    throw ValidationError("partition has duplicate indices");
  }
  if (block.empty() || static_cast<int>(block.size()) >= n) {
    throw ValidationError("partition must be a nonempty proper subset of {1..N}");
  }
  for (int i : block) {
    if (i < 1 || i > n) throw ValidationError("partition index out of range");
  }

  SurfaceGauge gauge = surface.gauge(q, 2);
  FieldJet j = field.jet(gauge, nu);

  double part_one = 0.0;
  double part_two = 0.0;
  for (int i = 0; i < n; ++i) {
    double gi = gauge.grad(i);
    double li = j.d2q_diag[sz(i)] - gi * gi * j.d2nu + gauge.hess(i, i) * j.dnu;
    if (block.count(i + 1)) {
      part_one += li;
    } else {
      part_two += li;
    }
  }
  return {part_one, part_two};
}

std::vector<double> split_per_coordinate(const PotentialSurface& surface, const WaveField& field,
                                         std::span<const double> q, double nu) {
  SurfaceGauge gauge = surface.gauge(q, 2);
  FieldJet j = field.jet(gauge, nu);
  std::vector<double> out(sz(surface.dimension()), 0.0);
  for (int i = 0; i < surface.dimension(); ++i) {
    double gi = gauge.grad(i);
    out[sz(i)] = j.d2q_diag[sz(i)] - gi * gi * j.d2nu + gauge.hess(i, i) * j.dnu;
  }
  return out;
}

}  // namespace lswe
