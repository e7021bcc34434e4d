#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lswe/surface.hpp"

namespace lswe {

/**
 * A function of one real variable with two analytic derivatives: the profile
 * F (or the ivp companion D) that rides on a level-set phase.
 */
class WaveProfile {
 public:
  enum class Kind { polynomial, gaussian, tabulated };

  /** c0 + c1 x + c2 x^2 + ...  (empty list means the zero profile). */
  static WaveProfile polynomial(std::vector<double> coefficients);

  /** exp(-(x-center)^2 / (2 width^2)); a mollified front. */
  static WaveProfile gaussian(double center, double width);

  /**
   * Cubic Hermite interpolant through (x_k, f_k) with slopes df_k; knots must
   * be strictly increasing.  Evaluation outside the knot range extends the
   * boundary cubic.
   */
  static WaveProfile tabulated(std::vector<double> x, std::vector<double> f,
                               std::vector<double> df);

  static WaveProfile zero() { return polynomial({}); }
  static WaveProfile identity() { return polynomial({0.0, 1.0}); }

  double value(double x) const;
  double first(double x) const;
  double second(double x) const;

  Kind kind() const { return kind_; }
  double center() const { return center_; }  // gaussian only
  double width() const { return width_; }    // gaussian only

 private:
  WaveProfile() = default;

  Kind kind_ = Kind::polynomial;
  std::vector<double> coeff_;
  double center_ = 0.0;
  double width_ = 1.0;
  std::vector<double> tab_x_, tab_f_, tab_df_;
};

/** Value and the derivatives of a field psi(q, nu) that the operator reads. */
struct FieldJet {
  double value = 0.0;
  std::vector<double> dq;        // d psi / d q_i
  std::vector<double> d2q_diag;  // d2 psi / d q_i^2 (pure seconds; the Laplacian needs no more)
  double dnu = 0.0;
  double d2nu = 0.0;
};

/**
 * A scalar field on (q, nu).  Three kinds:
 *
 *   progressing  F(V(q) + sign * (nu - nu0)); sign -1 is the wave solution
 *                F(V - nu~), sign +1 the reversed phase.
 *   ivp          the superposition (1/2){F(V+nu~) + F(V-nu~) + D(V+nu~) - D(V-nu~)}.
 *   custom       carries its own jet function; the library never finite-
 *                differences a user field.
 */
class WaveField {
 public:
  enum class Kind { progressing, ivp, custom };
  using JetFn = std::function<FieldJet(std::span<const double>, double)>;

  static WaveField progressing(WaveProfile profile, int sign_on_nu = -1, double nu0 = 0.0);
  static WaveField ivp(WaveProfile f, WaveProfile d, double nu0 = 0.0);
  static WaveField custom(JetFn jet);

  /** Field jet at (gauge.point, nu); progressing/ivp read V and its jet from the gauge. */
  FieldJet jet(const SurfaceGauge& gauge, double nu) const;

  Kind kind() const { return kind_; }
  int sign_on_nu() const { return sign_; }
  double nu0() const { return nu0_; }
  const WaveProfile& profile_f() const { return f_; }
  const WaveProfile& profile_d() const { return d_; }

 private:
  WaveField() = default;

  Kind kind_ = Kind::progressing;
  WaveProfile f_ = WaveProfile::zero();
  WaveProfile d_ = WaveProfile::zero();
  int sign_ = -1;
  double nu0_ = 0.0;
  JetFn jet_fn_;
};

/** L psi = Laplacian_q psi - G d2nu psi + TrH dnu psi at (q, nu). */
double apply_operator(const PotentialSurface& surface, const WaveField& field,
                      std::span<const double> q, double nu);

/** (grad_q S).(grad_q S) - G (dnu S)^2 for a phase field S. */
double eikonal_residual(const PotentialSurface& surface, const WaveField& phase,
                        std::span<const double> q, double nu);

/** Laplacian(V) - TrH; zero by construction, wired as a cross-check. */
double transport_residual(const SurfaceGauge& gauge);

/** The ivp superposition evaluated directly (no gauge, no stationary guard). */
double ivp_solution(const PotentialSurface& surface, const WaveProfile& f, const WaveProfile& d,
                    std::span<const double> q, double nu, double nu0);

/**
 * Split L into the block over the 1-based coordinate set `partition` and the
 * block over its complement; the two parts sum to apply_operator.  The
 * partition must be a nonempty proper subset of {1..N}.
 */
std::pair<double, double> split_operator(const PotentialSurface& surface,
                                         const std::vector<int>& partition,
                                         const WaveField& field, std::span<const double> q,
                                         double nu);

/** All N single-coordinate pieces L_i psi = d2_i psi - g_i^2 d2nu psi + H_ii dnu psi. */
std::vector<double> split_per_coordinate(const PotentialSurface& surface, const WaveField& field,
                                         std::span<const double> q, double nu);

}  // namespace lswe
