#pragma once

#include <span>
#include <vector>

namespace ltlab {

/// Law of L_t(x) at a site with Green value gxx: an atom exp(-t/gxx) at 0 and
/// f(l) = (1/gxx) sqrt(t/l) I1(2 sqrt(t l)/gxx) exp(-(t+l)/gxx) on l > 0.
class SiteLaw {
 public:
  SiteLaw(double gxx, double t);

  double gxx() const noexcept { return gxx_; }
  double t() const noexcept { return t_; }
  double atom() const noexcept { return atom_; }
  double density(double l) const;
  /// P(L <= l), quadrature with absolute tolerance ~1e-9.
  double cdf(double l) const;
  /// CDF at every point of an ascending sequence, integrating only the gaps.
  std::vector<double> cdf_sorted(std::span<const double> ascending) const;
  /// integral of l^k f(l) dl over (0, inf).
  double moment(int k) const;

 private:
  double integrate(double a, double b, int power = 0) const;

  double gxx_;
  double t_;
  double atom_;
};

SiteLaw site_law(double gxx, double t);

/// exp(-x) I1(x), finite for all x >= 0.
double bessel_i1_scaled(double x);

/// P(L_t(x) >= a + b) <= ...; clamped to [0, 1].
double upper_tail_bound(double gxx, double t, double a, double b);

/// P(L_t(x) - a in [b_lo, b_hi]) <= ...; clamped to [0, 1].
double lower_tail_bound(double gxx, double t, double a, double b_lo, double b_hi);

/// P(L_t(x) <= b) <= min of the two exponential bounds; exact at b = 0.
double light_bound(double gxx, double t, double b);

/// mu([0, b]) for the avoided/light limit measure (atom 1 at 0).
double mu_measure(double theta, double b);
/// Density of mu on (0, inf).
double mu_density(double theta, double h);

struct InterlacementMoments {
  double mean;
  double variance;
};

/// Occupation field of two-dimensional interlacements at u = pi theta:
/// mean 4u a^2, variance 16u a^3 (a = potential kernel value at z).
InterlacementMoments interlacement_moments(double theta, double a_z);

struct LimitConstants {
  double g;
  double alpha;        // 2/sqrt(g)
  double alpha_thick;  // (1/g) lambda/(sqrt(theta) + lambda)
  double alpha_thin;   // (1/g) lambda/(sqrt(theta) - lambda); NaN unless lambda < sqrt(theta)
  double exponent_thick;    // 2(1 - lambda^2)
  double exponent_avoided;  // 2(1 - theta)
  double max_limit;         // 2g(sqrt(theta) + 1)^2
  double min_limit;         // 2g(sqrt(theta) - 1)^2 for theta >= 1, else 0
};

LimitConstants constants(double theta, double lambda);

}  // namespace ltlab
