#include "ltlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ltlab/error.hpp"
#include "ltlab/green.hpp"

namespace ltlab {

double bessel_i1_scaled(double x) {
  if (x < 0.0) return -bessel_i1_scaled(-x);
  if (x < 700.0) return std::exp(-x) * boost::math::cyl_bessel_i(1, x);
  // e^{-x} I1(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k prod_{j<=k} (4 - (2j-1)^2) / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(4.0 - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

SiteLaw::SiteLaw(double gxx, double t) : gxx_(gxx), t_(t) {
  if (!(gxx >= 0.25)) throw ParameterError("site_law: G(x,x) must be >= 1/4");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("site_law: t must be finite and >= 0");
  atom_ = std::exp(-t / gxx);
}

SiteLaw site_law(double gxx, double t) { return SiteLaw(gxx, t); }

double SiteLaw::density(double l) const {
  if (!(l > 0.0) || t_ == 0.0) return 0.0;
  const double z = 2.0 * std::sqrt(t_ * l) / gxx_;
  const double d = std::sqrt(t_) - std::sqrt(l);
  return std::sqrt(t_ / l) * bessel_i1_scaled(z) * std::exp(-d * d / gxx_) / gxx_;
}

namespace {

// Bisection on the Kronrod error estimate against an absolute tolerance;
// Boost's own adaptive driver is relative and never settles on the tiny,
// near-zero gaps between sorted sample points.
template <class F>
double integrate_abs(const F& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth == 0) return v;
  const double m = 0.5 * (a + b);
  return integrate_abs(f, a, m, 0.5 * tol, depth - 1) + integrate_abs(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double SiteLaw::integrate(double a, double b, int power) const {
  if (!(b > a)) return 0.0;
  auto f = [this, power](double l) { return std::pow(l, power) * density(l); };
  return integrate_abs(f, a, b, 1e-11, 24);
}

double SiteLaw::cdf(double l) const {
  if (l < 0.0) return 0.0;
  if (t_ == 0.0) return 1.0;
  // Split at the bulk so the adaptive rule sees a smooth integrand on each piece.
  const double mid = std::min(l, t_);
  return std::min(1.0, atom_ + integrate(0.0, mid) + integrate(mid, l));
}

std::vector<double> SiteLaw::cdf_sorted(std::span<const double> ascending) const {
  std::vector<double> out(ascending.size());
  double acc = atom_;
  double prev = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double x = ascending[i];
    if (i > 0 && x < ascending[i - 1]) throw ParameterError("cdf_sorted: input not ascending");
    if (x < 0.0) {
      out[i] = 0.0;
      continue;
    }
    if (t_ > 0.0 && x > prev) {
      acc += integrate(prev, x);
      prev = x;
    }
    out[i] = t_ == 0.0 ? 1.0 : std::min(1.0, acc);
  }
  return out;
}

double SiteLaw::moment(int k) const {
  if (t_ == 0.0) return 0.0;
  const double sd = std::sqrt(2.0 * t_ * gxx_);
  const double hi = t_ + 60.0 * sd + 60.0 * gxx_;
  return integrate(0.0, t_, k) + integrate(t_, hi, k);
}

namespace {

double clamp01(double x) {
  if (std::isnan(x)) return 1.0;
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

double upper_tail_bound(double gxx, double t, double a, double b) {
  if (!(a > 0.0) || !(t > 0.0)) throw ParameterError("upper_tail_bound: requires a > 0 and t > 0");
  if (!(a + b > t)) throw ParameterError("upper_tail_bound: requires a + b > t");
  const double sa = std::sqrt(2.0 * a);
  const double st = std::sqrt(2.0 * t);
  const double gap = sa - st;
  const double v = std::sqrt(gxx) / (std::sqrt(2.0 * (a + b)) - st) * std::exp(-gap * gap / (2.0 * gxx)) *
                   std::exp(-b * gap / (gxx * sa));
  return clamp01(v);
}

double lower_tail_bound(double gxx, double t, double a, double b_lo, double b_hi) {
  if (!(a > 0.0) || !(t > 0.0)) throw ParameterError("lower_tail_bound: requires a > 0 and t > 0");
  if (b_lo > b_hi) throw ParameterError("lower_tail_bound: requires b_lo <= b_hi");
  if (!(a + b_lo > 0.0) || !(a + b_hi < t)) {
    throw ParameterError("lower_tail_bound: requires a + b_lo > 0 and a + b_hi < t");
  }
  const double sa = std::sqrt(2.0 * a);
  const double st = std::sqrt(2.0 * t);
  const double gap = st - sa;
  const double v = std::pow(t / (a + b_lo), 0.25) * std::sqrt(gxx) / (st - std::sqrt(2.0 * (a + b_hi))) *
                   std::exp(-gap * gap / (2.0 * gxx)) * std::exp(b_hi * gap / (gxx * sa));
  return clamp01(v);
}

double light_bound(double gxx, double t, double b) {
  if (!(gxx > 0.0) || !(t >= 0.0) || !(b >= 0.0)) throw ParameterError("light_bound: invalid parameters");
  const double first = std::exp(-(t / gxx) * std::exp(-b / gxx));
  const double second = std::exp(-t / gxx + b * t / (gxx * gxx));
  return clamp01(std::min(first, second));
}

namespace {

// alpha^2 theta / 2 with alpha = 2/sqrt(g).
double mu_rate(double theta) { return 2.0 * theta / kG; }

}  // namespace

double mu_measure(double theta, double b) {
  if (!(theta > 0.0) || !(theta < 1.0)) throw ParameterError("mu_measure: theta must lie in (0,1)");
  if (!(b >= 0.0)) throw ParameterError("mu_measure: b must be >= 0");
  const double x = mu_rate(theta) * b;
  // term_n = x^{n+1} / ((n+1) n! (n+1)!)
  double sum = 1.0;
  double base = x;  // x^{n+1} / (n! (n+1)!)
  for (int n = 0; n < 10000; ++n) {
    const double term = base / (n + 1);
    sum += term;
    if (term < 1e-14 * sum && n > 0) break;
    base *= x / ((n + 1.0) * (n + 2.0));
  }
  return sum;
}

double mu_density(double theta, double h) {
  if (!(theta > 0.0) || !(theta < 1.0)) throw ParameterError("mu_density: theta must lie in (0,1)");
  if (h < 0.0) return 0.0;
  const double c = mu_rate(theta);
  const double x = c * h;
  // sum_n c^{n+1} h^n / (n! (n+1)!)
  double term = c;
  double sum = 0.0;
  for (int n = 0; n < 10000; ++n) {
    sum += term;
    if (term < 1e-16 * sum && n > 0) break;
    term *= x / ((n + 1.0) * (n + 2.0));
  }
  return sum;
}

InterlacementMoments interlacement_moments(double theta, double a_z) {
  if (!(theta > 0.0) || !(theta < 1.0)) throw ParameterError("interlacement_moments: theta must lie in (0,1)");
  if (!(a_z >= 0.0)) throw ParameterError("interlacement_moments: a(z) must be >= 0");
  const double u = std::numbers::pi * theta;
  return {4.0 * u * a_z * a_z, 16.0 * u * a_z * a_z * a_z};
}

LimitConstants constants(double theta, double lambda) {
  if (!(theta > 0.0)) throw ParameterError("constants: theta must be > 0");
  const double g = kG;
  const double st = std::sqrt(theta);
  LimitConstants c{};
  c.g = g;
  c.alpha = 2.0 / std::sqrt(g);
  c.alpha_thick = lambda / (g * (st + lambda));
  c.alpha_thin = lambda < st ? lambda / (g * (st - lambda)) : std::numeric_limits<double>::quiet_NaN();
  c.exponent_thick = 2.0 * (1.0 - lambda * lambda);
  c.exponent_avoided = 2.0 * (1.0 - theta);
  c.max_limit = 2.0 * g * (st + 1.0) * (st + 1.0);
  c.min_limit = theta >= 1.0 ? 2.0 * g * (st - 1.0) * (st - 1.0) : 0.0;
  return c;
}

}  // namespace ltlab
