#include "ltlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "ltlab/error.hpp"

namespace ltlab {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) throw ParameterError("Sample: NaN value");
  }
  std::sort(values_.begin(), values_.end());
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (lambda < 1.18) {
    // Dual form converges fast for small lambda.
    double s = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      s += term;
      if (term < 1e-10 * s) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double p_value(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

TestResult ks_one_sample(const Sample& s, std::span<const double> cdf_at, std::span<const double> cdf_left) {
  const std::size_t n = s.size();
  if (n == 0) throw ParameterError("ks_one_sample: empty sample");
  if (cdf_at.size() != n || (!cdf_left.empty() && cdf_left.size() != n)) {
    throw ParameterError("ks_one_sample: cdf table length mismatch");
  }
  const auto& x = s.values();
  const double inv = 1.0 / static_cast<double>(n);
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    const double below = static_cast<double>(i) * inv;      // F_n(x-)
    const double upto = static_cast<double>(j + 1) * inv;   // F_n(x)
    const double left = cdf_left.empty() ? cdf_at[i] : cdf_left[i];
    d = std::max({d, std::abs(upto - cdf_at[i]), std::abs(below - left)});
    i = j + 1;
  }
  return {d, p_value(d, static_cast<double>(n))};
}

TestResult ks_one_sample(const Sample& s, const std::function<double(double)>& cdf) {
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = cdf(s.values()[i]);
  return ks_one_sample(s, f);
}

TestResult ks_two_sample(const Sample& a, const Sample& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 || m == 0) throw ParameterError("ks_two_sample: empty sample");
  const auto& x = a.values();
  const auto& y = b.values();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    const double v = std::min(x[i], y[j]);
    while (i < n && x[i] == v) ++i;
    while (j < m && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double n_eff = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  return {d, p_value(d, n_eff)};
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw ParameterError("loglog_slope: need at least two points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [nn, c] : points) {
    if (!(nn > 0.0) || !(c > 0.0)) throw ParameterError("loglog_slope: N and counts must be positive");
    lx.push_back(std::log(nn));
    ly.push_back(std::log(c));
  }
  const double k = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("loglog_slope: all N equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (lx.size() == 2) {
    fit.std_error = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / (k - 2.0) / sxx);
  return fit;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

MeanCI mean_ci(std::span<const double> xs, double level) {
  if (xs.empty()) throw ParameterError("mean_ci: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("mean_ci: level must lie in (0,1)");
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  const double se = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  return {mean, z * se, se};
}

}  // namespace ltlab
