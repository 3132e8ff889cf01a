#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ltlab {

/// Ascending sample.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// cdf_at[i] = F(x_i) for the sorted values; cdf_left[i] = F(x_i-) when F has
/// atoms (defaults to cdf_at).
TestResult ks_one_sample(const Sample& s, std::span<const double> cdf_at, std::span<const double> cdf_left = {});
TestResult ks_one_sample(const Sample& s, const std::function<double(double)>& cdf);

TestResult ks_two_sample(const Sample& a, const Sample& b);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;  // NaN with only two points
  double intercept = 0.0;
};

/// Least squares of log(count) on log(N).
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

struct MeanCI {
  double mean = 0.0;
  double half_width = 0.0;
  double std_error = 0.0;
};

/// Normal-approximation interval at the given two-sided level.
MeanCI mean_ci(std::span<const double> xs, double level = 0.95);

/// Unbiased sample variance.
double sample_variance(std::span<const double> xs);

}  // namespace ltlab
