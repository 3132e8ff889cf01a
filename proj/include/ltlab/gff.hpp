#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ltlab/green.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/walk.hpp"

namespace ltlab {

/// Per-vertex field values (vertex order of the graph); zero at rho and
/// outside V by convention.
struct GaussianField {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string covariance_id;

  std::size_t size() const noexcept { return values.size(); }
};

/// h = C Z with G = C C^T.
GaussianField sample_dgff(const GreenOperator& G, RandomStream& rng);

/// Exact DGFF on a full rectangular block through the sine eigenbasis of the
/// wired Laplacian (two-dimensional DST-I); no Green matrix needed.
GaussianField sample_dgff_spectral(const LatticeGraph& g, RandomStream& rng);

/// phi on the box {|z|_inf <= r}, stored row-major from (-r,-r); phi(0) = 0.
struct PinnedField {
  int radius = 0;
  std::vector<double> values;

  double operator()(int dx, int dy) const {
    const int side = 2 * radius + 1;
    return values[static_cast<std::size_t>((dy + radius) * side + (dx + radius))];
  }
};

/// Factorizes Cov(phi_x, phi_y) = a(x) + a(y) - a(x - y) once; eigenvalues
/// below -1e-10 are an error, the rest are clamped at 0.
class PinnedSampler {
 public:
  PinnedSampler(const PotentialKernel& a, int r);

  int radius() const noexcept { return radius_; }
  /// Offsets of the non-origin sites, in the order used by covariance().
  const std::vector<Site>& offsets() const noexcept { return offsets_; }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }
  PinnedField sample(RandomStream& rng) const;

 private:
  int radius_;
  std::vector<Site> offsets_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

PinnedField sample_pinned(const PotentialKernel& a, int r, RandomStream& rng);

/// L(v) + h(v)^2 / 2.
std::vector<double> dynkin_lhs(const LocalTimeField& L, const GaussianField& h);

/// (htilde(v) + sqrt(2t))^2 / 2.
std::vector<double> dynkin_rhs(const GaussianField& htilde, double t);

}  // namespace ltlab
