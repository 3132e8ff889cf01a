#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ltlab/lattice.hpp"

namespace ltlab {

/// g = 1/(2 pi): G(x,x) = g log N + O(1) deep inside D_N.
inline constexpr double kG = 1.0 / (2.0 * std::numbers::pi);

/// Exact Green function G = L^{-1} of the wired Laplacian (L(u,u) = 4,
/// L(u,w) = -1 for lattice neighbours inside V). Values are in local-time
/// units, so G(x,x) >= 1/4. The Cholesky factor of G is built on first use.
class GreenOperator {
 public:
  explicit GreenOperator(Eigen::MatrixXd values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(VertexId u, VertexId v) const { return values_(u, v); }
  const Eigen::MatrixXd& matrix() const noexcept { return values_; }
  std::vector<double> diagonal() const;

  /// Lower-triangular factor with G = C C^T.
  const Eigen::MatrixXd& cholesky() const;

 private:
  struct Lazy;
  Eigen::MatrixXd values_;
  std::shared_ptr<Lazy> lazy_;
};

inline constexpr std::size_t kDefaultDenseCap = 20000;

GreenOperator compute_green(const LatticeGraph& g, std::size_t dense_cap = kDefaultDenseCap);

/// b(y) = G(x,y)/G(x,x), the probability to hit x before rho from y.
double harmonic_coefficient(const GreenOperator& G, VertexId x, VertexId y);

enum class DiagonalMethod { Auto, Dense, Spectral, ConjugateGradient };

struct DiagonalOptions {
  DiagonalMethod method = DiagonalMethod::Auto;
  double cg_tolerance = 1e-8;
  unsigned threads = 0;
  // Auto uses the dense route up to this many vertices.
  std::size_t dense_limit = 1500;
};

/// G(x,x) for every vertex. Auto: dense for small graphs, the exact sine
/// series for full rectangular blocks, per-vertex CG otherwise.
std::vector<double> green_diagonal(const LatticeGraph& g, const DiagonalOptions& opts = {});

/// Potential kernel of Z^2 in the 1/4 normalization: a(0) = 0, discrete
/// harmonic off 0, a(e1) = 1/4, a(z) = g log|z| + kappa_bar + o(1).
/// The table covers the whole solve box |z|_inf <= 4r (box side 8r).
class PotentialKernel {
 public:
  PotentialKernel(int radius, int half_width, std::vector<double> table, double kappa_bar);

  int radius() const noexcept { return radius_; }
  int half_width() const noexcept { return half_width_; }
  double operator()(int dx, int dy) const;
  /// kappa_bar read off the solve at z = (r, 0).
  double kappa_bar() const noexcept { return kappa_bar_; }

 private:
  int radius_;
  int half_width_;
  std::vector<double> table_;
  double kappa_bar_;
};

PotentialKernel potential_kernel(int r);

/// Three-term asymptotic expansion of the kernel (1/4 normalization).
double potential_kernel_asymptotic(int dx, int dy);

/// Kernel value by one-dimensional quadrature of its Fourier integral; used
/// for the solve's boundary values.
double potential_kernel_exact(int dx, int dy);

/// (2 gamma + log 8) / (4 pi): the additive constant of the 1/4-normalized
/// kernel.
double potential_kernel_constant();

}  // namespace ltlab
