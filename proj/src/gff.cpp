#include "ltlab/gff.hpp"

#include <cmath>
#include <mutex>
#include <random>

#include <fftw3.h>

#include "ltlab/error.hpp"
#include "ltlab/simd/kernels.hpp"

namespace ltlab {

namespace {

Eigen::VectorXd standard_normals(Eigen::Index n, RandomStream& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

// FFTW's planner is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GaussianField sample_dgff(const GreenOperator& G, RandomStream& rng) {
  const Eigen::MatrixXd& C = G.cholesky();
  const Eigen::VectorXd z = standard_normals(C.rows(), rng);
  const Eigen::VectorXd h = C.triangularView<Eigen::Lower>() * z;
  return {std::vector<double>(h.data(), h.data() + h.size()), 0, "green-dense"};
}

GaussianField sample_dgff_spectral(const LatticeGraph& g, RandomStream& rng) {
  const auto shape = g.block_shape();
  if (!shape) throw ParameterError("sample_dgff_spectral: graph is not a full rectangular block");
  const int m1 = (*shape)[0];
  const int m2 = (*shape)[1];
  const std::size_t n = g.size();

  double* buf = fftw_alloc_real(n);
  if (buf == nullptr) throw Error("sample_dgff_spectral: allocation failed");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    // FFTW_ESTIMATE keeps the algorithm, and hence the bits, fixed.
    plan = fftw_plan_r2r_2d(m2, m1, buf, buf, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  }

  std::normal_distribution<double> normal;
  for (int q = 0; q < m2; ++q) {
    const double cq = 2.0 * std::cos(std::numbers::pi * (q + 1) / (m2 + 1));
    for (int p = 0; p < m1; ++p) {
      const double cp = 2.0 * std::cos(std::numbers::pi * (p + 1) / (m1 + 1));
      buf[static_cast<std::size_t>(q) * static_cast<std::size_t>(m1) + static_cast<std::size_t>(p)] =
          normal(rng) / std::sqrt(4.0 - cp - cq);
    }
  }
  fftw_execute(plan);

  // RODFT00 is unnormalized: each axis contributes 2 sum_j sin(...).
  const double scale = 0.5 / std::sqrt(static_cast<double>(m1 + 1) * static_cast<double>(m2 + 1));
  std::vector<double> values(buf, buf + n);
  for (double& v : values) v *= scale;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return {std::move(values), 0, "green-spectral"};
}

PinnedSampler::PinnedSampler(const PotentialKernel& a, int r) : radius_(r) {
  if (r < 1) throw ParameterError("sample_pinned: radius must be >= 1");
  if (a.half_width() < 2 * r) {
    throw ParameterError("sample_pinned: potential kernel table too small for radius " + std::to_string(r));
  }
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      if (x != 0 || y != 0) offsets_.push_back({x, y});
    }
  }
  const auto n = static_cast<Eigen::Index>(offsets_.size());
  cov_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Site& u = offsets_[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const Site& v = offsets_[static_cast<std::size_t>(j)];
      cov_(i, j) = a(u.x, u.y) + a(v.x, v.y) - a(u.x - v.x, u.y - v.y);
    }
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
  if (es.info() != Eigen::Success) throw Error("sample_pinned: eigen-decomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10) throw Error("sample_pinned: pinned covariance is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  factor_ = es.eigenvectors() * ev.asDiagonal();
}

PinnedField PinnedSampler::sample(RandomStream& rng) const {
  const Eigen::VectorXd z = standard_normals(factor_.cols(), rng);
  const Eigen::VectorXd phi = factor_ * z;
  PinnedField f;
  f.radius = radius_;
  const int side = 2 * radius_ + 1;
  f.values.assign(static_cast<std::size_t>(side * side), 0.0);
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    const Site& s = offsets_[i];
    f.values[static_cast<std::size_t>((s.y + radius_) * side + (s.x + radius_))] = phi[static_cast<Eigen::Index>(i)];
  }
  return f;
}

PinnedField sample_pinned(const PotentialKernel& a, int r, RandomStream& rng) {
  return PinnedSampler(a, r).sample(rng);
}

std::vector<double> dynkin_lhs(const LocalTimeField& L, const GaussianField& h) {
  if (L.size() != h.size()) throw ParameterError("dynkin_lhs: field sizes differ");
  std::vector<double> out(L.size());
  simd::active().dynkin_lhs(L.local_time.data(), h.values.data(), out.data(), out.size());
  return out;
}

std::vector<double> dynkin_rhs(const GaussianField& htilde, double t) {
  if (!(t >= 0.0)) throw ParameterError("dynkin_rhs: t must be >= 0");
  std::vector<double> out(htilde.size());
  simd::active().dynkin_rhs(htilde.values.data(), std::sqrt(2.0 * t), out.data(), out.size());
  return out;
}

}  // namespace ltlab
