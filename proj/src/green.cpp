#include "ltlab/green.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/simd/kernels.hpp"

namespace ltlab {

struct GreenOperator::Lazy {
  std::once_flag once;
  Eigen::MatrixXd chol;
};

GreenOperator::GreenOperator(Eigen::MatrixXd values)
    : values_(std::move(values)), lazy_(std::make_shared<Lazy>()) {}

std::vector<double> GreenOperator::diagonal() const {
  std::vector<double> d(size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  return d;
}

const Eigen::MatrixXd& GreenOperator::cholesky() const {
  std::call_once(lazy_->once, [this] {
    Eigen::LLT<Eigen::MatrixXd> llt(values_);
    if (llt.info() != Eigen::Success) throw Error("green: Green matrix is not positive definite");
    lazy_->chol = llt.matrixL();
  });
  return lazy_->chol;
}

namespace {

Eigen::MatrixXd dense_laplacian(const LatticeGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    L(u, u) = LatticeGraph::kDegree;
    for (VertexId w : g.neighbors(static_cast<VertexId>(u))) {
      if (w != kRho) L(u, w) = -1.0;
    }
  }
  return L;
}

std::vector<double> sine_squares(int m) {
  // S[p*m + i] = sin^2(pi (p+1)(i+1) / (m+1)).
  std::vector<double> s(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  const double h = std::numbers::pi / (m + 1);
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < m; ++i) {
      const double v = std::sin(h * (p + 1) * (i + 1));
      s[static_cast<std::size_t>(p) * static_cast<std::size_t>(m) + static_cast<std::size_t>(i)] = v * v;
    }
  }
  return s;
}

std::vector<double> diagonal_spectral(const LatticeGraph& g) {
  const auto shape = g.block_shape();
  if (!shape) throw ParameterError("green_diagonal: spectral route requires a full rectangular block");
  const int m1 = (*shape)[0];
  const int m2 = (*shape)[1];
  const auto& k = simd::active();
  const std::vector<double> s1 = sine_squares(m1);
  const std::vector<double> s2 = sine_squares(m2);
  std::vector<double> c1(static_cast<std::size_t>(m1));
  std::vector<double> c2(static_cast<std::size_t>(m2));
  for (int p = 0; p < m1; ++p) c1[static_cast<std::size_t>(p)] = 2.0 * std::cos(std::numbers::pi * (p + 1) / (m1 + 1));
  for (int q = 0; q < m2; ++q) c2[static_cast<std::size_t>(q)] = 2.0 * std::cos(std::numbers::pi * (q + 1) / (m2 + 1));

  const auto w1 = static_cast<std::size_t>(m1);
  // T[q][i] = sum_p S1[p][i] / mu_pq
  std::vector<double> T(static_cast<std::size_t>(m2) * w1, 0.0);
  for (int q = 0; q < m2; ++q) {
    double* row = T.data() + static_cast<std::size_t>(q) * w1;
    for (int p = 0; p < m1; ++p) {
      const double mu = 4.0 - c1[static_cast<std::size_t>(p)] - c2[static_cast<std::size_t>(q)];
      k.axpy(1.0 / mu, s1.data() + static_cast<std::size_t>(p) * w1, row, w1);
    }
  }
  // G[j][i] = c * sum_q S2[q][j] T[q][i]
  std::vector<double> diag(static_cast<std::size_t>(m2) * w1, 0.0);
  const double norm = 4.0 / (static_cast<double>(m1 + 1) * static_cast<double>(m2 + 1));
  for (int j = 0; j < m2; ++j) {
    double* out = diag.data() + static_cast<std::size_t>(j) * w1;
    for (int q = 0; q < m2; ++q) {
      const double w = norm * s2[static_cast<std::size_t>(q) * static_cast<std::size_t>(m2) + static_cast<std::size_t>(j)];
      k.axpy(w, T.data() + static_cast<std::size_t>(q) * w1, out, w1);
    }
  }
  return diag;
}

std::vector<double> diagonal_cg(const LatticeGraph& g, double tol, unsigned threads) {
  const std::size_t cells = g.cell_count();
  const auto width = static_cast<std::size_t>(g.grid_width());
  std::vector<double> mask(cells, 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) mask[g.cell_of(static_cast<VertexId>(v))] = 1.0;
  const std::size_t begin = width;
  const std::size_t end = cells - width;
  const std::size_t max_iter = 20 * cells + 100;

  std::vector<double> diag(g.size());
  parallel_ranges(g.size(), resolve_threads(threads), [&](std::size_t vb, std::size_t ve, unsigned) {
    const auto& k = simd::active();
    std::vector<double> x(cells), r(cells), p(cells), ap(cells);
    for (std::size_t v = vb; v < ve; ++v) {
      const std::size_t c = g.cell_of(static_cast<VertexId>(v));
      std::fill(x.begin(), x.end(), 0.0);
      std::fill(r.begin(), r.end(), 0.0);
      r[c] = 1.0;
      p = r;
      double rr = 1.0;
      std::size_t it = 0;
      while (std::sqrt(rr) > tol && it++ < max_iter) {
        k.stencil_apply(p.data(), mask.data(), ap.data(), width, begin, end);
        const double alpha = rr / k.dot(p.data(), ap.data(), cells);
        k.axpy(alpha, p.data(), x.data(), cells);
        k.axpy(-alpha, ap.data(), r.data(), cells);
        const double rr_new = k.dot(r.data(), r.data(), cells);
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < cells; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
      }
      if (std::sqrt(rr) > tol) throw Error("green: conjugate gradient did not converge");
      diag[v] = x[c];
    }
  });
  return diag;
}

}  // namespace

GreenOperator compute_green(const LatticeGraph& g, std::size_t dense_cap) {
  if (g.size() > dense_cap) {
    throw SizeCapExceeded("compute_green: |V| = " + std::to_string(g.size()) +
                          " exceeds the dense-solve cap " + std::to_string(dense_cap));
  }
  const Eigen::MatrixXd L = dense_laplacian(g);
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  if (llt.info() != Eigen::Success) throw Error("compute_green: wired Laplacian is singular");
  Eigen::MatrixXd G = llt.solve(Eigen::MatrixXd::Identity(L.rows(), L.cols()));
  Eigen::MatrixXd sym = 0.5 * (G + G.transpose());
  return GreenOperator(std::move(sym));
}

double harmonic_coefficient(const GreenOperator& G, VertexId x, VertexId y) { return G(x, y) / G(x, x); }

std::vector<double> green_diagonal(const LatticeGraph& g, const DiagonalOptions& opts) {
  DiagonalMethod m = opts.method;
  if (m == DiagonalMethod::Auto) {
    if (g.block_shape()) {
      m = DiagonalMethod::Spectral;
    } else if (g.size() <= opts.dense_limit) {
      m = DiagonalMethod::Dense;
    } else {
      m = DiagonalMethod::ConjugateGradient;
    }
  }
  switch (m) {
    case DiagonalMethod::Dense:
      return compute_green(g).diagonal();
    case DiagonalMethod::Spectral:
      return diagonal_spectral(g);
    case DiagonalMethod::ConjugateGradient:
    case DiagonalMethod::Auto:
      break;
  }
  return diagonal_cg(g, opts.cg_tolerance, opts.threads);
}

double potential_kernel_constant() {
  return (2.0 * std::numbers::egamma + std::log(8.0)) / (4.0 * std::numbers::pi);
}

double potential_kernel_asymptotic(int dx, int dy) {
  if (dx == 0 && dy == 0) return 0.0;
  const double x = dx;
  const double y = dy;
  const double r2 = x * x + y * y;
  const double cos4 = (x * x * x * x - 6.0 * x * x * y * y + y * y * y * y) / (r2 * r2);
  return kG * 0.5 * std::log(r2) + potential_kernel_constant() - cos4 / (24.0 * std::numbers::pi * r2);
}

double potential_kernel_exact(int dx, int dy) {
  if (dx == 0 && dy == 0) return 0.0;
  // Integrating the Fourier representation over the second frequency leaves
  // a(x, y) = (1/2pi) int_0^pi (1 - cos(x t) e^{-|y| s}) / sinh s dt with
  // cosh s = 2 - cos t. The integrand is non-negative and tends to |y|.
  const double x = dx;
  const double y = std::abs(dy);
  auto f = [x, y](double t) {
    const double u = 1.0 - std::cos(t);
    if (u == 0.0) return y;
    const double sh = std::sqrt(u * (2.0 + u));
    const double s = std::log1p(u + sh);
    return (1.0 - std::cos(x * t) * std::exp(-y * s)) / sh;
  };
  // Panels shorter than half an oscillation and than the decay scale 1/|y|.
  const int panels = 8 + std::abs(dx) + std::abs(dy);
  const double h = std::numbers::pi / panels;
  double v = 0.0;
  for (int k = 0; k < panels; ++k) {
    v += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, k * h, (k + 1) * h, 0);
  }
  return v / (2.0 * std::numbers::pi);
}

PotentialKernel::PotentialKernel(int radius, int half_width, std::vector<double> table, double kappa_bar)
    : radius_(radius), half_width_(half_width), table_(std::move(table)), kappa_bar_(kappa_bar) {}

double PotentialKernel::operator()(int dx, int dy) const {
  if (std::abs(dx) > half_width_ || std::abs(dy) > half_width_) {
    throw ParameterError("potential_kernel: offset outside the solved box");
  }
  const int side = 2 * half_width_ + 1;
  return table_[static_cast<std::size_t>(dy + half_width_) * static_cast<std::size_t>(side) +
                static_cast<std::size_t>(dx + half_width_)];
}

PotentialKernel potential_kernel(int r) {
  if (r < 1) throw ParameterError("potential_kernel: radius must be at least 1");
  const int R = 4 * r;
  const int side = 2 * R + 1;
  auto cell = [side, R](int x, int y) {
    return static_cast<std::size_t>(y + R) * static_cast<std::size_t>(side) + static_cast<std::size_t>(x + R);
  };

  // Unknowns: |z|_inf < R, z != 0.
  std::vector<int> index(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), -1);
  int n = 0;
  for (int y = -R + 1; y < R; ++y) {
    for (int x = -R + 1; x < R; ++x) {
      if (x != 0 || y != 0) index[cell(x, y)] = n++;
    }
  }

  // Boundary values from the integral, one per symmetry orbit.
  std::vector<double> table(index.size(), 0.0);
  for (int j = 0; j <= R; ++j) {
    const double v = potential_kernel_exact(R, j);
    for (int sx : {-1, 1}) {
      for (int sy : {-1, 1}) {
        table[cell(sx * R, sy * j)] = v;
        table[cell(sy * j, sx * R)] = v;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int y = -R + 1; y < R; ++y) {
    for (int x = -R + 1; x < R; ++x) {
      const int row = index[cell(x, y)];
      if (row < 0) continue;
      triplets.emplace_back(row, row, 4.0);
      for (const auto& d : dirs) {
        const int nx = x + d[0];
        const int ny = y + d[1];
        const int col = index[cell(nx, ny)];
        if (col >= 0) {
          triplets.emplace_back(row, col, -1.0);
        } else {
          rhs[row] += table[cell(nx, ny)];
        }
      }
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw Error("potential_kernel: factorization failed");
  const Eigen::VectorXd sol = solver.solve(rhs);

  for (int y = -R + 1; y < R; ++y) {
    for (int x = -R + 1; x < R; ++x) {
      const int i = index[cell(x, y)];
      if (i >= 0) table[cell(x, y)] = sol[i];
    }
  }
  // Average each orbit of the square's symmetry group so the table is
  // exactly symmetric, not just up to solver round-off.
  for (int y = 0; y < R; ++y) {
    for (int x = y; x < R; ++x) {
      const std::array<std::size_t, 8> orbit{cell(x, y),  cell(-x, y),  cell(x, -y),  cell(-x, -y),
                                             cell(y, x),  cell(-y, x),  cell(y, -x),  cell(-y, -x)};
      double sum = 0.0;
      for (std::size_t c : orbit) sum += table[c];
      for (std::size_t c : orbit) table[c] = sum / 8.0;
    }
  }
  table[cell(0, 0)] = 0.0;
  const double kappa_bar = table[cell(r, 0)] - kG * std::log(static_cast<double>(r));
  return PotentialKernel(r, R, std::move(table), kappa_bar);
}

}  // namespace ltlab
