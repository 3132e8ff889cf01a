#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ltlab/lattice.hpp"
#include "ltlab/rng.hpp"

namespace ltlab {

enum class HoldingMode {
  // One Gamma(visits, 1)/4 draw per vertex and epoch, keyed by
  // (seed, epoch, vertex). Any thread count gives identical fields.
  Aggregated,
  // One Exp(1)/4 draw per visit, excursions replayed in index order on a
  // single thread. Reference path for the aggregated one.
  PerVisit,
};

struct SimOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  HoldingMode holding = HoldingMode::Aggregated;
};

/// L_t(v) for all v in V, the local time at rho being t.
struct LocalTimeField {
  std::shared_ptr<const LatticeGraph> graph;
  double t = 0.0;
  std::vector<double> local_time;
  std::vector<std::uint32_t> visits;
  std::uint64_t excursions = 0;
  std::uint64_t seed = 0;
  // Number of sampling rounds so far (1 after sample_field, +1 per extension).
  std::uint32_t epoch = 0;
  HoldingMode holding = HoldingMode::Aggregated;

  std::size_t size() const noexcept { return local_time.size(); }
};

LocalTimeField sample_field(std::shared_ptr<const LatticeGraph> g, double t, std::uint64_t seed,
                            const SimOptions& opts = {});

/// Adds Poisson(pi_rho * dt) further excursions; the result has the law of
/// sample_field at t + dt. Randomness is keyed by the field's seed and the
/// next epoch, so the extension is reproducible.
LocalTimeField extend_field(const LocalTimeField& f, double dt, const SimOptions& opts = {});

/// Exact draw of L_t(x) for a degree-4 site with Green value gxx:
/// Poisson(t/gxx) excursions reach x, each visits it Geometric(1/(4 gxx))
/// times, and each visit holds Exp(1)/4.
double single_site_sample(double gxx, double t, RandomStream& rng);

struct CoverResult {
  double t = 0.0;  // rho-local time when the last vertex is first hit
  std::uint64_t excursions = 0;
  VertexId last = kRho;
};

CoverResult cover_time(const LatticeGraph& g, std::uint64_t seed);

}  // namespace ltlab
