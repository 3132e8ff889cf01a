#include "ltlab/walk.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"

namespace ltlab {

namespace {

constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();

// Per-cell visit counters on the padded grid; cells outside V hold the
// sentinel so the step loop has a single exit test.
std::vector<std::uint32_t> counter_grid(const LatticeGraph& g) {
  std::vector<std::uint32_t> c(g.cell_count(), kOutside);
  for (std::size_t v = 0; v < g.size(); ++v) c[g.cell_of(static_cast<VertexId>(v))] = 0;
  return c;
}

struct Walker {
  const LatticeGraph& g;
  std::uint64_t seed;
  std::array<std::ptrdiff_t, 4> off;
  std::span<const std::uint32_t> entries;

  explicit Walker(const LatticeGraph& graph, std::uint64_t s)
      : g(graph), seed(s), off(graph.cell_offsets()), entries(graph.entry_cells()) {}

  template <class OnVisit>
  void run(std::uint64_t index, std::uint32_t* cells, OnVisit&& on_visit) const {
    RandomStream rs(seed, Domain::Excursion, index);
    std::ptrdiff_t c = entries[rs.bounded(entries.size())];
    StepBits bits(rs);
    for (;;) {
      std::uint32_t& n = cells[c];
      if (n == kOutside) return;
      ++n;
      on_visit(c);
      c += off[bits.next()];
    }
  }
};

std::uint64_t draw_excursion_count(std::uint64_t seed, std::uint32_t epoch, double mean) {
  if (!(mean > 0.0)) return 0;
  RandomStream rs(seed, domain_word(Domain::ExcursionCount, epoch), 0);
  std::poisson_distribution<std::uint64_t> pois(mean);
  return pois(rs);
}

// Visit counts per vertex for excursions [first, first + count).
std::vector<std::uint32_t> run_aggregated(const LatticeGraph& g, std::uint64_t seed, std::uint64_t first,
                                          std::uint64_t count, unsigned threads) {
  const Walker walker(g, seed);
  const std::vector<std::uint32_t> base = counter_grid(g);
  // Small batches are not worth a thread start; the merge is an integer sum,
  // so the split never changes the result.
  constexpr std::uint64_t kMinPerWorker = 2048;
  const unsigned workers = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(resolve_threads(threads), count / kMinPerWorker)));
  std::vector<std::vector<std::uint32_t>> grids(workers);
  parallel_ranges(static_cast<std::size_t>(count), workers, [&](std::size_t b, std::size_t e, unsigned w) {
    grids[w] = base;
    std::uint32_t* cells = grids[w].data();
    for (std::size_t k = b; k < e; ++k) walker.run(first + k, cells, [](std::ptrdiff_t) {});
  });

  std::vector<std::uint32_t> visits(g.size(), 0);
  for (const auto& grid : grids) {
    if (grid.empty()) continue;
    for (std::size_t v = 0; v < g.size(); ++v) visits[v] += grid[g.cell_of(static_cast<VertexId>(v))];
  }
  return visits;
}

void add_gamma_holding(const LatticeGraph& g, std::uint64_t seed, std::uint32_t epoch,
                       const std::vector<std::uint32_t>& new_visits, std::vector<double>& local_time,
                       unsigned threads) {
  const unsigned workers = g.size() < 65536 ? 1u : resolve_threads(threads);
  parallel_ranges(g.size(), workers, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t v = b; v < e; ++v) {
      const std::uint32_t n = new_visits[v];
      if (n == 0) continue;
      RandomStream rs(seed, domain_word(Domain::Holding, epoch), v);
      std::gamma_distribution<double> gamma(static_cast<double>(n), 1.0);
      double x = gamma(rs);
      while (!(x > 0.0)) x = gamma(rs);
      local_time[v] += x / LatticeGraph::kDegree;
    }
  });
}

void run_per_visit(const LatticeGraph& g, std::uint64_t seed, std::uint64_t first, std::uint64_t count,
                   std::vector<std::uint32_t>& visits, std::vector<double>& local_time) {
  const Walker walker(g, seed);
  std::vector<std::uint32_t> cells = counter_grid(g);
  std::vector<double> lt(g.cell_count(), 0.0);
  for (std::uint64_t k = first; k < first + count; ++k) {
    RandomStream hold(seed, Domain::HoldingPerVisit, k);
    walker.run(k, cells.data(), [&](std::ptrdiff_t c) {
      lt[static_cast<std::size_t>(c)] += hold.exponential() / LatticeGraph::kDegree;
    });
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t c = g.cell_of(static_cast<VertexId>(v));
    visits[v] += cells[c];
    local_time[v] += lt[c];
  }
}

void advance(LocalTimeField& f, double dt, unsigned threads) {
  const LatticeGraph& g = *f.graph;
  const std::uint32_t epoch = ++f.epoch;
  const std::uint64_t k = draw_excursion_count(f.seed, epoch, static_cast<double>(g.pi_rho()) * dt);
  const std::uint64_t first = f.excursions;
  f.t += dt;
  f.excursions += k;
  if (k == 0) return;
  if (f.holding == HoldingMode::PerVisit) {
    run_per_visit(g, f.seed, first, k, f.visits, f.local_time);
    return;
  }
  const std::vector<std::uint32_t> fresh = run_aggregated(g, f.seed, first, k, threads);
  for (std::size_t v = 0; v < fresh.size(); ++v) f.visits[v] += fresh[v];
  add_gamma_holding(g, f.seed, epoch, fresh, f.local_time, threads);
}

}  // namespace

LocalTimeField sample_field(std::shared_ptr<const LatticeGraph> g, double t, std::uint64_t seed,
                            const SimOptions& opts) {
  if (!g) throw ParameterError("sample_field: null graph");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("sample_field: t must be finite and >= 0");
  LocalTimeField f;
  f.graph = std::move(g);
  f.seed = seed;
  f.holding = opts.holding;
  f.local_time.assign(f.graph->size(), 0.0);
  f.visits.assign(f.graph->size(), 0);
  advance(f, t, opts.threads);
  return f;
}

LocalTimeField extend_field(const LocalTimeField& f, double dt, const SimOptions& opts) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ParameterError("extend_field: dt must be finite and >= 0");
  LocalTimeField out = f;
  if (dt == 0.0) return out;
  advance(out, dt, opts.threads);
  return out;
}

double single_site_sample(double gxx, double t, RandomStream& rng) {
  if (!(gxx >= 0.25)) throw ParameterError("single_site_sample: G(x,x) must be >= 1/4 (p = 1/(4G) in (0,1])");
  if (!(t >= 0.0)) throw ParameterError("single_site_sample: t must be >= 0");
  if (t == 0.0) return 0.0;
  std::poisson_distribution<std::uint64_t> pois(t / gxx);
  const std::uint64_t hits = pois(rng);
  if (hits == 0) return 0.0;
  const double p = 1.0 / (LatticeGraph::kDegree * gxx);
  std::uint64_t visits = hits;  // each Geometric(p) has support >= 1
  if (p < 1.0) {
    std::geometric_distribution<std::uint64_t> geo(p);
    for (std::uint64_t k = 0; k < hits; ++k) visits += geo(rng);
  }
  std::gamma_distribution<double> gamma(static_cast<double>(visits), 1.0);
  double x = gamma(rng);
  while (!(x > 0.0)) x = gamma(rng);
  return x / LatticeGraph::kDegree;
}

CoverResult cover_time(const LatticeGraph& g, std::uint64_t seed) {
  // 0 = unvisited, 1 = visited, 2 = outside V.
  std::vector<std::uint8_t> state(g.cell_count(), 2);
  for (std::size_t v = 0; v < g.size(); ++v) state[g.cell_of(static_cast<VertexId>(v))] = 0;
  std::size_t remaining = g.size();
  const auto off = g.cell_offsets();
  const auto entries = g.entry_cells();
  const double rate = static_cast<double>(g.pi_rho());

  RandomStream clock(seed, Domain::CoverClock, 0);
  CoverResult res;
  for (std::uint64_t k = 0;; ++k) {
    res.t += clock.exponential() / rate;
    res.excursions = k + 1;
    RandomStream rs(seed, Domain::Excursion, k);
    std::ptrdiff_t c = entries[rs.bounded(entries.size())];
    StepBits bits(rs);
    for (;;) {
      std::uint8_t& s = state[static_cast<std::size_t>(c)];
      if (s == 2) break;
      if (s == 0) {
        s = 1;
        if (--remaining == 0) {
          res.last = g.vertex_at_cell(static_cast<std::size_t>(c));
          return res;
        }
      }
      c += off[bits.next()];
    }
  }
}

}  // namespace ltlab
