#include "ltlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ltlab/error.hpp"

namespace ltlab {

DomainSpec::DomainSpec(std::vector<Rect> components) : components_(std::move(components)) {
  if (components_.empty()) throw ParameterError("domain: at least one rectangle is required");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Rect& r = components_[i];
    if (!std::isfinite(r.x0) || !std::isfinite(r.x1) || !std::isfinite(r.y0) ||
        !std::isfinite(r.y1)) {
      throw ParameterError("domain: rectangle " + std::to_string(i) + " has non-finite corners");
    }
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) {
      throw ParameterError("domain: rectangle " + std::to_string(i) +
                           " must have positive width and height");
    }
  }
}

DomainSpec DomainSpec::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("domain: expected an array of {x0,y0,x1,y1} objects");
  std::vector<Rect> rects;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    for (const char* key : {"x0", "y0", "x1", "y1"}) {
      if (!e.contains(key) || !e[key].is_number()) {
        throw ConfigError("domain[" + std::to_string(i) + "]: missing numeric field '" + key + "'");
      }
    }
    rects.push_back({e["x0"].get<double>(), e["y0"].get<double>(), e["x1"].get<double>(),
                     e["y1"].get<double>()});
  }
  try {
    return DomainSpec(std::move(rects));
  } catch (const ParameterError& err) {
    throw ConfigError(err.what());
  }
}

nlohmann::json DomainSpec::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const Rect& r : components_) j.push_back({{"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}});
  return j;
}

namespace {

struct Interval {
  double lo;
  double hi;
};

// Closed [lo, hi] covered by a union of open intervals.
bool closed_interval_covered(double lo, double hi, std::vector<Interval>& open) {
  std::sort(open.begin(), open.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double cur = lo;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  for (;;) {
    while (i < open.size() && open[i].lo < cur) {
      best = std::max(best, open[i].hi);
      ++i;
    }
    if (best <= cur) return false;
    if (best > hi) return true;
    cur = best;
  }
}

}  // namespace

bool DomainSpec::contains_closed_square(double cx, double cy, double r, double scale) const {
  const double qx0 = cx - r;
  const double qx1 = cx + r;
  const double qy0 = cy - r;
  const double qy1 = cy + r;

  if (components_.size() == 1) {
    const Rect& c = components_.front();
    return qx0 > c.x0 * scale && qx1 < c.x1 * scale && qy0 > c.y0 * scale && qy1 < c.y1 * scale;
  }

  // The set of rectangles whose open x-range contains x is constant between
  // consecutive breakpoints, so probing breakpoints and midpoints suffices.
  std::vector<double> xs{qx0, qx1};
  for (const Rect& c : components_) {
    for (double b : {c.x0 * scale, c.x1 * scale}) {
      if (b > qx0 && b < qx1) xs.push_back(b);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> probes;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    probes.push_back(xs[i]);
    if (i + 1 < xs.size()) probes.push_back(0.5 * (xs[i] + xs[i + 1]));
  }

  std::vector<Interval> open;
  for (double x : probes) {
    open.clear();
    for (const Rect& c : components_) {
      if (c.x0 * scale < x && x < c.x1 * scale) open.push_back({c.y0 * scale, c.y1 * scale});
    }
    if (!closed_interval_covered(qy0, qy1, open)) return false;
  }
  return true;
}

double DomainSpec::diameter() const {
  std::vector<std::array<double, 2>> corners;
  for (const Rect& c : components_) {
    corners.push_back({c.x0, c.y0});
    corners.push_back({c.x0, c.y1});
    corners.push_back({c.x1, c.y0});
    corners.push_back({c.x1, c.y1});
  }
  double d = 0.0;
  for (const auto& a : corners) {
    for (const auto& b : corners) d = std::max(d, std::hypot(a[0] - b[0], a[1] - b[1]));
  }
  return d;
}

double DomainSpec::area_upper_bound() const {
  double a = 0.0;
  for (const Rect& c : components_) a += (c.x1 - c.x0) * (c.y1 - c.y0);
  return a;
}

LatticeGraph LatticeGraph::from_sites(std::vector<Site> sites, int scale,
                                      std::optional<DomainSpec> domain) {
  if (sites.empty()) throw DomainTooSmall("lattice: vertex set is empty");
  std::sort(sites.begin(), sites.end(),
            [](const Site& a, const Site& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

  LatticeGraph g;
  g.scale_ = scale;
  g.domain_ = std::move(domain);
  g.sites_ = std::move(sites);

  int xmin = std::numeric_limits<int>::max();
  int xmax = std::numeric_limits<int>::min();
  int ymin = xmin;
  int ymax = xmax;
  for (const Site& s : g.sites_) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  g.origin_ = {xmin - 1, ymin - 1};
  g.width_ = xmax - xmin + 3;
  g.height_ = ymax - ymin + 3;
  g.cell_vertex_.assign(static_cast<std::size_t>(g.width_) * static_cast<std::size_t>(g.height_), kRho);
  g.cells_.resize(g.sites_.size());
  for (std::size_t v = 0; v < g.sites_.size(); ++v) {
    const Site& s = g.sites_[v];
    const std::size_t c = static_cast<std::size_t>(s.y - g.origin_.y) * static_cast<std::size_t>(g.width_) +
                          static_cast<std::size_t>(s.x - g.origin_.x);
    g.cells_[v] = c;
    g.cell_vertex_[c] = static_cast<VertexId>(v);
  }

  const auto offsets = g.cell_offsets();
  g.rho_edges_.resize(g.sites_.size());
  for (std::size_t v = 0; v < g.sites_.size(); ++v) {
    int k = 0;
    for (auto off : offsets) {
      const auto nc = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(g.cells_[v]) + off);
      if (g.cell_vertex_[nc] == kRho) {
        ++k;
        g.entry_cells_.push_back(static_cast<std::uint32_t>(g.cells_[v]));
      }
    }
    g.rho_edges_[v] = static_cast<std::uint8_t>(k);
  }

  const auto bw = static_cast<std::size_t>(xmax - xmin + 1);
  const auto bh = static_cast<std::size_t>(ymax - ymin + 1);
  if (bw * bh == g.sites_.size()) g.block_shape_ = std::array<int, 2>{xmax - xmin + 1, ymax - ymin + 1};
  return g;
}

std::optional<VertexId> LatticeGraph::find(Site s) const noexcept {
  const int cx = s.x - origin_.x;
  const int cy = s.y - origin_.y;
  if (cx < 0 || cy < 0 || cx >= width_ || cy >= height_) return std::nullopt;
  const VertexId v = cell_vertex_[static_cast<std::size_t>(cy) * static_cast<std::size_t>(width_) +
                                  static_cast<std::size_t>(cx)];
  if (v == kRho) return std::nullopt;
  return v;
}

std::array<VertexId, 4> LatticeGraph::neighbors(VertexId v) const {
  std::array<VertexId, 4> out{};
  const auto offsets = cell_offsets();
  for (int d = 0; d < 4; ++d) {
    out[d] = cell_vertex_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(cell_of(v)) + offsets[d])];
  }
  return out;
}

nlohmann::json LatticeGraph::manifest() const {
  nlohmann::json j{{"N", scale_}, {"num_vertices", sites_.size()}, {"pi_rho", pi_rho()}};
  if (domain_) j["domain"] = domain_->to_json();
  return j;
}

LatticeGraph discretize(const DomainSpec& spec, int N) {
  if (N < 2) throw ParameterError("discretize: N must be at least 2");
  double bx0 = std::numeric_limits<double>::max();
  double by0 = bx0;
  double bx1 = std::numeric_limits<double>::lowest();
  double by1 = bx1;
  for (const Rect& r : spec.components()) {
    bx0 = std::min(bx0, r.x0);
    by0 = std::min(by0, r.y0);
    bx1 = std::max(bx1, r.x1);
    by1 = std::max(by1, r.y1);
  }
  const double n = static_cast<double>(N);
  const int ix0 = static_cast<int>(std::floor(bx0 * n));
  const int ix1 = static_cast<int>(std::ceil(bx1 * n));
  const int iy0 = static_cast<int>(std::floor(by0 * n));
  const int iy1 = static_cast<int>(std::ceil(by1 * n));

  std::vector<Site> sites;
  for (int y = iy0; y <= iy1; ++y) {
    for (int x = ix0; x <= ix1; ++x) {
      if (spec.contains_closed_square(x, y, 1.0, n)) sites.push_back({x, y});
    }
  }
  if (sites.empty()) {
    throw DomainTooSmall("discretize: no lattice point lies deeper than 1/N inside the domain (N=" +
                         std::to_string(N) + ")");
  }
  return LatticeGraph::from_sites(std::move(sites), N, spec);
}

std::vector<VertexId> inner_region(const LatticeGraph& g, double eps) {
  if (!g.domain()) throw ParameterError("inner_region: graph carries no continuum domain");
  if (!(eps > 0.0)) throw ParameterError("inner_region: eps must be positive");
  const double n = g.scale();
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Site& s = g.sites()[v];
    if (g.domain()->contains_closed_square(s.x, s.y, eps * n, n)) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

LatticeGraph block_graph(int w, int h, Site corner) {
  if (w < 1 || h < 1) throw ParameterError("block_graph: sides must be positive");
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) sites.push_back({corner.x + x, corner.y + y});
  }
  return LatticeGraph::from_sites(std::move(sites));
}

}  // namespace ltlab
