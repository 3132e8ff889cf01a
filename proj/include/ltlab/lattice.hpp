#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

namespace ltlab {

/// Open axis-aligned rectangle (x0,x1) x (y0,y1) in continuum coordinates.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

/// D = union of the interiors of finitely many rectangles.
class DomainSpec {
 public:
  DomainSpec() = default;
  explicit DomainSpec(std::vector<Rect> components);

  static DomainSpec unit_square() { return DomainSpec({Rect{}}); }
  static DomainSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<Rect>& components() const noexcept { return components_; }

  /// True when the closed l-infinity ball of radius r around (cx, cy) lies in
  /// D, i.e. d_inf((cx,cy), R^2 \ D) > r. Coordinates are in units where the
  /// rectangles are scaled by `scale`.
  bool contains_closed_square(double cx, double cy, double r, double scale = 1.0) const;

  double diameter() const;
  double area_upper_bound() const;

 private:
  std::vector<Rect> components_;
};

using VertexId = std::int32_t;
inline constexpr VertexId kRho = -1;

struct Site {
  int x = 0;
  int y = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

/// Wired graph V u {rho}: unit conductances, every lattice vertex of V has
/// degree 4, edges leaving V end at rho (with multiplicity). Vertices are
/// stored in row-major order (y, then x). Internally V lives on a padded
/// grid with a one-cell frame so that neighbour lookups never branch on the
/// bounding box.
class LatticeGraph {
 public:
  static constexpr int kDegree = 4;
  // Direction order used everywhere: +x, -x, +y, -y.
  static constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

  /// Build from an explicit vertex set (duplicates removed).
  static LatticeGraph from_sites(std::vector<Site> sites, int scale = 1,
                                 std::optional<DomainSpec> domain = std::nullopt);

  int scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return sites_.size(); }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  const Site& site(VertexId v) const { return sites_[static_cast<std::size_t>(v)]; }
  std::optional<VertexId> find(Site s) const noexcept;

  int rho_edges(VertexId v) const { return rho_edges_[static_cast<std::size_t>(v)]; }
  int degree(VertexId) const noexcept { return kDegree; }
  std::int64_t pi_rho() const noexcept { return static_cast<std::int64_t>(entry_cells_.size()); }
  std::array<VertexId, 4> neighbors(VertexId v) const;

  // Padded grid.
  int grid_width() const noexcept { return width_; }
  int grid_height() const noexcept { return height_; }
  Site grid_origin() const noexcept { return origin_; }
  std::size_t cell_of(VertexId v) const { return cells_[static_cast<std::size_t>(v)]; }
  VertexId vertex_at_cell(std::size_t c) const { return cell_vertex_[c]; }
  std::size_t cell_count() const noexcept { return cell_vertex_.size(); }
  std::array<std::ptrdiff_t, 4> cell_offsets() const noexcept {
    return {1, -1, static_cast<std::ptrdiff_t>(width_), -static_cast<std::ptrdiff_t>(width_)};
  }
  /// Entry cell of every rho-edge, multiplicity-weighted (length pi_rho).
  std::span<const std::uint32_t> entry_cells() const noexcept { return entry_cells_; }

  /// When V is a full rectangular block, its column/row counts.
  std::optional<std::array<int, 2>> block_shape() const noexcept { return block_shape_; }

  const std::optional<DomainSpec>& domain() const noexcept { return domain_; }

  nlohmann::json manifest() const;

 private:
  int scale_ = 1;
  std::vector<Site> sites_;
  std::vector<std::uint8_t> rho_edges_;
  int width_ = 0;
  int height_ = 0;
  Site origin_{};
  std::vector<std::size_t> cells_;
  std::vector<VertexId> cell_vertex_;
  std::vector<std::uint32_t> entry_cells_;
  std::optional<std::array<int, 2>> block_shape_;
  std::optional<DomainSpec> domain_;
};

/// Maximal admissible approximation {x : d_inf(x/N, R^2 \ D) > 1/N}.
LatticeGraph discretize(const DomainSpec& spec, int N);

/// {v : d_inf(v/N, R^2 \ D) > eps}; requires a graph built from a domain.
std::vector<VertexId> inner_region(const LatticeGraph& g, double eps);

/// Axis-aligned block of w x h vertices with lower-left corner at `corner`.
LatticeGraph block_graph(int w, int h, Site corner = {0, 0});

}  // namespace ltlab
