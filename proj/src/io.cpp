#include "ltlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ltlab/error.hpp"

namespace ltlab::io {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("output: cannot create directory " + dir_.string() + ": " + ec.message());
}

std::string OutputSet::write(const std::string& name, std::span<const unsigned char> bytes) {
  const auto path = dir_ / name;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("output: cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("output: write failed for " + path.string());
  std::string sum = hex64(fnv1a(bytes));
  sums_[name] = sum;
  return sum;
}

std::string OutputSet::write_text(const std::string& name, const std::string& text) {
  return write(name, {reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

std::string OutputSet::write_json(const std::string& name, const nlohmann::json& j) {
  return write_text(name, j.dump(2) + "\n");
}

std::string lattice_csv(const LatticeGraph& g) {
  std::string s = "id,x,y,rho_edges\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Site& p = g.sites()[v];
    s += std::to_string(v) + ',' + std::to_string(p.x) + ',' + std::to_string(p.y) + ',' +
         std::to_string(g.rho_edges(static_cast<VertexId>(v))) + '\n';
  }
  return s;
}

std::string green_diagonal_csv(const LatticeGraph& g, std::span<const double> diag) {
  if (diag.size() != g.size()) throw ParameterError("green_diagonal_csv: size mismatch");
  std::string s = "id,x,y,G\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Site& p = g.sites()[v];
    s += std::to_string(v) + ',' + std::to_string(p.x) + ',' + std::to_string(p.y) + ',' + fmt17(diag[v]) + '\n';
  }
  return s;
}

std::string kernel_csv(const PotentialKernel& a) {
  std::string s = "dx,dy,a\n";
  const int r = a.radius();
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      s += std::to_string(dx) + ',' + std::to_string(dy) + ',' + fmt17(a(dx, dy)) + '\n';
    }
  }
  return s;
}

std::string field_csv(const LatticeGraph& g, std::span<const double> values) {
  if (values.size() != g.size()) throw ParameterError("field_csv: size mismatch");
  std::string s = "id,x,y,value\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Site& p = g.sites()[v];
    s += std::to_string(v) + ',' + std::to_string(p.x) + ',' + std::to_string(p.y) + ',' + fmt17(values[v]) + '\n';
  }
  return s;
}

std::string measure_csv(const PointMeasure& m) {
  std::string s = "x,y,value\n";
  for (std::size_t i = 0; i < m.size(); ++i) s += fmt17(m.x[i]) + ',' + fmt17(m.y[i]) + ',' + fmt17(m.value[i]) + '\n';
  return s;
}

std::string profile_csv(const ProfileMeasure& m) {
  const int r = m.radius;
  std::string s = "x,y,value";
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) s += ",p(" + std::to_string(dx) + ';' + std::to_string(dy) + ')';
  }
  s += '\n';
  const auto k = static_cast<std::size_t>(m.side() * m.side());
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += fmt17(m.x[i]) + ',' + fmt17(m.y[i]) + ',' + fmt17(m.value[i]);
    for (std::size_t j = 0; j < k; ++j) s += ',' + fmt17(m.profiles[i * k + j]);
    s += '\n';
  }
  return s;
}

std::vector<unsigned char> f64_le(std::span<const double> values) {
  std::vector<unsigned char> out(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &values[i], 8);
    for (int b = 0; b < 8; ++b) out[i * 8 + static_cast<std::size_t>(b)] = static_cast<unsigned char>(bits >> (8 * b));
  }
  return out;
}

std::vector<unsigned char> pgm16(int width, int height, std::span<const std::uint16_t> pixels) {
  if (width <= 0 || height <= 0 || pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ParameterError("pgm16: bad dimensions");
  }
  const std::string header = "P5\n" + std::to_string(width) + ' ' + std::to_string(height) + "\n65535\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + 2 * pixels.size());
  for (std::uint16_t p : pixels) {
    out.push_back(static_cast<unsigned char>(p >> 8));
    out.push_back(static_cast<unsigned char>(p & 0xFF));
  }
  return out;
}

namespace {

std::size_t image_index(const LatticeGraph& g, std::size_t cell) {
  const auto w = static_cast<std::size_t>(g.grid_width());
  const auto h = static_cast<std::size_t>(g.grid_height());
  const std::size_t row = cell / w;
  return (h - 1 - row) * w + cell % w;
}

}  // namespace

std::vector<unsigned char> render_field(const LatticeGraph& g, std::span<const double> values, double lo, double hi) {
  if (values.size() != g.size()) throw ParameterError("render_field: size mismatch");
  if (!(hi > lo)) throw ParameterError("render_field: need hi > lo");
  std::vector<std::uint16_t> px(g.cell_count(), 0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const double u = std::clamp((values[v] - lo) / (hi - lo), 0.0, 1.0);
    px[image_index(g, g.cell_of(static_cast<VertexId>(v)))] = static_cast<std::uint16_t>(std::lround(u * 65535.0));
  }
  return pgm16(g.grid_width(), g.grid_height(), px);
}

std::vector<unsigned char> render_points(const LatticeGraph& g, std::span<const VertexId> marked) {
  std::vector<std::uint16_t> px(g.cell_count(), 0);
  for (std::size_t v = 0; v < g.size(); ++v) px[image_index(g, g.cell_of(static_cast<VertexId>(v)))] = 16384;
  for (VertexId v : marked) px[image_index(g, g.cell_of(v))] = 65535;
  return pgm16(g.grid_width(), g.grid_height(), px);
}

void export_lattice(OutputSet& out, const std::string& stem, const LatticeGraph& g) {
  out.write_json(stem + ".json", g.manifest());
  out.write_text(stem + "_vertices.csv", lattice_csv(g));
}

void export_green(OutputSet& out, const std::string& stem, const GreenOperator& G) {
  const Eigen::MatrixXd& m = G.matrix();
  std::vector<double> row_major(static_cast<std::size_t>(m.size()));
  const auto n = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_major[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  const auto bytes = f64_le(row_major);
  const std::string sum = out.write(stem + ".f64", bytes);
  out.write_json(stem + ".json", {{"n", n}, {"layout", "row-major little-endian float64"}, {"checksum", sum}});
}

void export_field(OutputSet& out, const std::string& stem, const LocalTimeField& f, bool csv) {
  const std::string sum = out.write(stem + ".f64", f64_le(f.local_time));
  out.write_json(stem + ".json", {{"N", f.graph->scale()},
                                  {"t", f.t},
                                  {"seed", f.seed},
                                  {"excursion_count", f.excursions},
                                  {"num_vertices", f.size()},
                                  {"covariance_id", "local-time"},
                                  {"checksum", sum}});
  if (csv) out.write_text(stem + ".csv", field_csv(*f.graph, f.local_time));
}

void export_gaussian(OutputSet& out, const std::string& stem, const GaussianField& h, int N) {
  const std::string sum = out.write(stem + ".f64", f64_le(h.values));
  out.write_json(stem + ".json", {{"N", N},
                                  {"seed", h.seed},
                                  {"num_vertices", h.size()},
                                  {"covariance_id", h.covariance_id},
                                  {"checksum", sum}});
}

}  // namespace ltlab::io
