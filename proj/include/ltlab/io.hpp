#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltlab/gff.hpp"
#include "ltlab/green.hpp"
#include "ltlab/lattice.hpp"
#include "ltlab/measures.hpp"
#include "ltlab/walk.hpp"

namespace ltlab::io {

/// Shortest form is not wanted here: every number is written with 17
/// significant digits so values round-trip and diffs are meaningful.
std::string fmt17(double v);

std::uint64_t fnv1a(std::span<const unsigned char> bytes) noexcept;
std::string hex64(std::uint64_t v);

/// Files written under one directory, with a checksum per file.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::map<std::string, std::string>& checksums() const noexcept { return sums_; }

  std::string write(const std::string& name, std::span<const unsigned char> bytes);
  std::string write_text(const std::string& name, const std::string& text);
  std::string write_json(const std::string& name, const nlohmann::json& j);

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> sums_;
};

// CSV / binary encoders (return file contents).
std::string lattice_csv(const LatticeGraph& g);
std::string green_diagonal_csv(const LatticeGraph& g, std::span<const double> diag);
std::string kernel_csv(const PotentialKernel& a);
std::string field_csv(const LatticeGraph& g, std::span<const double> values);
std::string measure_csv(const PointMeasure& m);
std::string profile_csv(const ProfileMeasure& m);
std::vector<unsigned char> f64_le(std::span<const double> values);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples).
std::vector<unsigned char> pgm16(int width, int height, std::span<const std::uint16_t> pixels);

/// Field on the padded-grid bounding box, affine-clamped: lo -> 0, hi -> 65535.
/// Rows are flipped so y grows upwards in the image.
std::vector<unsigned char> render_field(const LatticeGraph& g, std::span<const double> values, double lo, double hi);
/// Marked vertices white on a grey V, black outside.
std::vector<unsigned char> render_points(const LatticeGraph& g, std::span<const VertexId> marked);

// Composite exports.
void export_lattice(OutputSet& out, const std::string& stem, const LatticeGraph& g);
void export_green(OutputSet& out, const std::string& stem, const GreenOperator& G);
void export_field(OutputSet& out, const std::string& stem, const LocalTimeField& f, bool csv = false);
void export_gaussian(OutputSet& out, const std::string& stem, const GaussianField& h, int N);

}  // namespace ltlab::io
