#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ltlab/gff.hpp"
#include "ltlab/lattice.hpp"
#include "ltlab/walk.hpp"

namespace ltlab {

enum class Mode { Thick, Thin, Light, Avoided };

std::string_view mode_name(Mode m) noexcept;
std::optional<Mode> parse_mode(std::string_view s) noexcept;

/// Level-set parameters at scale N. t_N is the rho-local time; a_N the
/// thick/thin threshold (unused for light/avoided, where it equals t_N).
struct Parameters {
  Mode mode = Mode::Thick;
  double theta = 1.0;
  double lambda = 0.0;
  int N = 2;
  double t_N = 0.0;
  double a_N = 0.0;

  /// t_N = 2 g theta (log N)^2, a_N = 2 g (sqrt(theta) +- lambda)^2 (log N)^2.
  static Parameters schedule(Mode mode, double theta, double lambda, int N);
  /// Explicit t_N / a_N (same domain checks as schedule).
  static Parameters explicit_values(Mode mode, double theta, double lambda, int N, double t_N, double a_N);

  double log_n() const noexcept;
  /// sqrt(2 a_N) - sqrt(2 t_N) for thick, sqrt(2 t_N) - sqrt(2 a_N) otherwise.
  double a_hat() const noexcept;
  void validate() const;
};

struct Normalizations {
  double W;      // N^2 (log N)^{-1/2} exp(-(sqrt(2t) - sqrt(2a))^2 / (2 g log N))
  double W_hat;  // N^2 exp(-t / (g log N))
  double K;      // N^2 (log N)^{-1/2} exp(-a_hat^2 / (2 g log N))
};

Normalizations normalizations(const Parameters& p);

/// K_N for a DGFF centering a_hat at scale N.
double dgff_normalization(double a_hat, int N);

std::vector<VertexId> thick_set(const LocalTimeField& L, const Parameters& p);
std::vector<VertexId> thin_set(const LocalTimeField& L, const Parameters& p);
/// {x : L(x) <= b}.
std::vector<VertexId> light_set(const LocalTimeField& L, double b);
/// {x : visits(x) = 0}.
std::vector<VertexId> avoided_set(const LocalTimeField& L);

std::size_t count_thick(const LocalTimeField& L, const Parameters& p);
std::size_t count_thin(const LocalTimeField& L, const Parameters& p);
std::size_t count_light(const LocalTimeField& L, double b);
std::size_t count_avoided(const LocalTimeField& L);

/// Weighted atoms (x/N, value) with common weight 1/normalization.
struct PointMeasure {
  double normalization = 1.0;
  std::vector<VertexId> vertices;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> value;

  std::size_t size() const noexcept { return value.size(); }
  double weight() const noexcept { return 1.0 / normalization; }
  double mass() const noexcept { return static_cast<double>(size()) / normalization; }
  void push(VertexId v, const Site& s, int N, double val);
};

/// PointMeasure plus a profile over the box {|z|_inf <= r} per atom, stored
/// row-major from (-r,-r): profiles[i * side^2 + k].
struct ProfileMeasure : PointMeasure {
  int radius = 0;
  std::vector<double> profiles;

  int side() const noexcept { return 2 * radius + 1; }
  double profile(std::size_t atom, int dx, int dy) const {
    const auto s = static_cast<std::size_t>(side());
    return profiles[atom * s * s + static_cast<std::size_t>(dy + radius) * s + static_cast<std::size_t>(dx + radius)];
  }
};

/// Atoms at every x in V with value (L(x) - a_N)/log N, weight 1/W_N.
PointMeasure zeta(const LocalTimeField& L, const Parameters& p);
/// Atoms at every x in V with raw value L(x), weight 1/W_hat_N; light
/// statistics window the values.
PointMeasure vartheta(const LocalTimeField& L, const Parameters& p);
/// Atoms at avoided points, weight 1/W_hat_N.
PointMeasure kappa(const LocalTimeField& L, const Parameters& p);

struct LocalOptions {
  // Keep atoms whose value lies in [lo, hi]; unset keeps all of V.
  std::optional<std::pair<double, double>> window = std::pair{-1.0, 1.0};
  // Restrict atoms to this vertex subset (e.g. inner_region); unset = all.
  std::optional<std::vector<VertexId>> subset;
};

/// Profiles z -> (L(x) - L(x+z))/log N; L read as 0 off V.
ProfileMeasure zeta_local(const LocalTimeField& L, const Parameters& p, int r, const LocalOptions& opts = {});
/// Avoided atoms with raw profiles z -> L(x+z).
ProfileMeasure kappa_local(const LocalTimeField& L, const Parameters& p, int r,
                           const std::optional<std::vector<VertexId>>& subset = std::nullopt);

/// Atoms (x/N, h(x) - a_hat), weight 1/K_N.
PointMeasure eta_dgff(const LatticeGraph& g, const GaussianField& h, double a_hat, int N);

struct AtomView {
  double x;
  double y;
  double value;
};

double integrate(const PointMeasure& m, const std::function<double(const AtomView&)>& f);

/// Mass of atoms with value in [lo, hi].
double windowed_mass(const PointMeasure& m, double lo, double hi);

}  // namespace ltlab
