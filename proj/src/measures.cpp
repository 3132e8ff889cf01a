#include "ltlab/measures.hpp"

#include <cmath>
#include <string>

#include "ltlab/error.hpp"
#include "ltlab/green.hpp"
#include "ltlab/simd/kernels.hpp"

namespace ltlab {

std::string_view mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::Thick: return "thick";
    case Mode::Thin: return "thin";
    case Mode::Light: return "light";
    case Mode::Avoided: return "avoided";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) noexcept {
  for (Mode m : {Mode::Thick, Mode::Thin, Mode::Light, Mode::Avoided}) {
    if (s == mode_name(m)) return m;
  }
  return std::nullopt;
}

double Parameters::log_n() const noexcept { return std::log(static_cast<double>(N)); }

double Parameters::a_hat() const noexcept {
  const double d = std::sqrt(2.0 * a_N) - std::sqrt(2.0 * t_N);
  return mode == Mode::Thick ? d : -d;
}

void Parameters::validate() const {
  if (N < 2) throw ParameterError("parameters: N must be >= 2");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("parameters: theta must be > 0");
  switch (mode) {
    case Mode::Thick:
      if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("parameters: thick mode needs lambda in (0,1)");
      break;
    case Mode::Thin:
      if (!(lambda > 0.0 && lambda < std::min(1.0, std::sqrt(theta)))) {
        throw ParameterError("parameters: thin mode needs lambda in (0, min(1, sqrt(theta)))");
      }
      break;
    case Mode::Light:
    case Mode::Avoided:
      if (!(theta < 1.0)) throw ParameterError("parameters: light/avoided modes need theta in (0,1)");
      break;
  }
  if (!(t_N >= 0.0) || !(a_N >= 0.0)) throw ParameterError("parameters: t_N and a_N must be >= 0");
}

Parameters Parameters::schedule(Mode mode, double theta, double lambda, int N) {
  Parameters p;
  p.mode = mode;
  p.theta = theta;
  p.lambda = lambda;
  p.N = N;
  if (N < 2) throw ParameterError("parameters: N must be >= 2");
  const double l2 = p.log_n() * p.log_n();
  p.t_N = 2.0 * kG * theta * l2;
  const double st = std::sqrt(std::max(theta, 0.0));
  switch (mode) {
    case Mode::Thick: p.a_N = 2.0 * kG * (st + lambda) * (st + lambda) * l2; break;
    case Mode::Thin: p.a_N = 2.0 * kG * (st - lambda) * (st - lambda) * l2; break;
    case Mode::Light:
    case Mode::Avoided: p.a_N = p.t_N; break;
  }
  p.validate();
  return p;
}

Parameters Parameters::explicit_values(Mode mode, double theta, double lambda, int N, double t_N, double a_N) {
  Parameters p{mode, theta, lambda, N, t_N, a_N};
  p.validate();
  return p;
}

double dgff_normalization(double a_hat, int N) {
  const double n = static_cast<double>(N);
  const double ln = std::log(n);
  return n * n / std::sqrt(ln) * std::exp(-a_hat * a_hat / (2.0 * kG * ln));
}

Normalizations normalizations(const Parameters& p) {
  const double n = static_cast<double>(p.N);
  const double ln = p.log_n();
  const double d = std::sqrt(2.0 * p.t_N) - std::sqrt(2.0 * p.a_N);
  Normalizations out{};
  out.W = n * n / std::sqrt(ln) * std::exp(-d * d / (2.0 * kG * ln));
  out.W_hat = n * n * std::exp(-p.t_N / (kG * ln));
  out.K = dgff_normalization(p.a_hat(), p.N);
  return out;
}

namespace {

template <class Pred>
std::vector<VertexId> collect(std::size_t n, Pred&& pred) {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (pred(v)) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

void require_mode(const Parameters& p, std::initializer_list<Mode> allowed, const char* what) {
  for (Mode m : allowed) {
    if (p.mode == m) return;
  }
  throw ParameterError(std::string(what) + ": not defined for mode " + std::string(mode_name(p.mode)));
}

std::vector<char> subset_mask(std::size_t n, const std::optional<std::vector<VertexId>>& subset) {
  std::vector<char> mask(n, subset ? 0 : 1);
  if (subset) {
    for (VertexId v : *subset) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw ParameterError("measures: subset vertex out of range");
      mask[static_cast<std::size_t>(v)] = 1;
    }
  }
  return mask;
}

// L(x + z), 0 off V.
double read_shifted(const LocalTimeField& L, const Site& s, int dx, int dy) {
  const auto w = L.graph->find({s.x + dx, s.y + dy});
  return w ? L.local_time[static_cast<std::size_t>(*w)] : 0.0;
}

}  // namespace

std::vector<VertexId> thick_set(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Thick}, "thick_set");
  return collect(L.size(), [&](std::size_t v) { return L.local_time[v] >= p.a_N; });
}

std::vector<VertexId> thin_set(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Thin}, "thin_set");
  return collect(L.size(), [&](std::size_t v) { return L.local_time[v] <= p.a_N; });
}

std::vector<VertexId> light_set(const LocalTimeField& L, double b) {
  return collect(L.size(), [&](std::size_t v) { return L.local_time[v] <= b; });
}

std::vector<VertexId> avoided_set(const LocalTimeField& L) {
  return collect(L.size(), [&](std::size_t v) { return L.visits[v] == 0; });
}

std::size_t count_thick(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Thick}, "count_thick");
  return simd::active().count_at_least(L.local_time.data(), L.size(), p.a_N);
}

std::size_t count_thin(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Thin}, "count_thin");
  return simd::active().count_at_most(L.local_time.data(), L.size(), p.a_N);
}

std::size_t count_light(const LocalTimeField& L, double b) {
  return simd::active().count_at_most(L.local_time.data(), L.size(), b);
}

std::size_t count_avoided(const LocalTimeField& L) {
  std::size_t n = 0;
  for (std::uint32_t v : L.visits) n += v == 0;
  return n;
}

void PointMeasure::push(VertexId v, const Site& s, int N, double val) {
  vertices.push_back(v);
  x.push_back(static_cast<double>(s.x) / N);
  y.push_back(static_cast<double>(s.y) / N);
  value.push_back(val);
}

PointMeasure zeta(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Thick, Mode::Thin}, "zeta");
  PointMeasure m;
  m.normalization = normalizations(p).W;
  const double ln = p.log_n();
  const auto& sites = L.graph->sites();
  for (std::size_t v = 0; v < L.size(); ++v) {
    m.push(static_cast<VertexId>(v), sites[v], p.N, (L.local_time[v] - p.a_N) / ln);
  }
  return m;
}

PointMeasure vartheta(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Light, Mode::Avoided}, "vartheta");
  PointMeasure m;
  m.normalization = normalizations(p).W_hat;
  const auto& sites = L.graph->sites();
  for (std::size_t v = 0; v < L.size(); ++v) m.push(static_cast<VertexId>(v), sites[v], p.N, L.local_time[v]);
  return m;
}

PointMeasure kappa(const LocalTimeField& L, const Parameters& p) {
  require_mode(p, {Mode::Light, Mode::Avoided}, "kappa");
  PointMeasure m;
  m.normalization = normalizations(p).W_hat;
  const auto& sites = L.graph->sites();
  for (VertexId v : avoided_set(L)) m.push(v, sites[static_cast<std::size_t>(v)], p.N, 0.0);
  return m;
}

ProfileMeasure zeta_local(const LocalTimeField& L, const Parameters& p, int r, const LocalOptions& opts) {
  require_mode(p, {Mode::Thick, Mode::Thin}, "zeta_local");
  if (r < 1) throw ParameterError("zeta_local: r must be >= 1");
  ProfileMeasure m;
  m.radius = r;
  m.normalization = normalizations(p).W;
  const double ln = p.log_n();
  const std::vector<char> mask = subset_mask(L.size(), opts.subset);
  const auto& sites = L.graph->sites();
  for (std::size_t v = 0; v < L.size(); ++v) {
    if (!mask[v]) continue;
    const double val = (L.local_time[v] - p.a_N) / ln;
    if (opts.window && (val < opts.window->first || val > opts.window->second)) continue;
    m.push(static_cast<VertexId>(v), sites[v], p.N, val);
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        m.profiles.push_back((L.local_time[v] - read_shifted(L, sites[v], dx, dy)) / ln);
      }
    }
  }
  return m;
}

ProfileMeasure kappa_local(const LocalTimeField& L, const Parameters& p, int r,
                           const std::optional<std::vector<VertexId>>& subset) {
  require_mode(p, {Mode::Light, Mode::Avoided}, "kappa_local");
  if (r < 1) throw ParameterError("kappa_local: r must be >= 1");
  ProfileMeasure m;
  m.radius = r;
  m.normalization = normalizations(p).W_hat;
  const std::vector<char> mask = subset_mask(L.size(), subset);
  const auto& sites = L.graph->sites();
  for (std::size_t v = 0; v < L.size(); ++v) {
    if (!mask[v] || L.visits[v] != 0) continue;
    m.push(static_cast<VertexId>(v), sites[v], p.N, 0.0);
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) m.profiles.push_back(read_shifted(L, sites[v], dx, dy));
    }
  }
  return m;
}

PointMeasure eta_dgff(const LatticeGraph& g, const GaussianField& h, double a_hat, int N) {
  if (h.size() != g.size()) throw ParameterError("eta_dgff: field size does not match graph");
  PointMeasure m;
  m.normalization = dgff_normalization(a_hat, N);
  for (std::size_t v = 0; v < g.size(); ++v) {
    m.push(static_cast<VertexId>(v), g.sites()[v], N, h.values[v] - a_hat);
  }
  return m;
}

double integrate(const PointMeasure& m, const std::function<double(const AtomView&)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += f({m.x[i], m.y[i], m.value[i]});
  return s * m.weight();
}

double windowed_mass(const PointMeasure& m, double lo, double hi) {
  // An empty window has zero mass even when the normalization underflowed.
  const std::size_t k = simd::active().count_in_range(m.value.data(), m.size(), lo, hi);
  return k == 0 ? 0.0 : static_cast<double>(k) * m.weight();
}

}  // namespace ltlab
