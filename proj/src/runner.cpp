#include "ltlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ltlab/error.hpp"
#include "ltlab/gff.hpp"
#include "ltlab/green.hpp"
#include "ltlab/io.hpp"
#include "ltlab/measures.hpp"
#include "ltlab/oracle.hpp"
#include "ltlab/simd/kernels.hpp"
#include "ltlab/stats.hpp"
#include "ltlab/version.hpp"
#include "ltlab/walk.hpp"

namespace ltlab {

using nlohmann::json;

namespace {

const std::set<std::string> kModes{"thick", "thin", "light", "avoided", "isomorphism", "oracle-grid", "cover", "scaling"};

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config." + key + ": " + what);
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad(key, "expected an integer");
  return j.get<long long>();
}

template <class T, class F>
std::vector<T> get_list(const json& j, const std::string& key, F&& one) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) bad(key, "must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(one(j[i], key + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(one(j, key));
  }
  return out;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "domain") {
      c.domain = DomainSpec::from_json(v);
    } else if (key == "N") {
      c.N = get_list<int>(v, key, [](const json& e, const std::string& k) {
        const long long n = get_integer(e, k);
        if (n < 2 || n > 65536) bad(k, "must lie in [2, 65536]");
        return static_cast<int>(n);
      });
    } else if (key == "theta") {
      c.theta = get_list<double>(v, key, [](const json& e, const std::string& k) { return get_number(e, k); });
    } else if (key == "lambda") {
      c.lambda = get_number(v, key);
    } else if (key == "mode") {
      if (!v.is_string()) bad(key, "expected a string");
      c.mode = v.get<std::string>();
    } else if (key == "replicas") {
      c.replicas = static_cast<int>(get_integer(v, key));
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) bad(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "eps") {
      c.eps = get_number(v, key);
    } else if (key == "r") {
      c.r = static_cast<int>(get_integer(v, key));
    } else if (key == "b") {
      c.b = get_number(v, key);
    } else if (key == "t") {
      c.t = get_number(v, key);
    } else if (key == "block") {
      c.block = static_cast<int>(get_integer(v, key));
    } else if (key == "level") {
      if (!v.is_string()) bad(key, "expected a string");
      c.level = v.get<std::string>();
    } else if (key == "tolerance") {
      c.tolerance = get_number(v, key);
    } else if (key == "render") {
      if (!v.is_boolean()) bad(key, "expected true or false");
      c.render = v.get<bool>();
    } else if (key == "out") {
      if (!v.is_string()) bad(key, "expected a string");
      c.out = v.get<std::string>();
    } else if (key == "threads") {
      const long long n = get_integer(v, key);
      if (n < 0) bad(key, "must be >= 0");
      c.threads = static_cast<unsigned>(n);
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  return {{"domain", domain.to_json()}, {"N", N},       {"theta", theta},         {"lambda", lambda},
          {"mode", mode},               {"replicas", replicas}, {"seed", seed},   {"eps", eps},
          {"r", r},                     {"b", b},       {"t", t},                 {"block", block},
          {"level", level},             {"tolerance", tolerance}, {"render", render}, {"out", out}};
}

void RunConfig::validate() const {
  if (!kModes.count(mode)) bad("mode", "unknown mode '" + mode + "'");
  if (replicas < 1) bad("replicas", "must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) bad("eps", "must lie in (0, 0.5)");
  if (r < 0 || r > 32) bad("r", "must lie in [0, 32]");
  if (!(b >= 0.0)) bad("b", "must be >= 0");
  if (!(t >= 0.0)) bad("t", "must be >= 0");
  if (block < 1 || block > 12) bad("block", "must lie in [1, 12]");
  if (!(tolerance > 0.0)) bad("tolerance", "must be > 0");

  std::optional<Mode> level_mode;
  if (mode == "thick" || mode == "thin" || mode == "light" || mode == "avoided") {
    level_mode = parse_mode(mode);
  } else if (mode == "scaling") {
    if (level != "thick" && level != "avoided") bad("level", "scaling supports 'thick' or 'avoided'");
    level_mode = parse_mode(level);
    if (N.size() < 2) bad("N", "scaling needs at least two sizes");
  }
  if (level_mode) {
    for (double th : theta) {
      for (int n : N) {
        try {
          Parameters::schedule(*level_mode, th, lambda, n);
        } catch (const ParameterError& e) {
          throw ConfigError(std::string("config: ") + e.what() + " (theta=" + io::fmt17(th) +
                            ", lambda=" + io::fmt17(lambda) + ")");
        }
      }
    }
  }
}

namespace {

struct Context {
  const RunConfig& cfg;
  io::OutputSet out;
  json results = json::object();
  std::vector<std::string> failures;

  explicit Context(const RunConfig& c) : cfg(c), out(c.out) {}

  SimOptions sim() const { return SimOptions{cfg.threads, HoldingMode::Aggregated}; }

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::uint64_t replica_seed(std::uint64_t seed, int N, std::size_t theta_index, int replica) {
  return derive_seed(seed, (static_cast<std::uint64_t>(N) << 40) ^ (static_cast<std::uint64_t>(theta_index) << 32) ^
                               static_cast<std::uint64_t>(replica));
}

std::string tag(int N, double theta) {
  std::ostringstream s;
  s << "N" << N << "_theta" << theta;
  return s.str();
}

struct Csv {
  std::string text;
  explicit Csv(const std::string& header) : text(header + "\n") {}
  template <class... Ts>
  void row(const Ts&... xs) {
    bool first = true;
    ((text += (first ? "" : ","), text += cell(xs), first = false), ...);
    text += '\n';
  }
  static std::string cell(double v) { return io::fmt17(v); }
  static std::string cell(const std::string& s) { return s; }
  template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  static std::string cell(I v) { return std::to_string(v); }
};

json normalizations_json(const Parameters& p) {
  const Normalizations n = normalizations(p);
  return {{"N", p.N}, {"theta", p.theta}, {"lambda", p.lambda}, {"t_N", p.t_N}, {"a_N", p.a_N},
          {"a_hat", p.a_hat()}, {"W_N", n.W}, {"W_hat_N", n.W_hat}, {"K_N", n.K}};
}

std::shared_ptr<const LatticeGraph> make_graph(const RunConfig& cfg, int N) {
  return std::make_shared<const LatticeGraph>(discretize(cfg.domain, N));
}

std::vector<VertexId> inner(const RunConfig& cfg, const LatticeGraph& g) {
  return inner_region(g, cfg.eps * cfg.domain.diameter());
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// ---------------------------------------------------------------- thick/thin

void run_thick_thin(Context& ctx, Mode mode) {
  const RunConfig& cfg = ctx.cfg;
  Csv counts("N,theta,replica,seed,count,count_inner,zeta_mass_nonneg,max_L,min_L");
  json summary = json::array();
  for (std::size_t ti = 0; ti < cfg.theta.size(); ++ti) {
    const double theta = cfg.theta[ti];
    for (int N : cfg.N) {
      const Parameters p = Parameters::schedule(mode, theta, cfg.lambda, N);
      const auto g = make_graph(cfg, N);
      const auto in = inner(cfg, *g);
      std::vector<char> in_mask(g->size(), 0);
      for (VertexId v : in) in_mask[static_cast<std::size_t>(v)] = 1;

      const int side = 2 * cfg.r + 1;
      std::vector<double> prof_sum(static_cast<std::size_t>(side * side), 0.0);
      std::size_t prof_atoms = 0;
      std::vector<double> per_rep;
      for (int rep = 0; rep < cfg.replicas; ++rep) {
        const std::uint64_t seed = replica_seed(cfg.seed, N, ti, rep);
        const LocalTimeField f = sample_field(g, p.t_N, seed, ctx.sim());
        const auto set = mode == Mode::Thick ? thick_set(f, p) : thin_set(f, p);
        std::size_t n_inner = 0;
        for (VertexId v : set) n_inner += in_mask[static_cast<std::size_t>(v)];
        const PointMeasure z = zeta(f, p);
        const double mass = mode == Mode::Thick ? windowed_mass(z, 0.0, HUGE_VAL) : windowed_mass(z, -HUGE_VAL, 0.0);
        counts.row(N, theta, rep, std::to_string(seed), set.size(), n_inner, mass, max_of(f.local_time),
                   min_of(f.local_time));
        per_rep.push_back(static_cast<double>(set.size()));

        if (cfg.r > 0) {
          const ProfileMeasure pm = zeta_local(f, p, cfg.r, LocalOptions{std::pair{-1.0, 1.0}, in});
          for (std::size_t i = 0; i < pm.size(); ++i) {
            for (std::size_t k = 0; k < prof_sum.size(); ++k) prof_sum[k] += pm.profiles[i * prof_sum.size() + k];
          }
          prof_atoms += pm.size();
        }
        if (cfg.render && rep == 0) {
          const std::string stem = std::string(mode_name(mode)) + "_" + tag(N, theta);
          ctx.out.write(stem + "_field.pgm", io::render_field(*g, f.local_time, 0.0, max_of(f.local_time)));
          ctx.out.write(stem + "_set.pgm", io::render_points(*g, set));
        }
      }
      const MeanCI ci = mean_ci(per_rep);
      const LimitConstants lc = constants(theta, cfg.lambda);
      json s = normalizations_json(p);
      s["mean_count"] = ci.mean;
      s["count_std_error"] = ci.std_error;
      s["exponent_target"] = lc.exponent_thick;
      summary.push_back(s);

      if (cfg.r > 0 && prof_atoms > 0) {
        const PotentialKernel a = potential_kernel(cfg.r);
        const double sign = mode == Mode::Thick ? 1.0 : -1.0;
        const double alpha = 2.0 / std::sqrt(kG);
        const double pref = 2.0 * std::sqrt(kG) * (std::sqrt(theta) + sign * cfg.lambda) * alpha * cfg.lambda;
        Csv prof("dx,dy,mean_profile,target");
        for (int dy = -cfg.r; dy <= cfg.r; ++dy) {
          for (int dx = -cfg.r; dx <= cfg.r; ++dx) {
            const std::size_t k = static_cast<std::size_t>((dy + cfg.r) * side + (dx + cfg.r));
            prof.row(dx, dy, prof_sum[k] / static_cast<double>(prof_atoms), pref * a(dx, dy));
          }
        }
        ctx.out.write_text(std::string(mode_name(mode)) + "_profile_" + tag(N, theta) + ".csv", prof.text);
      }
    }
  }
  ctx.out.write_text(std::string(mode_name(mode)) + "_counts.csv", counts.text);
  ctx.results["summary"] = summary;
}

// ------------------------------------------------------------ light/avoided

void run_light_avoided(Context& ctx, Mode mode) {
  const RunConfig& cfg = ctx.cfg;
  Csv counts("N,theta,replica,seed,avoided,light,avoided_inner,light_positive_inner,kappa_mass");
  json summary = json::array();
  for (std::size_t ti = 0; ti < cfg.theta.size(); ++ti) {
    const double theta = cfg.theta[ti];
    for (int N : cfg.N) {
      const Parameters p = Parameters::schedule(mode, theta, 0.0, N);
      const auto g = make_graph(cfg, N);
      const auto in = inner(cfg, *g);

      std::optional<double> exact;
      if (g->block_shape() || g->size() <= 50000) {
        double e = 0.0;
        for (double gxx : green_diagonal(*g, DiagonalOptions{DiagonalMethod::Auto, 1e-8, cfg.threads, 1500})) {
          e += std::exp(-p.t_N / gxx);
        }
        exact = e;
      }

      const int side = 2 * cfg.r + 1;
      std::vector<double> s1(static_cast<std::size_t>(side * side), 0.0);
      std::vector<double> s2(s1.size(), 0.0);
      std::size_t atoms = 0;
      std::vector<double> avoided_counts;
      double inner_light = 0.0;
      double inner_avoided = 0.0;
      for (int rep = 0; rep < cfg.replicas; ++rep) {
        const std::uint64_t seed = replica_seed(cfg.seed, N, ti, rep);
        const LocalTimeField f = sample_field(g, p.t_N, seed, ctx.sim());
        const std::size_t n_av = count_avoided(f);
        const std::size_t n_light = count_light(f, cfg.b);
        std::size_t av_in = 0;
        std::size_t li_in = 0;
        for (VertexId v : in) {
          const auto i = static_cast<std::size_t>(v);
          if (f.visits[i] == 0) {
            ++av_in;
          } else if (f.local_time[i] <= cfg.b) {
            ++li_in;
          }
        }
        inner_avoided += static_cast<double>(av_in);
        inner_light += static_cast<double>(li_in);
        avoided_counts.push_back(static_cast<double>(n_av));
        counts.row(N, theta, rep, std::to_string(seed), n_av, n_light, av_in, li_in, kappa(f, p).mass());

        if (cfg.r > 0) {
          const ProfileMeasure pm = kappa_local(f, p, cfg.r, in);
          for (std::size_t i = 0; i < pm.size(); ++i) {
            for (std::size_t k = 0; k < s1.size(); ++k) {
              const double v = pm.profiles[i * s1.size() + k];
              s1[k] += v;
              s2[k] += v * v;
            }
          }
          atoms += pm.size();
        }
        if (cfg.render && rep == 0) {
          const std::string stem = std::string(mode_name(mode)) + "_" + tag(N, theta);
          ctx.out.write(stem + "_points.pgm", io::render_points(*g, mode == Mode::Avoided ? avoided_set(f) : light_set(f, cfg.b)));
          ctx.out.write(stem + "_field.pgm", io::render_field(*g, f.local_time, 0.0, max_of(f.local_time)));
        }
      }

      const MeanCI ci = mean_ci(avoided_counts);
      json s = normalizations_json(p);
      s["mean_avoided"] = ci.mean;
      s["avoided_std_error"] = ci.std_error;
      s["exponent_target"] = 2.0 * (1.0 - theta);
      if (exact) {
        s["exact_mean_avoided"] = *exact;
        if (cfg.replicas >= 2) {
          ctx.check(std::abs(ci.mean - *exact) <= 4.0 * ci.std_error,
                    "avoided mean " + io::fmt17(ci.mean) + " vs exact " + io::fmt17(*exact) + " at " + tag(N, theta));
        }
      }
      if (mode == Mode::Light && inner_avoided > 0.0) {
        const double ratio = inner_light / inner_avoided;
        const double target = mu_measure(theta, cfg.b) - 1.0;
        s["light_to_avoided_ratio"] = ratio;
        s["mu_target"] = target;
        ctx.check(std::abs(ratio / target - 1.0) <= 0.30,
                  "light/avoided ratio " + io::fmt17(ratio) + " vs mu " + io::fmt17(target) + " at " + tag(N, theta));
      }
      summary.push_back(s);

      if (cfg.r > 0 && atoms > 1) {
        const PotentialKernel a = potential_kernel(cfg.r);
        Csv prof("dx,dy,mean,variance,target_mean,target_variance");
        const double n = static_cast<double>(atoms);
        for (int dy = -cfg.r; dy <= cfg.r; ++dy) {
          for (int dx = -cfg.r; dx <= cfg.r; ++dx) {
            const std::size_t k = static_cast<std::size_t>((dy + cfg.r) * side + (dx + cfg.r));
            const double mean = s1[k] / n;
            const double var = (s2[k] - n * mean * mean) / (n - 1.0);
            const InterlacementMoments im = interlacement_moments(theta, a(dx, dy));
            prof.row(dx, dy, mean, var, im.mean, im.variance);
          }
        }
        ctx.out.write_text(std::string(mode_name(mode)) + "_profile_" + tag(N, theta) + ".csv", prof.text);
      }
    }
  }
  ctx.out.write_text(std::string(mode_name(mode)) + "_counts.csv", counts.text);
  ctx.results["summary"] = summary;
}

// -------------------------------------------------------------- isomorphism

void run_isomorphism(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto g = std::make_shared<const LatticeGraph>(block_graph(cfg.block, cfg.block));
  const GreenOperator G = compute_green(*g);
  const std::size_t n = g->size();
  const auto reps = static_cast<std::size_t>(cfg.replicas);

  std::vector<std::vector<double>> lhs(n, std::vector<double>(reps));
  std::vector<std::vector<double>> rhs(n, std::vector<double>(reps));
  RandomStream gauss(cfg.seed, Domain::Gaussian, 0);
  for (std::size_t k = 0; k < reps; ++k) {
    const LocalTimeField f = sample_field(g, cfg.t, derive_seed(cfg.seed, k), ctx.sim());
    const GaussianField h = sample_dgff(G, gauss);
    const GaussianField ht = sample_dgff(G, gauss);
    const auto l = dynkin_lhs(f, h);
    const auto r = dynkin_rhs(ht, cfg.t);
    for (std::size_t v = 0; v < n; ++v) {
      lhs[v][k] = l[v];
      rhs[v][k] = r[v];
    }
  }

  const double alpha = 0.01 / static_cast<double>(n);
  Csv sites("vertex,x,y,ks_statistic,p_value,mean_lhs,mean_rhs,expected_mean");
  double min_p = 1.0;
  for (std::size_t v = 0; v < n; ++v) {
    const TestResult ks = ks_two_sample(Sample(lhs[v]), Sample(rhs[v]));
    const double ml = mean_ci(lhs[v]).mean;
    const double mr = mean_ci(rhs[v]).mean;
    sites.row(v, g->sites()[v].x, g->sites()[v].y, ks.statistic, ks.p_value, ml, mr,
              cfg.t + 0.5 * G(static_cast<VertexId>(v), static_cast<VertexId>(v)));
    min_p = std::min(min_p, ks.p_value);
    ctx.check(ks.p_value > alpha, "Dynkin KS at vertex " + std::to_string(v) + " p=" + io::fmt17(ks.p_value));
  }

  Csv pairs("u,v,mean_lhs_product,mean_rhs_product,z");
  std::size_t worst_pair = 0;
  double worst_z = 0.0;
  std::size_t idx = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = u + 1; w < n; ++w, ++idx) {
      std::vector<double> pl(reps);
      std::vector<double> pr(reps);
      for (std::size_t k = 0; k < reps; ++k) {
        pl[k] = lhs[u][k] * lhs[w][k];
        pr[k] = rhs[u][k] * rhs[w][k];
      }
      const MeanCI a = mean_ci(pl);
      const MeanCI b = mean_ci(pr);
      const double se = std::hypot(a.std_error, b.std_error);
      const double z = se > 0.0 ? (a.mean - b.mean) / se : 0.0;
      pairs.row(u, w, a.mean, b.mean, z);
      if (std::abs(z) > worst_z) {
        worst_z = std::abs(z);
        worst_pair = idx;
      }
      ctx.check(std::abs(z) <= 4.0, "Dynkin pair moment (" + std::to_string(u) + "," + std::to_string(w) +
                                        ") z=" + io::fmt17(z));
    }
  }
  ctx.out.write_text("isomorphism_sites.csv", sites.text);
  ctx.out.write_text("isomorphism_pairs.csv", pairs.text);
  ctx.results["vertices"] = n;
  ctx.results["pairs"] = idx;
  ctx.results["worst_pair_index"] = worst_pair;
  ctx.results["worst_pair_z"] = worst_z;
  ctx.results["min_ks_p"] = min_p;
}

// -------------------------------------------------------------- oracle grid

void run_oracle_grid(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto n = static_cast<std::size_t>(cfg.replicas);
  Csv grid("Gxx,t,ks_statistic,p_value,mean,mean_z,variance,variance_target,"
           "upper_a,upper_mc,upper_bound,lower_a,lower_mc,lower_bound,light_b,light_mc,light_bound");
  std::uint64_t index = 0;
  for (double gxx : {0.25, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 5.0, 20.0}) {
      RandomStream rs(cfg.seed, Domain::SingleSite, index++);
      std::vector<double> xs(n);
      for (double& x : xs) x = single_site_sample(gxx, t, rs);
      const Sample s(xs);
      const SiteLaw law(gxx, t);
      const std::vector<double> F = law.cdf_sorted(s.values());
      std::vector<double> F_left = F;
      for (std::size_t i = 0; i < n && s.values()[i] <= 0.0; ++i) F_left[i] = 0.0;
      const TestResult ks = ks_one_sample(s, F, F_left);
      const MeanCI ci = mean_ci(xs);
      const double var = sample_variance(xs);

      const double sd = std::sqrt(2.0 * t * gxx);
      const double ua = t + 2.0 * sd;
      const double la = 0.25 * t;
      const double lb = 0.25 * gxx;
      double up = 0.0, lo = 0.0, li = 0.0;
      for (double x : xs) {
        up += x >= ua;
        lo += (x - la >= -0.5 * la) && (x - la <= 0.5 * la);
        li += x <= lb;
      }
      up /= static_cast<double>(n);
      lo /= static_cast<double>(n);
      li /= static_cast<double>(n);
      const double ub = upper_tail_bound(gxx, t, ua, 0.0);
      const double lwb = lower_tail_bound(gxx, t, la, -0.5 * la, 0.5 * la);
      const double lib = light_bound(gxx, t, lb);
      auto slack = [n](double p) { return 3.0 * std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(n)) / static_cast<double>(n)); };

      grid.row(gxx, t, ks.statistic, ks.p_value, ci.mean, (ci.mean - t) / ci.std_error, var, 2.0 * t * gxx, ua, up,
               ub, la, lo, lwb, lb, li, lib);
      const std::string where = " at Gxx=" + io::fmt17(gxx) + " t=" + io::fmt17(t);
      ctx.check(ks.p_value > 0.01 / 12.0, "site-law KS p=" + io::fmt17(ks.p_value) + where);
      ctx.check(up <= ub + slack(ub), "upper tail bound" + where);
      ctx.check(lo <= lwb + slack(lwb), "lower tail bound" + where);
      ctx.check(li <= lib + slack(lib), "light bound" + where);
    }
  }
  ctx.out.write_text("oracle_grid.csv", grid.text);
}

// -------------------------------------------------------------------- cover

void run_cover(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Csv rows("N,replica,seed,cover_t,ratio,excursions");
  json summary = json::array();
  double prev_median = -1.0;
  for (int N : cfg.N) {
    const auto g = make_graph(cfg, N);
    const double scale = 2.0 * kG * std::log(static_cast<double>(N)) * std::log(static_cast<double>(N));
    std::vector<double> ratios;
    for (int rep = 0; rep < cfg.replicas; ++rep) {
      const std::uint64_t seed = replica_seed(cfg.seed, N, 0, rep);
      const CoverResult c = cover_time(*g, seed);
      ratios.push_back(c.t / scale);
      rows.row(N, rep, std::to_string(seed), c.t, c.t / scale, c.excursions);
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    summary.push_back({{"N", N}, {"median_ratio", median}, {"mean_ratio", mean_ci(ratios).mean}});
    ctx.check(median >= 0.5 && median <= 1.6, "cover ratio median " + io::fmt17(median) + " at N=" + std::to_string(N));
    if (prev_median >= 0.0) ctx.check(median >= prev_median, "cover ratio median not increasing at N=" + std::to_string(N));
    prev_median = median;
  }
  ctx.out.write_text("cover.csv", rows.text);
  ctx.results["summary"] = summary;
}

// ------------------------------------------------------------------ scaling

void run_scaling(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Mode level = *parse_mode(cfg.level);
  const double theta = cfg.theta.front();
  Csv rows("N,mean_count,std_error,exact_mean");
  std::vector<std::pair<double, double>> mc;
  std::vector<std::pair<double, double>> exact_pts;
  for (int N : cfg.N) {
    const Parameters p = Parameters::schedule(level, theta, cfg.lambda, N);
    const auto g = make_graph(cfg, N);
    std::vector<double> c;
    for (int rep = 0; rep < cfg.replicas; ++rep) {
      const LocalTimeField f = sample_field(g, p.t_N, replica_seed(cfg.seed, N, 0, rep), ctx.sim());
      c.push_back(static_cast<double>(level == Mode::Thick ? count_thick(f, p) : count_avoided(f)));
    }
    const MeanCI ci = mean_ci(c);
    double exact = std::nan("");
    if (level == Mode::Avoided && (g->block_shape() || g->size() <= 50000)) {
      exact = 0.0;
      for (double gxx : green_diagonal(*g)) exact += std::exp(-p.t_N / gxx);
      exact_pts.emplace_back(N, exact);
    }
    rows.row(N, ci.mean, ci.std_error, exact);
    if (ci.mean > 0.0) mc.emplace_back(N, ci.mean);
  }
  ctx.out.write_text("scaling_" + cfg.level + ".csv", rows.text);

  const double target = level == Mode::Thick ? 2.0 * (1.0 - cfg.lambda * cfg.lambda) : 2.0 * (1.0 - theta);
  json rep{{"level", cfg.level}, {"theta", theta}, {"lambda", cfg.lambda}, {"target_exponent", target}};
  if (mc.size() >= 2) {
    const SlopeFit fit = loglog_slope(mc);
    rep["slope"] = fit.slope;
    rep["slope_std_error"] = fit.std_error;
    ctx.check(std::abs(fit.slope - target) <= cfg.tolerance,
              "scaling slope " + io::fmt17(fit.slope) + " vs target " + io::fmt17(target));
  } else {
    ctx.check(false, "scaling: fewer than two sizes with nonzero counts");
  }
  if (exact_pts.size() >= 2) rep["exact_slope"] = loglog_slope(exact_pts).slope;
  ctx.out.write_json("exponent_report.json", rep);
  ctx.results["exponent"] = rep;
}

RunReport finish(Context& ctx, double seconds) {
  RunReport r;
  json m;
  m["tool"] = "ltlab";
  m["version"] = kVersion;
  m["mode"] = ctx.cfg.mode;
  m["seed"] = ctx.cfg.seed;
  m["config"] = ctx.cfg.to_json();
  m["simd"] = simd::active().name;
  m["results"] = ctx.results;
  m["outputs"] = ctx.out.checksums();
  m["assertions"] = {{"passed", ctx.failures.empty()}, {"failures", ctx.failures}};
  m["wall_time_s"] = seconds;
  io::OutputSet(ctx.out.dir()).write_json("manifest.json", m);
  r.manifest = std::move(m);
  r.failures = ctx.failures;
  return r;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode == "scaling") return scaling_study(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx(cfg);
  if (cfg.mode == "thick") {
    run_thick_thin(ctx, Mode::Thick);
  } else if (cfg.mode == "thin") {
    run_thick_thin(ctx, Mode::Thin);
  } else if (cfg.mode == "light") {
    run_light_avoided(ctx, Mode::Light);
  } else if (cfg.mode == "avoided") {
    run_light_avoided(ctx, Mode::Avoided);
  } else if (cfg.mode == "isomorphism") {
    run_isomorphism(ctx);
  } else if (cfg.mode == "oracle-grid") {
    run_oracle_grid(ctx);
  } else if (cfg.mode == "cover") {
    run_cover(ctx);
  }
  return finish(ctx, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

RunReport scaling_study(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.mode = "scaling";
  c.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx(c);
  run_scaling(ctx);
  return finish(ctx, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace ltlab
