#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ltlab/error.hpp"
#include "ltlab/green.hpp"
#include "ltlab/measures.hpp"

using namespace ltlab;

namespace {

// Hand-made field on a block: L(x, y) = x + 10 y, no visits where L = 0.
LocalTimeField ramp(int w, int h) {
  LocalTimeField f;
  f.graph = std::make_shared<const LatticeGraph>(block_graph(w, h));
  for (const Site& s : f.graph->sites()) {
    const double v = s.x + 10.0 * s.y;
    f.local_time.push_back(v);
    f.visits.push_back(v > 0.0 ? 1u : 0u);
  }
  return f;
}

}  // namespace

TEST(Parameters, Schedule) {
  const Parameters p = Parameters::schedule(Mode::Thick, 1.0, 0.3, 256);
  const double l2 = std::log(256.0) * std::log(256.0);
  EXPECT_NEAR(p.t_N, 2.0 * kG * l2, 1e-12);
  EXPECT_NEAR(p.a_N, 2.0 * kG * 1.69 * l2, 1e-12);
  EXPECT_NEAR(p.a_hat(), std::sqrt(2.0 * p.a_N) - std::sqrt(2.0 * p.t_N), 1e-12);
  const Parameters q = Parameters::schedule(Mode::Avoided, 0.2, 0.0, 256);
  EXPECT_EQ(q.a_N, q.t_N);
  EXPECT_NEAR(Parameters::schedule(Mode::Thin, 1.0, 0.3, 256).a_N, 2.0 * kG * 0.49 * l2, 1e-12);
}

TEST(Parameters, DomainChecks) {
  EXPECT_THROW(Parameters::schedule(Mode::Thick, 1.0, 1.0, 64), ParameterError);
  EXPECT_THROW(Parameters::schedule(Mode::Thin, 0.04, 0.3, 64), ParameterError);
  EXPECT_THROW(Parameters::schedule(Mode::Avoided, 1.0, 0.0, 64), ParameterError);
  EXPECT_THROW(Parameters::schedule(Mode::Light, 0.5, 0.0, 1), ParameterError);
  EXPECT_THROW(Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 64, -1.0, 2.0), ParameterError);
}

TEST(Normalizations, Formulas) {
  const Parameters same = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 100, 5.0, 5.0);
  EXPECT_NEAR(normalizations(same).W, 1e4 / std::sqrt(std::log(100.0)), 1e-9);
  const Parameters p = Parameters::schedule(Mode::Avoided, 0.2, 0.0, 1024);
  // W_hat = N^2 exp(-t/(g log N)) = N^{2(1-theta)} on schedule.
  EXPECT_NEAR(normalizations(p).W_hat / std::pow(1024.0, 1.6), 1.0, 1e-12);
  const Parameters t = Parameters::schedule(Mode::Thick, 1.0, 0.3, 1024);
  const double ln = std::log(1024.0);
  EXPECT_NEAR(normalizations(t).W / (std::pow(1024.0, 2.0 * (1 - 0.09)) / std::sqrt(ln)), 1.0, 1e-12);
  EXPECT_NEAR(dgff_normalization(0.0, 100), 1e4 / std::sqrt(std::log(100.0)), 1e-9);
}

TEST(Modes, NamesRoundTrip) {
  for (Mode m : {Mode::Thick, Mode::Thin, Mode::Light, Mode::Avoided}) EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_FALSE(parse_mode("thicker"));
}

TEST(Sets, ThresholdsAndCounts) {
  const LocalTimeField f = ramp(4, 3);
  const Parameters p = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 8, 1.0, 12.0);
  const auto thick = thick_set(f, p);
  EXPECT_EQ(thick.size(), count_thick(f, p));
  for (VertexId v : thick) EXPECT_GE(f.local_time[static_cast<std::size_t>(v)], 12.0);
  EXPECT_EQ(thick.size(), 6u);
  const Parameters q = Parameters::explicit_values(Mode::Thin, 1.0, 0.3, 8, 20.0, 3.0);
  EXPECT_EQ(thin_set(f, q).size(), 4u);
  EXPECT_EQ(count_thin(f, q), 4u);
  EXPECT_EQ(avoided_set(f), std::vector<VertexId>{0});
  EXPECT_EQ(count_avoided(f), 1u);
  EXPECT_EQ(light_set(f, 2.0).size(), count_light(f, 2.0));
  EXPECT_THROW(thick_set(f, q), ParameterError);
}

TEST(Sets, Nesting) {
  const auto g = std::make_shared<const LatticeGraph>(discretize(DomainSpec::unit_square(), 64));
  const Parameters p = Parameters::schedule(Mode::Thick, 1.0, 0.2, 64);
  const LocalTimeField f = sample_field(g, p.t_N, 3);
  const auto lo = thick_set(f, p);
  const auto hi = thick_set(f, Parameters::schedule(Mode::Thick, 1.0, 0.4, 64));
  EXPECT_TRUE(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
  const auto av = avoided_set(f);
  const auto light = light_set(f, 0.3);
  EXPECT_TRUE(std::includes(light.begin(), light.end(), av.begin(), av.end()));
}

TEST(Sets, ZeroField) {
  const auto g = std::make_shared<const LatticeGraph>(discretize(DomainSpec::unit_square(), 32));
  const Parameters p = Parameters::schedule(Mode::Thick, 1.0, 0.3, 32);
  const LocalTimeField f = sample_field(g, 0.0, 1);
  EXPECT_TRUE(thick_set(f, p).empty());
  EXPECT_EQ(windowed_mass(zeta(f, p), -1.0, 1.0), 0.0);
  const Parameters a = Parameters::explicit_values(Mode::Avoided, 0.2, 0.0, 32, 0.0, 0.0);
  EXPECT_NEAR(kappa(f, a).mass(), static_cast<double>(g->size()) / normalizations(a).W_hat, 1e-12);
  const Parameters huge = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 32, 1.0, 1e9);
  EXPECT_EQ(windowed_mass(zeta(f, huge), -1.0, 1.0), 0.0);
}

TEST(Measures, AtomsAndWeights) {
  const LocalTimeField f = ramp(3, 2);
  const Parameters p = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 10, 1.0, 11.0);
  const PointMeasure z = zeta(f, p);
  ASSERT_EQ(z.size(), 6u);
  EXPECT_NEAR(z.value[4], (11.0 - 11.0) / std::log(10.0), 1e-15);
  EXPECT_NEAR(z.x[5], 0.2, 1e-15);
  EXPECT_NEAR(z.y[5], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(z.weight(), 1.0 / normalizations(p).W);
  const Parameters a = Parameters::explicit_values(Mode::Light, 0.5, 0.0, 10, 1.0, 1.0);
  const PointMeasure th = vartheta(f, a);
  EXPECT_EQ(th.value, f.local_time);
  EXPECT_EQ(kappa(f, a).size(), 1u);
  EXPECT_THROW(vartheta(f, p), ParameterError);
}

TEST(Measures, IntegrateIsLinear) {
  const LocalTimeField f = ramp(5, 4);
  const Parameters p = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 16, 1.0, 10.0);
  const PointMeasure m = zeta(f, p);
  EXPECT_DOUBLE_EQ(integrate(m, [](const AtomView&) { return 1.0; }), m.mass());
  auto ind = [](const AtomView& a) { return a.value >= -0.5 && a.value <= 0.5 ? 1.0 : 0.0; };
  EXPECT_DOUBLE_EQ(integrate(m, ind), windowed_mass(m, -0.5, 0.5));
  auto f1 = [](const AtomView& a) { return std::floor(a.x * 16.0); };
  auto f2 = [](const AtomView& a) { return std::floor(a.y * 16.0) * 3.0; };
  const double lhs = integrate(m, [&](const AtomView& a) { return f1(a) + f2(a); });
  EXPECT_EQ(lhs, integrate(m, f1) + integrate(m, f2));
}

TEST(Local, ZetaProfiles) {
  const LocalTimeField f = ramp(4, 4);
  const Parameters p = Parameters::explicit_values(Mode::Thick, 1.0, 0.3, 8, 1.0, 11.0);
  const double ln = std::log(8.0);
  const ProfileMeasure m = zeta_local(f, p, 1, LocalOptions{std::pair{-0.1, 0.1}, std::nullopt});
  ASSERT_EQ(m.size(), 1u);  // only L = 11 at (1, 1)
  EXPECT_EQ(m.profile(0, 0, 0), 0.0);
  EXPECT_NEAR(m.profile(0, 1, 0), (11.0 - 12.0) / ln, 1e-15);
  EXPECT_NEAR(m.profile(0, 0, -1), (11.0 - 1.0) / ln, 1e-15);
  EXPECT_NEAR(m.profile(0, -1, -1), (11.0 - 0.0) / ln, 1e-15);
  const ProfileMeasure all = zeta_local(f, p, 1, LocalOptions{std::nullopt, std::nullopt});
  EXPECT_EQ(all.size(), 16u);
  // (0,0) sits on the corner: everything below or left of it is off V.
  EXPECT_NEAR(all.profile(0, -1, 0), 0.0, 1e-15);
  const ProfileMeasure sub = zeta_local(f, p, 2, LocalOptions{std::nullopt, std::vector<VertexId>{3, 7}});
  EXPECT_EQ(sub.vertices, (std::vector<VertexId>{3, 7}));
  EXPECT_EQ(sub.profiles.size(), 2u * 25u);
  EXPECT_THROW(zeta_local(f, p, 0), ParameterError);
}

TEST(Local, KappaProfiles) {
  const LocalTimeField f = ramp(3, 3);
  const Parameters p = Parameters::explicit_values(Mode::Avoided, 0.2, 0.0, 8, 1.0, 1.0);
  const ProfileMeasure m = kappa_local(f, p, 1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.profile(0, 1, 0), 1.0);
  EXPECT_EQ(m.profile(0, 1, 1), 11.0);
  EXPECT_EQ(m.profile(0, -1, 0), 0.0);
  EXPECT_TRUE(kappa_local(f, p, 1, std::vector<VertexId>{4}).profiles.empty());
}

TEST(Measures, DgffAtoms) {
  const LatticeGraph g = block_graph(2, 2);
  const GaussianField h{{1.0, 2.0, 3.0, 4.0}, 0, "test"};
  const PointMeasure m = eta_dgff(g, h, 2.5, 64);
  EXPECT_EQ(m.value, (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
  EXPECT_DOUBLE_EQ(m.normalization, dgff_normalization(2.5, 64));
  EXPECT_THROW(eta_dgff(block_graph(3, 1), h, 0.0, 64), ParameterError);
}
