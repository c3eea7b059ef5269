#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "memkernel/catalog.hpp"
#include "memkernel/error.hpp"
#include "memkernel/mechanics.hpp"
#include "memkernel/second_variation.hpp"

using namespace memkernel;
using std::numbers::pi;

namespace {

struct Fixture {
  SurfaceField sf;
  GeometryField geo;
  Fixture(const SurfaceDef& def, int n1, int n2)
      : sf(make_surface(def, default_grid(def, n1, n2))), geo(compute_geometry(sf)) {}
  VariationField variation(const VariationDef& d) const { return make_variation(d, sf, geo); }
};

const EnergyModel soap = EnergyModel::of({EnergyTerm::soap(1.0)});
const EnergyModel bending = EnergyModel::of({EnergyTerm::bending(1.0)});
const EnergyModel mean = EnergyModel::of({EnergyTerm::mean(1.0)});

/// Hand-derived blocks at one point, written index by index.
struct PointData {
  Eigen::Vector3d n, Xl[2], Xu[2];
  Eigen::Matrix2d gi, Ku, Km;
  double K, sg;
  PointData(const SurfaceField& sf, const GeometryField& geo, int p)
      : n(geo.normal[p]), gi(geo.g_inv[p]), Ku(geo.Kup[p]), Km(geo.Kmix[p]), K(geo.K[p]), sg(geo.sqrt_g[p]) {
    const auto d = sf.dX(p);
    for (int a = 0; a < 2; ++a) Xl[a] = d.col(a);
    for (int a = 0; a < 2; ++a) Xu[a] = gi(a, 0) * Xl[0] + gi(a, 1) * Xl[1];
  }
  double sym(int a, int c, int d, int b) const { return 0.5 * (gi(a, c) * gi(d, b) + gi(a, d) * gi(c, b)); }
  double biv(int a, int b, int mu, int nu) const { return Xu[a](mu) * Xu[b](nu) - Xu[b](mu) * Xu[a](nu); }
};

}  // namespace

TEST_CASE("soap Hessian has only the first-derivative block") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 3), 16, 16);
  const int p = 37;
  const auto h = hessian_blocks(soap, f.sf, f.geo, p);
  const PointData d(f.sf, f.geo, p);
  Eigen::Matrix<double, 6, 6> expect;
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu)
      for (int b = 0; b < 2; ++b)
        for (int nu = 0; nu < 3; ++nu)
          expect(a * 3 + mu, b * 3 + nu) = d.sg * (d.gi(a, b) * d.n(mu) * d.n(nu) + d.biv(a, b, mu, nu));
  CHECK((h.H_aa - expect).norm() < 1e-13 * expect.norm());
  CHECK(h.H_a_cd.norm() + h.H_ab_c.norm() + h.H_abcd.norm() == 0.0);
  CHECK((h.H_aa - h.H_aa.transpose()).norm() < 1e-13 * expect.norm());
}

TEST_CASE("bending Hessian blocks") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 3), 16, 16);
  const int p = 37;
  const auto h = hessian_blocks(bending, f.sf, f.geo, p);
  const PointData d(f.sf, f.geo, p);
  Eigen::Matrix<double, 12, 12> top;
  Eigen::Matrix<double, 6, 6> aa;
  Eigen::Matrix<double, 6, 12> a_cd;
  Eigen::Matrix<double, 12, 6> ab_c;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int mu = 0; mu < 3; ++mu)
        for (int c = 0; c < 2; ++c)
          for (int e = 0; e < 2; ++e)
            for (int nu = 0; nu < 3; ++nu)
              top((a * 2 + b) * 3 + mu, (c * 2 + e) * 3 + nu) = 2 * d.sg * d.gi(a, b) * d.gi(c, e) * d.n(mu) * d.n(nu);
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu)
      for (int b = 0; b < 2; ++b)
        for (int nu = 0; nu < 3; ++nu) {
          double s = d.K * (d.K * d.gi(a, b) - 4 * d.Ku(a, b)) * d.n(mu) * d.n(nu);
          for (int c = 0; c < 2; ++c)
            for (int e = 0; e < 2; ++e)
              s += 4 * (d.K * d.Ku(c, e) * d.gi(a, b) + 2 * d.Ku(a, c) * d.Ku(b, e)) * d.Xl[c](mu) * d.Xl[e](nu);
          s += d.K * d.K * d.biv(a, b, mu, nu);
          for (int c = 0; c < 2; ++c)
            s += 4 * d.K * d.Km(c, a) * d.biv(b, c, mu, nu) - 4 * d.K * d.Km(c, b) * d.biv(a, c, mu, nu);
          aa(a * 3 + mu, b * 3 + nu) = d.sg * s;
        }
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu)
      for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 2; ++e)
          for (int nu = 0; nu < 3; ++nu) {
            double s = 0;
            for (int b = 0; b < 2; ++b)
              s += (-d.K * d.gi(c, e) * d.gi(a, b) + 2 * d.Ku(a, b) * d.gi(c, e) + 2 * d.K * d.sym(a, c, e, b)) *
                   d.Xl[b](mu) * d.n(nu);
            a_cd(a * 3 + mu, (c * 2 + e) * 3 + nu) = 2 * d.sg * s;
          }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int mu = 0; mu < 3; ++mu)
        for (int c = 0; c < 2; ++c)
          for (int nu = 0; nu < 3; ++nu) {
            double t = -d.K * d.gi(a, b) * d.Xu[c](nu) + d.K * (d.gi(c, a) * d.Xu[b](nu) + d.gi(c, b) * d.Xu[a](nu));
            for (int e = 0; e < 2; ++e) t += 2 * d.Ku(c, e) * d.gi(a, b) * d.Xl[e](nu);
            ab_c((a * 2 + b) * 3 + mu, c * 3 + nu) =
                2 * d.sg * (t * d.n(mu) + d.K * d.gi(a, b) * d.Xu[c](mu) * d.n(nu));
          }
  CHECK((h.H_abcd - top).norm() < 1e-13 * top.norm());
  CHECK((h.H_aa - aa).norm() < 1e-13 * aa.norm());
  CHECK((h.H_a_cd - a_cd).norm() < 1e-13 * a_cd.norm());
  CHECK((h.H_ab_c - ab_c).norm() < 1e-13 * ab_c.norm());
  CHECK((h.H_abcd - h.H_abcd.transpose()).norm() < 1e-14 * top.norm());
  CHECK(mixed_block_gap(h) > 0.1);
}

TEST_CASE("mean Hessian blocks") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 3), 16, 16);
  const int p = 53;
  const auto h = hessian_blocks(mean, f.sf, f.geo, p);
  const PointData d(f.sf, f.geo, p);
  Eigen::Matrix<double, 6, 12> a_cd;
  Eigen::Matrix<double, 12, 6> ab_c;
  Eigen::Matrix<double, 6, 6> aa;
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu)
      for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 2; ++e)
          for (int nu = 0; nu < 3; ++nu) {
            double s = 0;
            for (int b = 0; b < 2; ++b) s += (-d.gi(c, e) * d.gi(a, b) + 2 * d.sym(a, c, e, b)) * d.n(nu) * d.Xl[b](mu);
            a_cd(a * 3 + mu, (c * 2 + e) * 3 + nu) = d.sg * s;
          }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int mu = 0; mu < 3; ++mu)
        for (int c = 0; c < 2; ++c)
          for (int nu = 0; nu < 3; ++nu) {
            double s = d.gi(a, b) * d.n(nu) * d.Xu[c](mu);
            for (int e = 0; e < 2; ++e) s += (-d.gi(a, b) * d.gi(c, e) + 2 * d.sym(c, a, b, e)) * d.n(mu) * d.Xl[e](nu);
            ab_c((a * 2 + b) * 3 + mu, c * 3 + nu) = d.sg * s;
          }
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu)
      for (int c = 0; c < 2; ++c)
        for (int nu = 0; nu < 3; ++nu) {
          double s = (d.K * d.gi(a, c) - 2 * d.Ku(a, c)) * d.n(mu) * d.n(nu);
          for (int e = 0; e < 2; ++e)
            for (int q = 0; q < 2; ++q) s += 2 * d.gi(a, c) * d.Ku(e, q) * d.Xl[e](mu) * d.Xl[q](nu);
          s += d.K * d.biv(a, c, mu, nu);
          for (int e = 0; e < 2; ++e) s += 2 * d.Km(e, a) * d.biv(c, e, mu, nu) - 2 * d.Km(e, c) * d.biv(a, e, mu, nu);
          aa(a * 3 + mu, c * 3 + nu) = d.sg * s;
        }
  CHECK((h.H_a_cd - a_cd).norm() < 1e-13 * a_cd.norm());
  CHECK((h.H_ab_c - ab_c).norm() < 1e-13 * ab_c.norm());
  CHECK((h.H_aa - aa).norm() < 1e-13 * aa.norm());
  CHECK(h.H_abcd.norm() == 0.0);
  CHECK(mixed_block_gap(h) > 0.1);
}

TEST_CASE("connection variation") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 3), 16, 16);
  for (const auto& W : {f.variation(VariationDef::translation({1, 2, 3})),
                        f.variation(VariationDef::rotation({0.3, -0.5, 1.0}))}) {
    double m = 0.0;
    for (const auto& dG : connection_variation(f.sf, f.geo, W)) m = std::max(m, dG[0].norm() + dG[1].norm());
    CHECK(m < 1e-10);
  }
  // against finite differences of the projected connection along X + tW
  const auto W = f.variation(VariationDef::random_smooth(5));
  const auto dG = connection_variation(f.sf, f.geo, W);
  const int p = 91;
  const double t = 1e-4;
  auto gamma = [&](double s) {
    const auto d = f.sf.dX(p);
    return make_frame<double>(f.sf.X(p) + s * W.W[p], d.col(0) + s * W.Wa[p][0], d.col(1) + s * W.Wa[p][1],
                              f.sf.ddX(p, 0, 0) + s * W.raw_second(p, 0, 0),
                              f.sf.ddX(p, 0, 1) + s * W.raw_second(p, 0, 1),
                              f.sf.ddX(p, 1, 1) + s * W.raw_second(p, 1, 1))
        .Gamma;
  };
  const auto gp = gamma(t), gm = gamma(-t);
  for (int c = 0; c < 2; ++c) CHECK(((gp[c] - gm[c]) / (2 * t) - dG[p][c]).norm() < 1e-7);
}

TEST_CASE("second variation matches the oracle") {
  Fixture f(SurfaceDef::torus(1.0, 3.0), 48, 48);
  for (const auto& m : {soap, bending, mean, EnergyModel::of({EnergyTerm::bending(1.2), EnergyTerm::mean(-0.4),
                                                              EnergyTerm::soap(0.5)})}) {
    const auto r = oracle_second_variation_match(m, f.sf, f.geo, f.variation(VariationDef::random_smooth(11)));
    CHECK(r.relative_gap() < 1e-6);
    CHECK(r.gap < r.fd.tolerance());
  }
  // near equilibrium: bending on the round sphere
  Fixture s(SurfaceDef::sphere_quadrature(1.0), 24, 24);
  const auto W = s.variation(VariationDef::normal(ScalarProfile::cosine(0.3, 0.5, 1, 2)));
  const auto r = oracle_second_variation_match(bending, s.sf, s.geo, W);
  CHECK(r.gap < r.fd.tolerance());
  CHECK(r.relative_gap() < 1e-6);
}

TEST_CASE("translations give zero and rotations follow the orbit correction") {
  Fixture f(SurfaceDef::torus(1.0, 3.0), 32, 32);
  CHECK(second_variation(bending, f.sf, f.geo, f.variation(VariationDef::translation({1, -2, 0.5}))) == 0.0);
  // X + t BX leaves the rotation orbit at second order: d2F[BX] = -dF[B^2 X].
  const Eigen::Vector3d b(0.3, -0.5, 1.0);
  const auto W = f.variation(VariationDef::rotation(b));
  std::vector<Vec3<Jet2>> jets(f.sf.size());
  for (int p = 0; p < f.sf.size(); ++p) {
    const Vec3<Jet2> X(lift<Jet2>(f.sf.jets[p](0)), lift<Jet2>(f.sf.jets[p](1)), lift<Jet2>(f.sf.jets[p](2)));
    const Vec3<Jet2> bv(Jet2(b(0)), Jet2(b(1)), Jet2(b(2)));
    jets[p] = cross(bv, cross(bv, X));
  }
  const auto W2 = variation_from_jets(jets, f.sf, f.geo);
  for (const auto& m : {soap, bending, mean}) {
    const double d2 = second_variation(m, f.sf, f.geo, W);
    const double d1 = match_first_variation(m, f.sf, f.geo, W2).post_ibp;
    CHECK(std::abs(d2 + d1) < 1e-10 * (std::abs(d2) + 1.0));
  }
}

TEST_CASE("soap normal form") {
  Fixture s(SurfaceDef::sphere_quadrature(1.0), 24, 24);
  CHECK(soap_normal_second_variation(s.sf, s.geo, ScalarProfile::constant(1.0), 1.0) ==
        doctest::Approx(8 * pi).epsilon(1e-12));
  CHECK(soap_normal_second_variation(s.sf, s.geo, ScalarProfile::constant(0.0), 1.0) == 0.0);
  Fixture t(SurfaceDef::torus(1.0, 3.0), 48, 48);
  CHECK(std::abs(soap_normal_second_variation(t.sf, t.geo, ScalarProfile::constant(1.0))) < 1e-10);

  ScalarProfile phi = ScalarProfile::cosine(0.4, 0.3, 1, 2);
  phi.modes.push_back({0.2, 1.0, 1.0, 0.3});
  const auto W = t.variation(VariationDef::normal(phi));
  const double full = second_variation(EnergyModel::of({EnergyTerm::soap(1.7)}), t.sf, t.geo, W);
  CHECK(full == doctest::Approx(soap_normal_second_variation(t.sf, t.geo, phi, 1.7)).epsilon(1e-12));
  const auto Ws = s.variation(VariationDef::normal(ScalarProfile::constant(1.0)));
  CHECK(second_variation(EnergyModel::of({EnergyTerm::soap(2.0)}), s.sf, s.geo, Ws) ==
        doctest::Approx(16 * pi).epsilon(1e-12));
}

TEST_CASE("expanded closed forms agree with the block assembly") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 1), 48, 48);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto W = f.variation(VariationDef::random_smooth(seed));
    const double b = second_variation(bending, f.sf, f.geo, W);
    CHECK(bending_second_variation_expanded(ScalarProfile::constant(1.0), f.sf, f.geo, W) ==
          doctest::Approx(b).epsilon(1e-11));
    const double m = second_variation(mean, f.sf, f.geo, W);
    CHECK(mean_second_variation_expanded(ScalarProfile::constant(1.0), f.sf, f.geo, W) ==
          doctest::Approx(m).epsilon(1e-11));
  }
}

TEST_CASE("flipping the sign of the last bending line breaks the agreement") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 1), 32, 32);
  const auto W = f.variation(VariationDef::random_smooth(4));
  Eigen::VectorXd last(f.sf.size());
  for (int p = 0; p < f.sf.size(); ++p) {
    const auto d = f.sf.dX(p);
    Eigen::Matrix2d A;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) A(a, b) = d.col(a).dot(W.Wa[p][b]);
    const Eigen::Matrix2d gA = f.geo.g_inv[p] * A;
    const double K = f.geo.K[p];
    const double flipped = 4 * K * f.geo.Kup[p].cwiseProduct(A.transpose()).sum() * gA.trace() -
                           4 * K * (f.geo.Kup[p] * A * gA).trace();
    last(p) = 2 * f.geo.sqrt_g[p] * flipped;
  }
  // switching the sign of these two terms moves the total by twice their integral
  const double shift = 2 * surface_integral(f.sf.grid, last);
  CHECK(std::abs(shift) > 1e-3 * std::abs(second_variation(bending, f.sf, f.geo, W)));
}

TEST_CASE("Legendre-Hadamard") {
  Fixture f(SurfaceDef::perturbed_torus(1.0, 3.0, 0.15, 2, 3), 24, 24);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto W = f.variation(VariationDef::random_smooth(seed));
    const auto lh = legendre_hadamard(bending, f.sf, f.geo, W);
    CHECK(lh.minCoeff() >= -1e-12);
    for (int p = 0; p < f.sf.size(); p += 13) {
      double tr = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) tr += f.geo.g_inv[p](a, b) * f.geo.normal[p].dot(W.Wab[p][a][b]);
      CHECK(lh(p) == doctest::Approx(2 * f.geo.sqrt_g[p] * tr * tr).epsilon(1e-10));
    }
  }
  const auto W = f.variation(VariationDef::random_smooth(1));
  CHECK(legendre_hadamard(soap, f.sf, f.geo, W).cwiseAbs().maxCoeff() == 0.0);
  CHECK(legendre_hadamard(mean, f.sf, f.geo, W).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unsupported terms and open surfaces") {
  Fixture f(SurfaceDef::torus(1.0, 3.0), 16, 16);
  const auto W = f.variation(VariationDef::random_smooth(1));
  for (const auto& t : {EnergyTerm::gaussian(1.0), EnergyTerm::volume(1.0)})
    CHECK_THROWS_AS(second_variation(EnergyModel::of({t}), f.sf, f.geo, W), Error);
  try {
    second_variation(EnergyModel::of({EnergyTerm::gaussian(1.0)}), f.sf, f.geo, W);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedTerm);
  }
  Fixture c(SurfaceDef::cylinder(1.0), 16, 16);
  const auto Wc = c.variation(VariationDef::translation({1, 0, 0}));
  CHECK_THROWS_AS(second_variation(soap, c.sf, c.geo, Wc), Error);
  CHECK_THROWS_AS(soap_normal_second_variation(c.sf, c.geo, ScalarProfile::constant(1.0)), Error);
}
