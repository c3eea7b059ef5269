#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "memkernel/catalog.hpp"
#include "memkernel/energy.hpp"
#include "memkernel/error.hpp"

using namespace memkernel;
using std::numbers::pi;

TEST_CASE("bending density on the unit sphere and its total") {
  const auto band = SurfaceDef::sphere(1.0);
  const auto sf = make_surface(band, default_grid(band, 16, 16));
  const auto geo = compute_geometry(sf);
  const auto model = EnergyModel::of({EnergyTerm::bending(1.0)});
  for (int i = 0; i < sf.grid.n1; ++i) {
    const int p = sf.grid.index(i, 3);
    CHECK(energy_density(model, sf, geo, p) == doctest::Approx(4.0 * std::sin(sf.grid.node(0, i))));
  }
  const auto def = SurfaceDef::sphere_quadrature(1.0);
  const auto full = make_surface(def, default_grid(def, 24, 24));
  CHECK(total_energy(model, full) == doctest::Approx(16.0 * pi).epsilon(1e-12));
}

TEST_CASE("Gaussian totals are topological") {
  const auto model = EnergyModel::of({EnergyTerm::gaussian(1.0)});
  const auto torus = SurfaceDef::torus(1.0, 3.0);
  CHECK(std::abs(total_energy(model, make_surface(torus, default_grid(torus, 32, 32)))) < 1e-12);
  const auto bumpy = SurfaceDef::perturbed_torus(1.0, 3.0, 0.1, 2, 3);
  CHECK(std::abs(total_energy(model, make_surface(bumpy, default_grid(bumpy, 64, 64)))) < 1e-10);
  const auto sphere = SurfaceDef::sphere_quadrature(2.0);
  CHECK(total_energy(model, make_surface(sphere, default_grid(sphere, 24, 24))) ==
        doctest::Approx(8.0 * pi).epsilon(1e-12));
}

TEST_CASE("soap density and momentum") {
  const auto def = SurfaceDef::torus(1.0, 3.0);
  const auto sf = make_surface(def, default_grid(def, 12, 12));
  const auto geo = compute_geometry(sf);
  const auto model = EnergyModel::of({EnergyTerm::soap(2.0)});
  for (int p = 0; p < sf.size(); p += 7) {
    CHECK(energy_density(model, sf, geo, p) == doctest::Approx(2.0 * geo.sqrt_g[p]));
    const auto pg = phase_gradient(EnergyModel::of({EnergyTerm::soap(1.0)}), sf, geo, p);
    const auto d = sf.dX(p);
    for (int a = 0; a < 2; ++a) {
      const Eigen::Vector3d expect =
          geo.sqrt_g[p] * (geo.g_inv[p](a, 0) * d.col(0) + geo.g_inv[p](a, 1) * d.col(1));
      CHECK((pg.Pa[a] - expect).norm() < 1e-14);
      CHECK(pg.Pab[a][0].norm() + pg.Pab[a][1].norm() == 0.0);
    }
    CHECK(pg.dX.norm() == 0.0);
  }
}

TEST_CASE("bending momentum on the unit cylinder") {
  const auto def = SurfaceDef::cylinder(1.0);
  const auto sf = make_surface(def, default_grid(def, 12, 12));
  const auto geo = compute_geometry(sf);
  const auto pg = phase_gradient(EnergyModel::of({EnergyTerm::bending(1.0)}), sf, geo, 17);
  const Eigen::Vector3d n = geo.normal[17];
  CHECK((pg.Pab[0][0] + 2.0 * n).norm() < 1e-14);
  CHECK((pg.Pab[1][1] + 2.0 * n).norm() < 1e-14);
  CHECK(pg.Pab[0][1].norm() < 1e-14);
  CHECK(pg.dX.norm() == 0.0);
}

TEST_CASE("spontaneous curvature expansion") {
  const auto zero = expand_spontaneous_curvature(1.0, 0.0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].kind == TermKind::Bending);
  {
    const auto def = SurfaceDef::sphere(1.0);
    const auto sf = make_surface(def, default_grid(def, 12, 12));
    const auto geo = compute_geometry(sf);
    const auto model = EnergyModel::of(expand_spontaneous_curvature(1.0, 1.0));
    REQUIRE(model.terms.size() == 3);
    for (int p = 0; p < sf.size(); p += 11)
      CHECK(energy_density(model, sf, geo, p) == doctest::Approx(geo.sqrt_g[p]));
  }
  {
    const auto def = SurfaceDef::cylinder(1.0);
    const auto sf = make_surface(def, default_grid(def, 12, 12));
    const auto geo = compute_geometry(sf);
    const auto model = EnergyModel::of(expand_spontaneous_curvature(2.0, -1.0));
    for (int p = 0; p < sf.size(); p += 11)
      CHECK(energy_density(model, sf, geo, p) == doctest::Approx(8.0 * geo.sqrt_g[p]));
  }
}

TEST_CASE("enclosed volume") {
  for (double R : {1.0, 2.0}) {
    const auto def = SurfaceDef::sphere_quadrature(R);
    const auto sf = make_surface(def, default_grid(def, 24, 24));
    CHECK(volume_functional(sf, compute_geometry(sf)) ==
          doctest::Approx(4.0 / 3.0 * pi * R * R * R).epsilon(1e-12));
  }
  const auto def = SurfaceDef::torus(1.0, 3.0);
  const auto sf = make_surface(def, default_grid(def, 32, 32));
  CHECK(volume_functional(sf, compute_geometry(sf)) == doctest::Approx(2 * pi * pi * 3.0).epsilon(1e-12));
  // pressure term energy is -P V
  CHECK(total_energy(EnergyModel::of({EnergyTerm::volume(0.5)}), sf) ==
        doctest::Approx(-0.5 * 2 * pi * pi * 3.0).epsilon(1e-12));

  const auto cyl = SurfaceDef::cylinder(1.0);
  const auto open = make_surface(cyl, default_grid(cyl, 12, 12));
  CHECK_THROWS_AS(volume_functional(open, compute_geometry(open)), Error);
}

TEST_CASE("phase field with uniform phi reduces to the mean term") {
  const auto def = SurfaceDef::perturbed_torus(1.0, 3.0, 0.1, 2, 1);
  const auto sf = make_surface(def, default_grid(def, 16, 16));
  const auto geo = compute_geometry(sf);
  const auto pf = EnergyModel::of(
      {EnergyTerm::phase_field(0.7, 0.4, {}, ScalarProfile::constant(1.5))});
  const auto mean = EnergyModel::of({EnergyTerm::mean(0.6)});
  for (int p = 0; p < sf.size(); p += 5) {
    CHECK(energy_density(pf, sf, geo, p) == doctest::Approx(energy_density(mean, sf, geo, p)));
    const auto a = phase_gradient(pf, sf, geo, p), b = phase_gradient(mean, sf, geo, p);
    for (int i = 0; i < 2; ++i) {
      CHECK((a.Pa[i] - b.Pa[i]).norm() < 1e-14);
      for (int j = 0; j < 2; ++j) CHECK((a.Pab[i][j] - b.Pab[i][j]).norm() < 1e-14);
    }
  }
  EnergyTerm missing = EnergyTerm::phase_field(1.0, 0.0, {}, ScalarProfile::constant(0.0));
  missing.has_phi = false;
  CHECK_THROWS_AS(prepare(EnergyModel::of({missing}), sf.grid), Error);
}

TEST_CASE("position dependence") {
  CHECK_FALSE(EnergyModel::canham_helfrich(1, 1, 1, 1).depends_on_position());
  CHECK(EnergyModel::of({EnergyTerm::volume(1.0)}).depends_on_position());
  CHECK_FALSE(EnergyModel::canham_helfrich(1, 1, 1, 1).heterogeneous());
  CHECK(EnergyModel::of({EnergyTerm::soap(ScalarProfile::cosine(1, 0.2, 1, 2))}).heterogeneous());
}
