#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "memkernel/field.hpp"
#include "memkernel/geometry.hpp"

namespace memkernel {

enum class SurfaceKind { Sphere, SphereQuadrature, Cylinder, Torus, MongePatch, PerturbedTorus };

/// Analytic test surfaces.
///   Sphere(R):           (theta, phi) band theta in [0.3, pi - 0.3], clamped in theta
///   SphereQuadrature(R): full sphere, Gauss-Legendre in theta
///   Cylinder(r, L):      (phi, z), z periodic over L up to the lattice shift (0, 0, L)
///   Torus(a, c):         (phi, theta) with X = ((c + a cos theta) cos phi, ..., a sin theta)
///   MongePatch:          X = (u, v, h(u, v)) on [0, 2pi)^2, h a cosine series; no modes is the plane
///   PerturbedTorus:      torus + eps cos(m phi + k theta) n0
struct SurfaceDef {
  SurfaceKind kind = SurfaceKind::Torus;
  double R = 1, r = 1, L = 2 * std::numbers::pi, a = 1, c = 3, epsilon = 0;
  int m = 0, k = 0;
  std::vector<ScalarProfile::Mode> height;

  static SurfaceDef sphere(double R) { return with(SurfaceKind::Sphere, [&](SurfaceDef& d) { d.R = R; }); }
  static SurfaceDef sphere_quadrature(double R) {
    return with(SurfaceKind::SphereQuadrature, [&](SurfaceDef& d) { d.R = R; });
  }
  static SurfaceDef cylinder(double r, double L = 2 * std::numbers::pi) {
    return with(SurfaceKind::Cylinder, [&](SurfaceDef& d) { d.r = r; d.L = L; });
  }
  static SurfaceDef torus(double a, double c) {
    return with(SurfaceKind::Torus, [&](SurfaceDef& d) { d.a = a; d.c = c; });
  }
  static SurfaceDef monge(std::vector<ScalarProfile::Mode> h) {
    return with(SurfaceKind::MongePatch, [&](SurfaceDef& d) { d.height = std::move(h); });
  }
  static SurfaceDef plane() { return monge({}); }
  static SurfaceDef perturbed_torus(double a, double c, double eps, int m, int k) {
    return with(SurfaceKind::PerturbedTorus, [&](SurfaceDef& d) {
      d.a = a; d.c = c; d.epsilon = eps; d.m = m; d.k = k;
    });
  }

 private:
  template <class F>
  static SurfaceDef with(SurfaceKind kind, F&& set) {
    SurfaceDef d;
    d.kind = kind;
    set(d);
    return d;
  }
};

std::string to_string(SurfaceKind kind);
void validate(const SurfaceDef& def);
bool is_closed(const SurfaceDef& def);

/// The natural parameter grid for the surface kind.
GridSpec default_grid(const SurfaceDef& def, int n1, int n2);

/// Lattice translation picked up when crossing the periodic axis.
Eigen::Vector3d lattice_shift(const SurfaceDef& def, int axis);

template <class S>
Vec3<S> embed(const SurfaceDef& d, const S& u, const S& v) {
  using std::cos;
  using std::sin;
  switch (d.kind) {
    case SurfaceKind::Sphere:
    case SurfaceKind::SphereQuadrature:
      return Vec3<S>(d.R * sin(u) * cos(v), d.R * sin(u) * sin(v), d.R * cos(u));
    case SurfaceKind::Cylinder:
      return Vec3<S>(d.r * cos(u), d.r * sin(u), v);
    case SurfaceKind::Torus:
    case SurfaceKind::PerturbedTorus: {
      const S rho = d.c + d.a * cos(v);
      Vec3<S> X(rho * cos(u), rho * sin(u), d.a * sin(v));
      if (d.kind == SurfaceKind::PerturbedTorus) {
        const S bump = d.epsilon * cos(double(d.m) * u + double(d.k) * v);
        X += Vec3<S>(cos(v) * cos(u), cos(v) * sin(u), sin(v)) * bump;
      }
      return X;
    }
    case SurfaceKind::MongePatch: {
      S h(0.0);
      for (const auto& m : d.height) h += m.amplitude * cos(m.m1 * u + m.m2 * v + m.phase);
      return Vec3<S>(u, v, h);
    }
  }
  return Vec3<S>::Zero();
}

/// Surface with exact jets; throws IncompatibleGrid when the grid does not fit the kind.
SurfaceField make_surface(const SurfaceDef& def, const GridSpec& grid);

/// Node samples of the map and the finite-difference surface built from them.
std::vector<Eigen::Vector3d> sample_surface(const SurfaceDef& def, const GridSpec& grid);
SurfaceField make_sampled_surface(const SurfaceDef& def, const GridSpec& grid);

enum class VariationKind { Translation, Rotation, Normal, RandomSmooth };

struct VariationDef {
  VariationKind kind = VariationKind::Translation;
  Eigen::Vector3d vector = Eigen::Vector3d::Zero();  // translation a or rotation axis b
  ScalarProfile phi = ScalarProfile::constant(1.0);  // normal profile
  std::uint64_t seed = 1;
  int band = 3;            // modes per axis, at most 4
  double amplitude = 0.05;

  static VariationDef translation(const Eigen::Vector3d& a) {
    VariationDef d;
    d.kind = VariationKind::Translation;
    d.vector = a;
    return d;
  }
  static VariationDef rotation(const Eigen::Vector3d& b) {
    VariationDef d;
    d.kind = VariationKind::Rotation;
    d.vector = b;
    return d;
  }
  static VariationDef normal(const ScalarProfile& phi) {
    VariationDef d;
    d.kind = VariationKind::Normal;
    d.phi = phi;
    return d;
  }
  static VariationDef random_smooth(std::uint64_t seed, int band = 3, double amplitude = 0.05) {
    VariationDef d;
    d.kind = VariationKind::RandomSmooth;
    d.seed = seed;
    d.band = band;
    d.amplitude = amplitude;
    return d;
  }
};

std::string to_string(VariationKind kind);

/// Deformation field W with raw jets (partials to second order) and covariant data.
struct VariationField {
  GridSpec grid;
  std::vector<Vec3<Jet2>> jets;
  std::vector<Eigen::Vector3d> W;
  std::vector<Pair<Eigen::Vector3d>> Wa;   // d_a W
  std::vector<Sym<Eigen::Vector3d>> Wab;   // nabla_a nabla_b W = d_a d_b W - Gamma^c_ab W_c

  int size() const { return grid.size(); }
  Eigen::Vector3d raw_second(int p, int a, int b) const {
    const int i = (a == 0) + (b == 0);
    const auto& J = jets[p];
    return {J(0).partial(i, 2 - i), J(1).partial(i, 2 - i), J(2).partial(i, 2 - i)};
  }
};

VariationField make_variation(const VariationDef& def, const SurfaceField& sf,
                              const GeometryField& geo);

/// Build the covariant data from given jets of W.
VariationField variation_from_jets(std::vector<Vec3<Jet2>> jets, const SurfaceField& sf,
                                   const GeometryField& geo);

}  // namespace memkernel
