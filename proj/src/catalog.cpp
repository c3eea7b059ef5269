#include "memkernel/catalog.hpp"

#include <cmath>
#include <random>

#include "memkernel/error.hpp"

namespace memkernel {

namespace {

constexpr double pi = std::numbers::pi;

bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::IncompatibleGrid, what);
}

bool integer_valued(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Sphere: return "sphere";
    case SurfaceKind::SphereQuadrature: return "sphere_quadrature";
    case SurfaceKind::Cylinder: return "cylinder";
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::MongePatch: return "monge";
    case SurfaceKind::PerturbedTorus: return "perturbed_torus";
  }
  return "unknown";
}

std::string to_string(VariationKind kind) {
  switch (kind) {
    case VariationKind::Translation: return "translation";
    case VariationKind::Rotation: return "rotation";
    case VariationKind::Normal: return "normal";
    case VariationKind::RandomSmooth: return "random_smooth";
  }
  return "unknown";
}

void validate(const SurfaceDef& d) {
  auto positive = [](double x, const char* name) {
    if (!(x > 0)) throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive");
  };
  switch (d.kind) {
    case SurfaceKind::Sphere:
    case SurfaceKind::SphereQuadrature: positive(d.R, "R"); break;
    case SurfaceKind::Cylinder:
      positive(d.r, "r");
      positive(d.L, "L");
      break;
    case SurfaceKind::Torus:
    case SurfaceKind::PerturbedTorus:
      positive(d.a, "a");
      if (!(d.c > d.a)) throw Error(ErrorCode::InvalidParameter, "torus needs 0 < a < c");
      if (d.kind == SurfaceKind::PerturbedTorus && !(std::abs(d.epsilon) < d.a / 4))
        throw Error(ErrorCode::InvalidParameter, "perturbation amplitude must satisfy |eps| < a/4");
      break;
    case SurfaceKind::MongePatch:
      for (const auto& m : d.height)
        if (!integer_valued(m.m1) || !integer_valued(m.m2))
          throw Error(ErrorCode::InvalidParameter, "height modes must be integers");
      break;
  }
}

bool is_closed(const SurfaceDef& d) {
  return d.kind == SurfaceKind::Torus || d.kind == SurfaceKind::PerturbedTorus ||
         d.kind == SurfaceKind::SphereQuadrature;
}

GridSpec default_grid(const SurfaceDef& d, int n1, int n2) {
  switch (d.kind) {
    case SurfaceKind::Sphere:
      return GridSpec::make(n1, n2, 0.3, pi - 0.3, 0, 2 * pi, AxisRule::clamped, AxisRule::periodic);
    case SurfaceKind::SphereQuadrature:
      return GridSpec::make(n1, n2, 0, pi, 0, 2 * pi, AxisRule::gauss_legendre, AxisRule::periodic);
    case SurfaceKind::Cylinder: return GridSpec::periodic(n1, n2, 0, 2 * pi, 0, d.L);
    default: return GridSpec::periodic(n1, n2, 0, 2 * pi, 0, 2 * pi);
  }
}

Eigen::Vector3d lattice_shift(const SurfaceDef& d, int axis) {
  if (d.kind == SurfaceKind::Cylinder && axis == 1) return {0, 0, d.L};
  if (d.kind == SurfaceKind::MongePatch)
    return axis == 0 ? Eigen::Vector3d(2 * pi, 0, 0) : Eigen::Vector3d(0, 2 * pi, 0);
  return Eigen::Vector3d::Zero();
}

namespace {

void check_grid(const SurfaceDef& d, const GridSpec& g) {
  const std::string name = to_string(d.kind);
  auto full_circle = [&](int axis) {
    require(g.rule(axis) == AxisRule::periodic && near(g.length(axis), 2 * pi),
            name + ": axis " + std::to_string(axis + 1) + " must be periodic over 2 pi");
  };
  switch (d.kind) {
    case SurfaceKind::Sphere:
      require(g.rule1 == AxisRule::clamped && g.a1 > 0 && g.b1 < pi,
              "sphere band: axis 1 must be a clamped theta range inside (0, pi)");
      full_circle(1);
      break;
    case SurfaceKind::SphereQuadrature:
      require(g.rule1 == AxisRule::gauss_legendre && near(g.a1, 0) && near(g.b1, pi),
              "sphere_quadrature: axis 1 must be Gauss-Legendre over [0, pi]");
      full_circle(1);
      break;
    case SurfaceKind::Cylinder:
      full_circle(0);
      require(g.rule2 != AxisRule::gauss_legendre &&
                  (g.rule2 != AxisRule::periodic || near(g.length(1), d.L)),
              "cylinder: a periodic z axis must span the period L");
      break;
    case SurfaceKind::Torus:
    case SurfaceKind::PerturbedTorus:
      full_circle(0);
      full_circle(1);
      break;
    case SurfaceKind::MongePatch:
      for (int axis = 0; axis < 2; ++axis)
        require(g.rule(axis) == AxisRule::clamped ||
                    (g.rule(axis) == AxisRule::periodic && near(g.length(axis), 2 * pi)),
                "monge: periodic axes must span 2 pi");
      break;
  }
}

}  // namespace

SurfaceField make_surface(const SurfaceDef& def, const GridSpec& grid) {
  validate(def);
  check_grid(def, grid);
  auto map = [&def](const Jet4& u, const Jet4& v) { return embed(def, u, v); };
  SurfaceField sf = build_from_analytic(map, grid, is_closed(def));
  for (int axis = 0; axis < 2; ++axis)
    if (grid.rule(axis) == AxisRule::periodic) sf.lattice_shift[axis] = lattice_shift(def, axis);
  return sf;
}

std::vector<Eigen::Vector3d> sample_surface(const SurfaceDef& def, const GridSpec& grid) {
  validate(def);
  check_grid(def, grid);
  std::vector<Eigen::Vector3d> out(grid.size());
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      out[grid.index(i, j)] = embed(def, grid.node(0, i), grid.node(1, j));
  return out;
}

SurfaceField make_sampled_surface(const SurfaceDef& def, const GridSpec& grid) {
  const auto samples = sample_surface(def, grid);
  return build_from_samples(samples, grid, lattice_shift(def, 0), lattice_shift(def, 1));
}

VariationField variation_from_jets(std::vector<Vec3<Jet2>> jets, const SurfaceField& sf,
                                   const GeometryField& geo) {
  if (static_cast<int>(jets.size()) != sf.size() || geo.size() != sf.size())
    throw Error(ErrorCode::GridMismatch, "variation does not match the surface grid");
  VariationField V;
  V.grid = sf.grid;
  V.jets = std::move(jets);
  const int N = sf.size();
  V.W.resize(N);
  V.Wa.resize(N);
  V.Wab.resize(N);
  for (int p = 0; p < N; ++p) {
    const auto& J = V.jets[p];
    for (int mu = 0; mu < 3; ++mu) {
      V.W[p](mu) = J(mu).value();
      V.Wa[p][0](mu) = J(mu).partial(1, 0);
      V.Wa[p][1](mu) = J(mu).partial(0, 1);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Eigen::Vector3d w = V.raw_second(p, a, b);
        for (int c = 0; c < 2; ++c) w -= geo.Gamma[p][c](a, b) * V.Wa[p][c];
        V.Wab[p][a][b] = w;
      }
  }
  return V;
}

VariationField make_variation(const VariationDef& def, const SurfaceField& sf,
                              const GeometryField& geo) {
  const GridSpec& grid = sf.grid;
  if (!geo.grid.same_shape(grid))
    throw Error(ErrorCode::GridMismatch, "geometry and surface grids differ");
  const int N = sf.size();
  std::vector<Vec3<Jet2>> jets(N);

  switch (def.kind) {
    case VariationKind::Translation:
      for (auto& J : jets) J = def.vector.cast<Jet2>();
      break;
    case VariationKind::Rotation: {
      const Vec3<Jet2> b = def.vector.cast<Jet2>();
      for (int p = 0; p < N; ++p) {
        Vec3<Jet2> X;
        for (int mu = 0; mu < 3; ++mu) X(mu) = lift<Jet2>(sf.jets[p](mu));
        jets[p] = cross(b, X);
      }
      break;
    }
    case VariationKind::Normal: {
      const auto phi = profile_jets(def.phi, grid);
      for (int p = 0; p < N; ++p) {
        const auto f = frame_from_jet<Jet2>(sf.jets[p]);
        jets[p] = f.n * lift<Jet2>(phi[p]);
      }
      break;
    }
    case VariationKind::RandomSmooth: {
      if (!grid.doubly_periodic())
        throw Error(ErrorCode::IncompatibleGrid, "random smooth variations need a doubly periodic grid");
      if (def.band < 1 || def.band > 4)
        throw Error(ErrorCode::InvalidParameter, "band limit must be between 1 and 4");
      std::mt19937_64 rng(def.seed);
      auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
      struct Coef {
        int m, k;
        Eigen::Vector3d A, B;
      };
      std::vector<Coef> coefs;
      for (int m = -def.band; m <= def.band; ++m)
        for (int k = 0; k <= def.band; ++k) {
          if (k == 0 && m < 0) continue;
          Coef c{m, k, {}, {}};
          const double decay = def.amplitude / (1.0 + m * m + k * k);
          for (int mu = 0; mu < 3; ++mu) c.A(mu) = decay * uniform();
          for (int mu = 0; mu < 3; ++mu) c.B(mu) = decay * uniform();
          coefs.push_back(c);
        }
      const double s1 = 2 * pi / grid.length(0), s2 = 2 * pi / grid.length(1);
      for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
          const Jet2 u = s1 * (Jet2::variable(grid.node(0, i), 0) - grid.a1);
          const Jet2 v = s2 * (Jet2::variable(grid.node(1, j), 1) - grid.a2);
          Vec3<Jet2> W = Vec3<Jet2>::Zero();
          for (const auto& c : coefs) {
            const Jet2 arg = double(c.m) * u + double(c.k) * v;
            const Jet2 C = cos(arg), S = sin(arg);
            for (int mu = 0; mu < 3; ++mu) W(mu) += c.A(mu) * C + c.B(mu) * S;
          }
          jets[grid.index(i, j)] = W;
        }
      break;
    }
  }
  return variation_from_jets(std::move(jets), sf, geo);
}

}  // namespace memkernel
