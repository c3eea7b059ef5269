#include "memkernel/geometry.hpp"

#include <cmath>
#include <random>
#include <string>

#include "memkernel/error.hpp"
#include "memkernel/finite_difference.hpp"

namespace memkernel {

namespace {

using Gam = Pair<Eigen::Matrix2d>;

// Metric partials dg[p][c](a, b) = d_c g_ab: exact from jets, or finite differences of g.
std::vector<Gam> metric_partials(const SurfaceField& sf, const std::vector<Eigen::Matrix2d>& g) {
  const int N = sf.size();
  std::vector<Gam> dg(N);
  if (sf.analytic) {
    for (int p = 0; p < N; ++p) {
      const auto f = frame_from_jet<Jet<1>>(sf.jets[p]);
      for (int c = 0; c < 2; ++c)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) dg[p][c](a, b) = derivative(f.g(a, b), c).value();
    }
    return dg;
  }
  Eigen::MatrixXd G(N, 3);
  for (int p = 0; p < N; ++p) G.row(p) << g[p](0, 0), g[p](0, 1), g[p](1, 1);
  const Eigen::MatrixXd D1 = partial(G, sf.grid, 1, 0), D2 = partial(G, sf.grid, 0, 1);
  for (int p = 0; p < N; ++p) {
    dg[p][0] << D1(p, 0), D1(p, 1), D1(p, 1), D1(p, 2);
    dg[p][1] << D2(p, 0), D2(p, 1), D2(p, 1), D2(p, 2);
  }
  return dg;
}

void check_grid(const GeometryField& geo, Eigen::Index n) {
  if (n != geo.size()) throw Error(ErrorCode::GridMismatch, "field size does not match geometry grid");
}

}  // namespace

GeometryField compute_geometry(const SurfaceField& sf) {
  const int N = sf.size();
  GeometryField geo;
  geo.grid = sf.grid;
  geo.g.resize(N);
  geo.g_inv.resize(N);
  geo.Kab.resize(N);
  geo.Kup.resize(N);
  geo.Kmix.resize(N);
  geo.sqrt_g.resize(N);
  geo.K.resize(N);
  geo.Rscalar.resize(N);
  geo.Gamma.resize(N);
  geo.Gamma_projection.resize(N);
  geo.normal.resize(N);
  geo.Xab_cov.resize(N);

  for (int p = 0; p < N; ++p) {
    const auto f = frame_from_jet<double>(sf.jets[p]);
    if (!(f.sqrt_g >= 1e-10))
      throw Error(ErrorCode::DegenerateParametrization,
                  "sqrt(g) < 1e-10 at grid point " + std::to_string(p));
    geo.g[p] = f.g;
    geo.g_inv[p] = f.ginv;
    geo.Kab[p] = f.Kab;
    geo.Kup[p] = f.Kup;
    geo.Kmix[p] = f.Kmix;
    geo.sqrt_g[p] = f.sqrt_g;
    geo.K[p] = f.K;
    geo.Rscalar[p] = f.R;
    geo.normal[p] = f.n;
    geo.Gamma_projection[p] = f.Gamma;
  }

  const auto dg = metric_partials(sf, geo.g);
  double gap = 0.0;
  for (int p = 0; p < N; ++p) {
    geo.Gamma[p] = christoffel_from_metric<double>(geo.g_inv[p], dg[p]);
    for (int c = 0; c < 2; ++c)
      gap = std::max(gap, (geo.Gamma[p][c] - geo.Gamma_projection[p][c]).cwiseAbs().maxCoeff());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Eigen::Vector3d y = sf.ddX(p, a, b);
        for (int c = 0; c < 2; ++c) y -= geo.Gamma[p][c](a, b) * sf.dX(p).col(c);
        geo.Xab_cov[p][a][b] = y;
      }
  }
  geo.gamma_discrepancy = gap;
  return geo;
}

Eigen::VectorXd laplace_beltrami(const GeometryField& geo, const Eigen::VectorXd& f) {
  check_grid(geo, f.size());
  const Eigen::VectorXd f1 = partial_axis(f, geo.grid, 0), f2 = partial_axis(f, geo.grid, 1);
  Eigen::VectorXd q1(f.size()), q2(f.size());
  for (int p = 0; p < geo.size(); ++p) {
    const auto& gi = geo.g_inv[p];
    q1(p) = geo.sqrt_g[p] * (gi(0, 0) * f1(p) + gi(0, 1) * f2(p));
    q2(p) = geo.sqrt_g[p] * (gi(1, 0) * f1(p) + gi(1, 1) * f2(p));
  }
  Eigen::VectorXd out = covariant_divergence_vector_density(geo, q1, q2);
  for (int p = 0; p < geo.size(); ++p) out(p) /= geo.sqrt_g[p];
  return out;
}

Eigen::VectorXd covariant_divergence_vector_density(const GeometryField& geo,
                                                    const Eigen::VectorXd& V1,
                                                    const Eigen::VectorXd& V2) {
  check_grid(geo, V1.size());
  check_grid(geo, V2.size());
  return partial_axis(V1, geo.grid, 0) + partial_axis(V2, geo.grid, 1);
}

double surface_integral(const GridSpec& grid, const Eigen::VectorXd& density) {
  if (density.size() != grid.size())
    throw Error(ErrorCode::GridMismatch, "density size does not match grid");
  NeumaierSum s;
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      s.add(grid.weight(0, i) * grid.weight(1, j) * density(grid.index(i, j)));
  return s.value();
}

Eigen::Vector3d surface_integral(const GridSpec& grid, const std::vector<Eigen::Vector3d>& density) {
  if (static_cast<int>(density.size()) != grid.size())
    throw Error(ErrorCode::GridMismatch, "density size does not match grid");
  Eigen::Vector3d out;
  for (int mu = 0; mu < 3; ++mu) {
    NeumaierSum s;
    for (int i = 0; i < grid.n1; ++i)
      for (int j = 0; j < grid.n2; ++j)
        s.add(grid.weight(0, i) * grid.weight(1, j) * density[grid.index(i, j)](mu));
    out(mu) = s.value();
  }
  return out;
}

double surface_integral(const GeometryField& geo, const Eigen::VectorXd& density,
                        bool multiply_sqrt_g) {
  check_grid(geo, density.size());
  if (!multiply_sqrt_g) return surface_integral(geo.grid, density);
  Eigen::VectorXd d = density;
  for (int p = 0; p < geo.size(); ++p) d(p) *= geo.sqrt_g[p];
  return surface_integral(geo.grid, d);
}

IdentityReport check_identities(const SurfaceField& sf, const GeometryField& geo,
                                std::uint64_t seed) {
  const int N = sf.size();
  check_grid(geo, N);
  IdentityReport rep;

  // Partials of the stored connection.
  std::vector<Pair<Gam>> dGamma(N);
  if (sf.analytic) {
    for (int p = 0; p < N; ++p) {
      const auto f = frame_from_jet<Jet<2>>(sf.jets[p]);
      Pair<Mat2<Jet<1>>> dg;
      Mat2<Jet<1>> ginv;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ginv(a, b) = truncate<1>(f.ginv(a, b));
      for (int c = 0; c < 2; ++c)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) dg[c](a, b) = derivative(f.g(a, b), c);
      const auto G = christoffel_from_metric<Jet<1>>(ginv, dg);
      for (int e = 0; e < 2; ++e)
        for (int c = 0; c < 2; ++c)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) dGamma[p][e][c](a, b) = derivative(G[c](a, b), e).value();
    }
  } else {
    Eigen::MatrixXd G(N, 6);
    for (int p = 0; p < N; ++p)
      for (int c = 0; c < 2; ++c)
        G.row(p).segment(3 * c, 3) << geo.Gamma[p][c](0, 0), geo.Gamma[p][c](0, 1),
            geo.Gamma[p][c](1, 1);
    const Eigen::MatrixXd D[2] = {partial(G, sf.grid, 1, 0), partial(G, sf.grid, 0, 1)};
    for (int p = 0; p < N; ++p)
      for (int e = 0; e < 2; ++e)
        for (int c = 0; c < 2; ++c) {
          const auto r = D[e].row(p).segment(3 * c, 3);
          dGamma[p][e][c] << r(0), r(1), r(1), r(2);
        }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);

  for (int p = 0; p < N; ++p) {
    const auto& gi = geo.g_inv[p];
    const auto& G = geo.Gamma[p];
    const Eigen::Matrix<double, 3, 2> e = sf.dX(p);
    const Eigen::Vector3d& n = geo.normal[p];

    rep.gauss = std::max(rep.gauss, std::abs(ricci_scalar(gi, G, dGamma[p]) - geo.Rscalar[p]));

    // Codazzi: g^bc (nabla_b K_ac - nabla_a K_bc) with curvature partials from the jets.
    const auto f1 = frame_from_jet<Jet<1>>(sf.jets[p]);
    const auto& Kd = geo.Kab[p];
    auto cov = [&](int c, int a, int b) {  // nabla_c K_ab
      double v = derivative(f1.Kab(a, b), c).value();
      for (int d = 0; d < 2; ++d) v -= G[d](c, a) * Kd(d, b) + G[d](c, b) * Kd(a, d);
      return v;
    };
    for (int a = 0; a < 2; ++a) {
      double r = 0.0;
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) r += gi(b, c) * (cov(b, a, c) - cov(a, b, c));
      rep.codazzi = std::max(rep.codazzi, std::abs(r));
    }

    for (int k = 0; k < 2; ++k) {
      const Eigen::Vector3d u(U(rng), U(rng), U(rng)), v(U(rng), U(rng), U(rng));
      double proj = u.dot(n) * v.dot(n);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) proj += gi(a, b) * u.dot(e.col(a)) * v.dot(e.col(b));
      rep.completeness = std::max(rep.completeness, std::abs(u.dot(v) - proj));
    }

    for (int c = 0; c < 2; ++c)
      rep.christoffel =
          std::max(rep.christoffel, (G[c] - geo.Gamma_projection[p][c]).cwiseAbs().maxCoeff());
    rep.metric_inverse = std::max(
        rep.metric_inverse, (gi * geo.g[p] - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    rep.normal_unit = std::max(rep.normal_unit, std::abs(n.squaredNorm() - 1.0));
    rep.normal_tangent =
        std::max({rep.normal_tangent, std::abs(n.dot(e.col(0))), std::abs(n.dot(e.col(1)))});
    rep.gauss_product =
        std::max(rep.gauss_product, std::abs(geo.Rscalar[p] - 2.0 * geo.Kmix[p].determinant()));
  }
  return rep;
}

}  // namespace memkernel
