#include "memkernel/second_variation.hpp"

#include <cmath>

#include "memkernel/error.hpp"

namespace memkernel {

namespace {

using J1 = Jet<1>;

void check_supported(const EnergyModel& model) {
  for (const auto& t : model.terms)
    if (t.kind != TermKind::Soap && t.kind != TermKind::Bending && t.kind != TermKind::Mean)
      throw Error(ErrorCode::UnsupportedTerm,
                  "second variation is implemented for soap, bending and mean terms, not " +
                      to_string(t.kind));
}

void check_grids(const SurfaceField& sf, const GeometryField& geo, const VariationField* W = nullptr) {
  if (!sf.grid.same_shape(geo.grid) || (W && !sf.grid.same_shape(W->grid)))
    throw Error(ErrorCode::GridMismatch, "surface, geometry and variation grids differ");
}

void check_closed(const SurfaceField& sf, const char* what) {
  if (!sf.closed) throw Error(ErrorCode::NotClosedSurface, std::string(what) + " needs a closed surface");
}

Vec3<J1> lift_vec(const Eigen::Vector3d& v) { return Vec3<J1>(J1(v(0)), J1(v(1)), J1(v(2))); }

/// Momenta as functions of (X_a, X_ab), linearized along one seeded direction.
PhaseGradient<J1> momenta(const PreparedModel& pm, const Pair<Vec3<J1>>& e, const Sym<Vec3<J1>>& Y,
                          const Vec3<J1>& X, int p) {
  const LocalFrame<J1> f = make_frame<J1>(X, e[0], e[1], Y[0][0], Y[0][1], Y[1][1]);
  PhaseGradient<J1> out;
  for (size_t k = 0; k < pm.model.terms.size(); ++k)
    add_term_gradient(pm.model.terms[k], f, Jet4(pm.modulus[k][p].value()), Jet4(), out);
  return out;
}

HessianBlocks blocks_at(const PreparedModel& pm, const SurfaceField& sf, const GeometryField& geo, int p) {
  const auto d = sf.dX(p);
  const Vec3<J1> X = lift_vec(sf.X(p));
  Pair<Vec3<J1>> e0{lift_vec(d.col(0)), lift_vec(d.col(1))};
  // Covariant second derivatives are purely normal, so the projected connection vanishes here.
  Sym<Vec3<J1>> Y0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) Y0[a][b] = lift_vec(geo.Xab_cov[p][a][b]);

  HessianBlocks h;
  auto column = [&](const PhaseGradient<J1>& g, Eigen::Matrix<double, 6, 1>& ca,
                    Eigen::Matrix<double, 12, 1>& cab) {
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        ca(a * 3 + mu) = g.Pa[a](mu).c[1];
        for (int b = 0; b < 2; ++b) cab((a * 2 + b) * 3 + mu) = g.Pab[a][b](mu).c[1];
      }
  };
  Eigen::Matrix<double, 6, 1> ca;
  Eigen::Matrix<double, 12, 1> cab;
  for (int c = 0; c < 2; ++c)
    for (int nu = 0; nu < 3; ++nu) {
      auto e = e0;
      e[c](nu).c[1] = 1.0;
      column(momenta(pm, e, Y0, X, p), ca, cab);
      h.H_aa.col(c * 3 + nu) = ca;
      h.H_ab_c.col(c * 3 + nu) = cab;
    }
  for (int c = 0; c < 2; ++c)
    for (int dd = c; dd < 2; ++dd)
      for (int nu = 0; nu < 3; ++nu) {
        auto Y = Y0;
        Y[c][dd](nu).c[1] = 1.0;
        Y[dd][c](nu).c[1] = 1.0;
        column(momenta(pm, e0, Y, X, p), ca, cab);
        const double w = c == dd ? 1.0 : 0.5;
        for (const auto& [r, s] : {std::pair{c, dd}, std::pair{dd, c}}) {
          h.H_a_cd.col((r * 2 + s) * 3 + nu) = w * ca;
          h.H_abcd.col((r * 2 + s) * 3 + nu) = w * cab;
        }
      }
  const PhaseGradient<J1> base = momenta(pm, e0, Y0, X, p);
  for (int a = 0; a < 2; ++a) {
    for (int mu = 0; mu < 3; ++mu) h.Pa[a](mu) = base.Pa[a](mu).value();
    for (int b = 0; b < 2; ++b)
      for (int mu = 0; mu < 3; ++mu) h.Pab[a][b](mu) = base.Pab[a][b](mu).value();
  }
  return h;
}

Pair<Eigen::Matrix2d> connection_variation_at(const SurfaceField& sf, const GeometryField& geo,
                                              const VariationField& W, int p) {
  const auto d = sf.dX(p);
  const Eigen::Matrix2d& gi = geo.g_inv[p];
  Pair<Eigen::Matrix2d> dG;
  for (int c = 0; c < 2; ++c) {
    const Eigen::Vector3d Xup = gi(c, 0) * d.col(0) + gi(c, 1) * d.col(1);
    const Eigen::Vector3d Wup = gi(c, 0) * W.Wa[p][0] + gi(c, 1) * W.Wa[p][1];
    const double nW = geo.normal[p].dot(Wup);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dG[c](a, b) = Xup.dot(W.Wab[p][a][b]) - geo.Kab[p](a, b) * nW;
  }
  return dG;
}

struct Flat {
  Eigen::Matrix<double, 6, 1> e;
  Eigen::Matrix<double, 12, 1> Y;
};

Flat flatten(const VariationField& W, int p) {
  Flat f;
  for (int a = 0; a < 2; ++a)
    for (int mu = 0; mu < 3; ++mu) {
      f.e(a * 3 + mu) = W.Wa[p][a](mu);
      for (int b = 0; b < 2; ++b) f.Y((a * 2 + b) * 3 + mu) = W.Wab[p][a][b](mu);
    }
  return f;
}

/// Contractions shared by the expanded forms: A(a, b) = X_a . W_b, N(a, b) = n . W_ab,
/// v(a) = n . W_a, L = n . lap W, XL(a) = X^a . lap W.
struct Contractions {
  Eigen::Matrix2d A, N, gi, Ku, Km;
  Eigen::Vector2d v, XL;
  double K = 0, L = 0, sqrt_g = 0;

  Contractions(const SurfaceField& sf, const GeometryField& geo, const VariationField& W, int p)
      : gi(geo.g_inv[p]), Ku(geo.Kup[p]), Km(geo.Kmix[p]), K(geo.K[p]), sqrt_g(geo.sqrt_g[p]) {
    const auto d = sf.dX(p);
    const Eigen::Vector3d& n = geo.normal[p];
    Eigen::Vector3d lap = Eigen::Vector3d::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) lap += gi(a, b) * W.Wab[p][a][b];
    for (int a = 0; a < 2; ++a) {
      v(a) = n.dot(W.Wa[p][a]);
      for (int b = 0; b < 2; ++b) {
        A(a, b) = d.col(a).dot(W.Wa[p][b]);
        N(a, b) = n.dot(W.Wab[p][a][b]);
      }
    }
    L = n.dot(lap);
    const Eigen::Vector2d Xlap(d.col(0).dot(lap), d.col(1).dot(lap));
    XL = gi * Xlap;
  }
};

}  // namespace

HessianBlocks hessian_blocks(const EnergyModel& model, const SurfaceField& sf,
                             const GeometryField& geo, int point) {
  check_supported(model);
  check_grids(sf, geo);
  if (point < 0 || point >= sf.size()) throw Error(ErrorCode::InvalidParameter, "point index out of range");
  return blocks_at(prepare(model, sf.grid), sf, geo, point);
}

double mixed_block_gap(const HessianBlocks& h) {
  const double scale = std::max(h.H_a_cd.norm(), h.H_ab_c.norm());
  return scale == 0.0 ? 0.0 : (h.H_a_cd - h.H_ab_c.transpose()).norm() / scale;
}

std::vector<Pair<Eigen::Matrix2d>> connection_variation(const SurfaceField& sf,
                                                        const GeometryField& geo,
                                                        const VariationField& W) {
  check_grids(sf, geo, &W);
  std::vector<Pair<Eigen::Matrix2d>> out(sf.size());
  for (int p = 0; p < sf.size(); ++p) out[p] = connection_variation_at(sf, geo, W, p);
  return out;
}

Eigen::VectorXd second_variation_density(const EnergyModel& model, const SurfaceField& sf,
                                         const GeometryField& geo, const VariationField& W) {
  check_supported(model);
  check_grids(sf, geo, &W);
  const PreparedModel pm = prepare(model, sf.grid);
  Eigen::VectorXd out(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const HessianBlocks h = blocks_at(pm, sf, geo, p);
    const Flat w = flatten(W, p);
    double v = w.e.dot(h.H_aa * w.e) + w.e.dot(h.H_a_cd * w.Y) + w.Y.dot(h.H_ab_c * w.e) +
               w.Y.dot(h.H_abcd * w.Y);
    const auto dG = connection_variation_at(sf, geo, W, p);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) v -= h.Pab[a][b].dot(W.Wa[p][c]) * dG[c](a, b);
    out(p) = v;
  }
  return out;
}

double second_variation(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo,
                        const VariationField& W) {
  check_supported(model);
  check_closed(sf, "second variation");
  return surface_integral(sf.grid, second_variation_density(model, sf, geo, W));
}

double bending_second_variation_expanded(const ScalarProfile& kappa, const SurfaceField& sf,
                                         const GeometryField& geo, const VariationField& W) {
  check_closed(sf, "second variation");
  check_grids(sf, geo, &W);
  const auto k = profile_jets(kappa, sf.grid);
  Eigen::VectorXd dens(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const Contractions c(sf, geo, W, p);
    const Eigen::Matrix2d gA = c.gi * c.A, Ag = c.A * c.gi, gAg = c.gi * c.A * c.gi;
    const double trA = gA.trace(), K = c.K;
    double s = c.L * c.L;
    s += 2.0 * (2.0 * c.Ku - K * c.gi).cwiseProduct(c.A).sum() * c.L;
    s += 4.0 * K * gAg.transpose().cwiseProduct(c.N).sum();
    s -= 0.5 * K * K * c.v.dot(c.gi * c.v);
    s -= 2.0 * K * c.v.dot(c.Ku * c.v);
    const double KA = c.Ku.cwiseProduct(c.A).sum();
    s += 4.0 * KA * KA;
    s += 2.0 * K * c.Ku.cwiseProduct(c.A * Ag.transpose()).sum();
    s += 2.0 * K * c.v.dot(c.XL);
    s += 0.5 * K * K * (trA * trA - gAg.cwiseProduct(c.A.transpose()).sum());
    // last pair: -4 K K^ab (X_b.W_a)(X^c.W_c) + 4 K K^bc (X_c.W_a)(X^a.W_b)
    s -= 4.0 * K * c.Ku.cwiseProduct(c.A.transpose()).sum() * trA;
    s += 4.0 * K * (c.Ku * c.A * gA).trace();
    dens(p) = 2.0 * k[p].value() * c.sqrt_g * s;
  }
  return surface_integral(sf.grid, dens);
}

double mean_second_variation_expanded(const ScalarProfile& beta, const SurfaceField& sf,
                                      const GeometryField& geo, const VariationField& W) {
  check_closed(sf, "second variation");
  check_grids(sf, geo, &W);
  const auto bj = profile_jets(beta, sf.grid);
  Eigen::VectorXd dens(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const Contractions c(sf, geo, W, p);
    const Eigen::Matrix2d gA = c.gi * c.A, Ag = c.A * c.gi, gAg = c.gi * c.A * c.gi;
    const double trA = gA.trace();
    double s = 4.0 * gAg.cwiseProduct(c.N).sum();
    s -= 2.0 * trA * c.L;
    s += 2.0 * c.v.dot(c.XL);
    s -= 2.0 * c.v.dot(c.Ku * c.v);
    s += c.K * (trA * trA - (gA * gA).trace());
    // 2 K_d^a X^cd and -2 K_d^c X^ad contracted with W_a W_c; B(c, a) = X^c . W_a
    const Eigen::Matrix2d& B = gA;
    for (int a = 0; a < 2; ++a)
      for (int cc = 0; cc < 2; ++cc)
        for (int d = 0; d < 2; ++d) {
          s += 2.0 * c.Km(d, a) * (B(cc, a) * B(d, cc) - B(d, a) * B(cc, cc));
          s -= 2.0 * c.Km(d, cc) * (B(a, a) * B(d, cc) - B(d, a) * B(a, cc));
        }
    s += 2.0 * c.Ku.cwiseProduct(Ag * c.A.transpose()).sum();
    dens(p) = bj[p].value() * c.sqrt_g * s;
  }
  return surface_integral(sf.grid, dens);
}

double soap_normal_second_variation(const SurfaceField& sf, const GeometryField& geo,
                                    const ScalarProfile& phi, double sigma) {
  check_closed(sf, "soap normal second variation");
  check_grids(sf, geo);
  const auto jets = profile_jets(phi, sf.grid);
  Eigen::VectorXd dens(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const Eigen::Vector2d d(jets[p].partial(1, 0), jets[p].partial(0, 1));
    const double f = jets[p].value();
    dens(p) = geo.sqrt_g[p] * sigma * (d.dot(geo.g_inv[p] * d) + geo.Rscalar[p] * f * f);
  }
  return surface_integral(sf.grid, dens);
}

Eigen::VectorXd legendre_hadamard(const EnergyModel& model, const SurfaceField& sf,
                                  const GeometryField& geo, const VariationField& W) {
  check_supported(model);
  check_grids(sf, geo, &W);
  const PreparedModel pm = prepare(model, sf.grid);
  Eigen::VectorXd out(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const Flat w = flatten(W, p);
    out(p) = w.Y.dot(blocks_at(pm, sf, geo, p).H_abcd * w.Y);
  }
  return out;
}

SecondVariationMatch oracle_second_variation_match(const EnergyModel& model, const SurfaceField& sf,
                                                   const GeometryField& geo, const VariationField& W,
                                                   const OracleConfig& cfg) {
  SecondVariationMatch m;
  m.analytic = second_variation(model, sf, geo, W);
  m.fd = fd_second_variation(model, sf, geo, W, cfg);
  m.gap = std::abs(m.analytic - m.fd.value);
  return m;
}

}  // namespace memkernel
