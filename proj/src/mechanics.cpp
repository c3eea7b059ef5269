#include "memkernel/mechanics.hpp"

#include <cmath>

#include "memkernel/error.hpp"
#include "memkernel/finite_difference.hpp"

namespace memkernel {

namespace {

using J2 = Jet<2>;
using J1 = Jet<1>;

template <int N>
Vec3<Jet<N - 1>> dvec(const Vec3<Jet<N>>& v, int axis) {
  return Vec3<Jet<N - 1>>(derivative(v(0), axis), derivative(v(1), axis), derivative(v(2), axis));
}

template <int M, int N>
Vec3<Jet<M>> tvec(const Vec3<Jet<N>>& v) {
  return Vec3<Jet<M>>(truncate<M>(v(0)), truncate<M>(v(1)), truncate<M>(v(2)));
}

template <int N>
Eigen::Vector3d vval(const Vec3<Jet<N>>& v) {
  return {v(0).value(), v(1).value(), v(2).value()};
}

void check_grids(const SurfaceField& sf, const GeometryField& geo) {
  if (!sf.grid.same_shape(geo.grid))
    throw Error(ErrorCode::GridMismatch, "surface and geometry grids differ");
}

/// Jet mechanics at one point: P(X) and its partials are exact to second order in the jets.
void point_stress(const PreparedModel& pm, const SurfaceField& sf, int p, StressField& out) {
  const LocalFrame<J2> f = frame_from_jet<J2>(sf.jets[p]);
  const PhaseGradient<J2> pg = model_gradient(pm, f, p);

  Pair<Vec3<J1>> ft;
  for (int a = 0; a < 2; ++a) {
    Vec3<J2> gp = Vec3<J2>::Zero();
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) gp += pg.Pab[d][b] * f.Gamma[a](b, d);
    ft[a] = tvec<1>(gp) - tvec<1>(pg.Pa[a]);
    for (int b = 0; b < 2; ++b) ft[a] += dvec(pg.Pab[a][b], b);
  }

  const Eigen::Vector3d source = vval(pg.dX);
  Eigen::Vector3d div = Eigen::Vector3d::Zero(), tdiv = Eigen::Vector3d::Zero(),
                  ang = -vval(f.X).cross(source);
  for (int a = 0; a < 2; ++a) {
    Vec3<J2> moment = Vec3<J2>::Zero();  // X_b x f^ab
    for (int b = 0; b < 2; ++b) moment -= cross(f.e[b], pg.Pab[a][b]);
    const Vec3<J1> m = cross(tvec<1>(f.X), ft[a]) + tvec<1>(moment);
    div += vval(dvec(ft[a], a));
    tdiv += vval(dvec(m, a));
    ang += vval(f.e[a]).cross(vval(ft[a])) + vval(dvec(moment, a));
    out.f_tilde_a[p][a] = vval(ft[a]);
    out.m_tilde_a[p][a] = vval(m);
    for (int b = 0; b < 2; ++b) out.f_tilde_ab[p][a][b] = -vval(pg.Pab[a][b]);
  }
  out.source[p] = source;
  out.force_div[p] = div;
  out.EL[p] = div + source;
  out.torque_div[p] = tdiv;
  out.angular_residual[p] = ang;
}

StressField compute_stress(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo) {
  check_grids(sf, geo);
  const PreparedModel pm = prepare(model, sf.grid);
  StressField s;
  s.grid = sf.grid;
  const int n = sf.size();
  s.f_tilde_a.resize(n);
  s.m_tilde_a.resize(n);
  s.f_tilde_ab.resize(n);
  s.EL.resize(n);
  s.source.resize(n);
  s.force_div.resize(n);
  s.torque_div.resize(n);
  s.angular_residual.resize(n);
  for (int p = 0; p < n; ++p) point_stress(pm, sf, p, s);

  if (sf.grid.structured()) {
    s.force_div_fd.assign(n, Eigen::Vector3d::Zero());
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        Eigen::VectorXd comp(n);
        for (int p = 0; p < n; ++p) comp(p) = s.f_tilde_a[p][a](mu);
        const Eigen::VectorXd d = partial_axis(comp, sf.grid, a);
        for (int p = 0; p < n; ++p) s.force_div_fd[p](mu) += d(p);
      }
  }
  return s;
}

/// Value, gradient and Hessian of a scalar jet, with covariant helpers.
struct ScalarDerivs {
  double v = 0;
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  Eigen::Matrix2d dd = Eigen::Matrix2d::Zero();

  explicit ScalarDerivs(const J2& j) : v(j.value()) {
    d << j.partial(1, 0), j.partial(0, 1);
    dd << j.partial(2, 0), j.partial(1, 1), j.partial(1, 1), j.partial(0, 2);
  }
  Eigen::Matrix2d hessian(const Pair<Eigen::Matrix2d>& G) const {
    return dd - G[0] * d(0) - G[1] * d(1);
  }
  double laplacian(const Eigen::Matrix2d& ginv, const Pair<Eigen::Matrix2d>& G) const {
    return (ginv.cwiseProduct(hessian(G))).sum();
  }
};

Eigen::Vector3d tangent_from_up(const LocalFrame<double>& f, const Eigen::Vector2d& up) {
  return f.e[0] * up(0) + f.e[1] * up(1);
}

/// sqrt(g) [beta R - lap beta] n - sqrt(g) K d^a beta X_a
Eigen::Vector3d mean_closed(const LocalFrame<double>& f, const ScalarDerivs& beta) {
  const Eigen::Vector2d up = f.ginv * beta.d;
  return f.sqrt_g * ((beta.v * f.R - beta.laplacian(f.ginv, f.Gamma)) * f.n -
                     f.K * tangent_from_up(f, up));
}

Eigen::Vector3d term_closed_form(const EnergyTerm& t, const LocalFrame<double>& f, const ScalarDerivs& K,
                                 const Jet4& modulus, const Jet4& phi) {
  const ScalarDerivs m(lift<J2>(modulus));
  const double sg = f.sqrt_g;
  const Eigen::Vector2d dm_up = f.ginv * m.d;
  switch (t.kind) {
    case TermKind::Soap: return sg * (m.v * f.K * f.n - tangent_from_up(f, dm_up));
    case TermKind::Bending: {
      const double lapK = K.laplacian(f.ginv, f.Gamma);
      const double cross_term = 4.0 * dm_up.dot(K.d) + 2.0 * f.K * m.laplacian(f.ginv, f.Gamma);
      return sg * ((m.v * (-2.0 * lapK - f.K * f.K * f.K + 2.0 * f.K * f.R) - cross_term) * f.n -
                   f.K * f.K * tangent_from_up(f, dm_up));
    }
    case TermKind::Mean: return mean_closed(f, m);
    case TermKind::Gaussian: {
      const double normal = ((f.Kup - f.ginv * f.K).cwiseProduct(m.hessian(f.Gamma))).sum();
      return sg * (2.0 * normal * f.n - f.R * tangent_from_up(f, dm_up));
    }
    case TermKind::Volume: return -t.pressure * sg * f.n;
    case TermKind::Magnetic: {
      if (!t.B.constant())
        throw Error(ErrorCode::UnsupportedTerm, "closed form for magnetic needs a uniform field");
      const Eigen::Vector3d& B = t.B.B0;
      const double nB = f.n.dot(B);
      double kk = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) kk += f.Kab(a, b) * f.eup[a].dot(B) * f.eup[b].dot(B);
      return t.alpha * sg * (f.K * nB * nB - 2.0 * kk) * f.n;
    }
    case TermKind::PhaseField: {
      const ScalarDerivs ph(lift<J2>(phi));
      const Eigen::Vector2d up = f.ginv * ph.d;
      const double grad2 = up.dot(ph.d);
      const double V = polynomial(t.potential, ph.v), dV = polynomial(t.potential, ph.v, 1);
      Eigen::Matrix2d T = f.ginv * (0.5 * t.lambda * grad2 + V) - t.lambda * up * up.transpose();
      const double normal = T.cwiseProduct(f.Kab).sum();
      const double lap = ph.laplacian(f.ginv, f.Gamma);
      ScalarDerivs beta = ph;
      beta.v *= t.beta_phi;
      beta.d *= t.beta_phi;
      beta.dd *= t.beta_phi;
      return sg * (normal * f.n + (t.lambda * lap - dV) * tangent_from_up(f, up)) + mean_closed(f, beta);
    }
  }
  return Eigen::Vector3d::Zero();
}

}  // namespace

StressField linear_stress(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo) {
  return compute_stress(model, sf, geo);
}

StressField euler_lagrange(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo) {
  return compute_stress(model, sf, geo);
}

StressField angular_stress(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo) {
  return compute_stress(model, sf, geo);
}

std::vector<Eigen::Vector3d> shape_residual_closed_form(const EnergyModel& model,
                                                        const SurfaceField& sf,
                                                        const GeometryField& geo) {
  check_grids(sf, geo);
  const PreparedModel pm = prepare(model, sf.grid);
  std::vector<Eigen::Vector3d> out(sf.size(), Eigen::Vector3d::Zero());
  for (int p = 0; p < sf.size(); ++p) {
    const LocalFrame<double> f = frame_from_jet<double>(sf.jets[p]);
    const ScalarDerivs K(frame_from_jet<J2>(sf.jets[p]).K);
    for (size_t k = 0; k < model.terms.size(); ++k)
      out[p] += term_closed_form(model.terms[k], f, K, pm.modulus[k][p],
                                 pm.phi[k].empty() ? Jet4() : pm.phi[k][p]);
  }
  return out;
}

Balance global_balance(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo) {
  if (!sf.closed) throw Error(ErrorCode::NotClosedSurface, "global balance needs a closed surface");
  const StressField s = compute_stress(model, sf, geo);
  return {surface_integral(sf.grid, s.EL), surface_integral(sf.grid, s.torque_div)};
}

TangentialReport tangential_el_check(const EnergyModel& model, const SurfaceField& sf,
                                     const GeometryField& geo) {
  if (model.heterogeneous())
    throw Error(ErrorCode::NotReparametrizationInvariant,
                "model has position-dependent moduli or a phase field");
  const StressField s = compute_stress(model, sf, geo);
  TangentialReport r;
  for (int p = 0; p < sf.size(); ++p) {
    const auto d = sf.dX(p);
    for (int a = 0; a < 2; ++a) {
      const double v = std::abs(s.EL[p].dot(d.col(a)));
      r.max_abs = std::max(r.max_abs, v);
      r.max_relative = std::max(r.max_relative, v / (s.EL[p].norm() * d.col(a).norm() + 1e-30));
    }
  }
  return r;
}

MarangoniSplit marangoni_force(const EnergyModel& model, const SurfaceField& sf,
                               const GeometryField& geo) {
  const StressField s = compute_stress(model, sf, geo);
  const auto closed = shape_residual_closed_form(model, sf, geo);
  MarangoniSplit m;
  for (int p = 0; p < sf.size(); ++p) {
    const Eigen::Vector3d& n = geo.normal[p];
    m.el_normal.push_back(s.EL[p].dot(n));
    m.closed_normal.push_back(closed[p].dot(n));
    m.el_tangential.push_back(s.EL[p] - s.EL[p].dot(n) * n);
    m.closed_tangential.push_back(closed[p] - closed[p].dot(n) * n);
  }
  return m;
}

GaugeReport noether_gauge_check(const SurfaceField& sf, const GeometryField& geo,
                                const Eigen::VectorXd& s) {
  check_grids(sf, geo);
  if (s.size() != sf.size()) throw Error(ErrorCode::GridMismatch, "gauge field has the wrong size");
  // added current V^a = eps^ab d_b s
  const Eigen::VectorXd V1 = partial_axis(s, sf.grid, 1);
  const Eigen::VectorXd V2 = -partial_axis(s, sf.grid, 0);
  const Eigen::VectorXd div = partial_axis(V1, sf.grid, 0) + partial_axis(V2, sf.grid, 1);
  return {div.cwiseAbs().maxCoeff(), std::abs(surface_integral(sf.grid, div))};
}

}  // namespace memkernel
