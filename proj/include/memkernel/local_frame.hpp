#pragma once

#include <array>

#include "memkernel/field.hpp"
#include "memkernel/jet.hpp"

namespace memkernel {

template <class S>
S dot(const Vec3<S>& a, const Vec3<S>& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

template <class S>
Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
  return Vec3<S>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                 a(0) * b(1) - a(1) * b(0));
}

template <class S>
using Pair = std::array<S, 2>;
template <class S>
using Sym = std::array<std::array<S, 2>, 2>;

/// Adapted frame and curvature at one point, generic in the scalar type so the
/// same algebra runs on plain values and on jets.
template <class S>
struct LocalFrame {
  Vec3<S> X;
  Pair<Vec3<S>> e;       // X_a
  Sym<Vec3<S>> Xab;      // second derivatives as supplied
  Mat2<S> g, ginv;
  S sqrt_g;
  Vec3<S> n;
  Pair<Vec3<S>> eup;     // X^a = g^ab X_b
  Mat2<S> Kab, Kup, Kmix;  // K_ab, K^ab, Kmix(a, b) = K_a^b
  S K, R;                // trace and K^2 - K_ab K^ab
  Pair<Mat2<S>> Gamma;   // Gamma[c](a, b) = X^c . X_ab
};

template <class S>
LocalFrame<S> make_frame(const Vec3<S>& X, const Vec3<S>& X1, const Vec3<S>& X2,
                         const Vec3<S>& X11, const Vec3<S>& X12, const Vec3<S>& X22) {
  LocalFrame<S> f;
  f.X = X;
  f.e = {X1, X2};
  f.Xab = {{{X11, X12}, {X12, X22}}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) f.g(a, b) = dot(f.e[a], f.e[b]);
  const S det = f.g(0, 0) * f.g(1, 1) - f.g(0, 1) * f.g(1, 0);
  const S idet = S(1.0) / det;
  f.ginv(0, 0) = f.g(1, 1) * idet;
  f.ginv(1, 1) = f.g(0, 0) * idet;
  f.ginv(0, 1) = -f.g(0, 1) * idet;
  f.ginv(1, 0) = f.ginv(0, 1);
  using std::sqrt;
  f.sqrt_g = sqrt(det);
  f.n = cross(X1, X2) * (S(1.0) / f.sqrt_g);
  for (int a = 0; a < 2; ++a) f.eup[a] = f.e[0] * f.ginv(a, 0) + f.e[1] * f.ginv(a, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) f.Kab(a, b) = -dot(f.n, f.Xab[a][b]);
  f.Kup = f.ginv * f.Kab * f.ginv;
  f.Kmix = f.Kab * f.ginv;
  f.K = f.Kmix(0, 0) + f.Kmix(1, 1);
  S kk(0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) kk += f.Kab(a, b) * f.Kup(a, b);
  f.R = f.K * f.K - kk;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) f.Gamma[c](a, b) = dot(f.eup[c], f.Xab[a][b]);
  return f;
}

/// Frame of scalar order M <= 2 from a surface jet (needs jets of order M + 2).
template <class S>
LocalFrame<S> frame_from_jet(const SurfaceJet& J) {
  Vec3<S> X, X1, X2, X11, X12, X22;
  for (int mu = 0; mu < 3; ++mu) {
    const Jet<3> d1 = derivative(J(mu), 0), d2 = derivative(J(mu), 1);
    X(mu) = lift<S>(J(mu));
    X1(mu) = lift<S>(d1);
    X2(mu) = lift<S>(d2);
    X11(mu) = lift<S>(derivative(d1, 0));
    X12(mu) = lift<S>(derivative(d1, 1));
    X22(mu) = lift<S>(derivative(d2, 1));
  }
  return make_frame(X, X1, X2, X11, X12, X22);
}

/// Christoffel symbols from the metric and its first partials, dg[c](a, b) = d_c g_ab.
template <class S>
Pair<Mat2<S>> christoffel_from_metric(const Mat2<S>& ginv, const Pair<Mat2<S>>& dg) {
  Pair<Mat2<S>> G;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        S s(0.0);
        for (int d = 0; d < 2; ++d)
          s += ginv(c, d) * (dg[a](b, d) + dg[b](a, d) - dg[d](a, b));
        G[c](a, b) = 0.5 * s;
      }
  return G;
}

/// Scalar curvature from the connection and its partials, dG[e][c](a, b) = d_e Gamma^c_ab.
inline double ricci_scalar(const Eigen::Matrix2d& ginv, const Pair<Eigen::Matrix2d>& G,
                           const Pair<Pair<Eigen::Matrix2d>>& dG) {
  // R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb, Ricci_bd = R^a_bad
  double R = 0.0;
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d) {
      double ric = 0.0;
      for (int a = 0; a < 2; ++a) {
        ric += dG[a][a](d, b) - dG[d][a](a, b);
        for (int e = 0; e < 2; ++e) ric += G[a](a, e) * G[e](d, b) - G[a](d, e) * G[e](a, b);
      }
      R += ginv(b, d) * ric;
    }
  return R;
}

}  // namespace memkernel
