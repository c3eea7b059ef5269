#pragma once

#include <string>
#include <vector>

#include "memkernel/catalog.hpp"
#include "memkernel/field.hpp"
#include "memkernel/geometry.hpp"
#include "memkernel/local_frame.hpp"

namespace memkernel {

enum class TermKind { Soap, Bending, Mean, Gaussian, Volume, PhaseField, Magnetic };

std::string to_string(TermKind kind);

/// Spatial field B(X) = B0 + M X.
struct AffineField {
  Eigen::Vector3d B0 = Eigen::Vector3d::Zero();
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();

  bool constant() const { return M.isZero(0); }
  template <class S>
  Vec3<S> at(const Vec3<S>& X) const {
    Vec3<S> B = B0.cast<S>();
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu)
        if (M(mu, nu) != 0.0) B(mu) += M(mu, nu) * X(nu);
    return B;
  }
};

/// One energy density. Moduli are profiles over the parameters (constants are the usual case).
///   Soap       sigma sqrt(g)
///   Bending    kappa sqrt(g) K^2
///   Mean       beta sqrt(g) K
///   Gaussian   kappa_bar sqrt(g) R
///   Volume     -P (1/3) sqrt(g) n.X        (pressure times enclosed volume)
///   PhaseField sqrt(g) [lambda/2 (grad phi)^2 + V(phi) + beta_phi phi K]
///   Magnetic   -alpha sqrt(g) (n.B(X))^2
struct EnergyTerm {
  TermKind kind = TermKind::Soap;
  ScalarProfile modulus = ScalarProfile::constant(0.0);
  double pressure = 0;
  double lambda = 0, beta_phi = 0;
  std::vector<double> potential;  // V(phi) = sum_k potential[k] phi^k
  ScalarProfile phi;
  bool has_phi = false;
  double alpha = 0;
  AffineField B;

  static EnergyTerm soap(const ScalarProfile& sigma) { return moduli(TermKind::Soap, sigma); }
  static EnergyTerm bending(const ScalarProfile& kappa) { return moduli(TermKind::Bending, kappa); }
  static EnergyTerm mean(const ScalarProfile& beta) { return moduli(TermKind::Mean, beta); }
  static EnergyTerm gaussian(const ScalarProfile& kappa_bar) {
    return moduli(TermKind::Gaussian, kappa_bar);
  }
  static EnergyTerm soap(double sigma) { return soap(ScalarProfile::constant(sigma)); }
  static EnergyTerm bending(double kappa) { return bending(ScalarProfile::constant(kappa)); }
  static EnergyTerm mean(double beta) { return mean(ScalarProfile::constant(beta)); }
  static EnergyTerm gaussian(double kappa_bar) { return gaussian(ScalarProfile::constant(kappa_bar)); }
  static EnergyTerm volume(double P) {
    EnergyTerm t;
    t.kind = TermKind::Volume;
    t.pressure = P;
    return t;
  }
  static EnergyTerm phase_field(double lambda, double beta_phi, std::vector<double> potential,
                                const ScalarProfile& phi) {
    EnergyTerm t;
    t.kind = TermKind::PhaseField;
    t.lambda = lambda;
    t.beta_phi = beta_phi;
    t.potential = std::move(potential);
    t.phi = phi;
    t.has_phi = true;
    return t;
  }
  static EnergyTerm magnetic(double alpha, const AffineField& B) {
    EnergyTerm t;
    t.kind = TermKind::Magnetic;
    t.alpha = alpha;
    t.B = B;
    return t;
  }

  bool heterogeneous() const {
    return (kind == TermKind::Soap || kind == TermKind::Bending || kind == TermKind::Mean ||
            kind == TermKind::Gaussian) &&
           !modulus.is_constant();
  }

 private:
  static EnergyTerm moduli(TermKind kind, const ScalarProfile& m) {
    EnergyTerm t;
    t.kind = kind;
    t.modulus = m;
    return t;
  }
};

struct EnergyModel {
  std::vector<EnergyTerm> terms;

  static EnergyModel of(std::vector<EnergyTerm> terms) { return {std::move(terms)}; }
  /// Canham-Helfrich composite [Bending, Gaussian, Mean, Soap].
  static EnergyModel canham_helfrich(double kappa, double kappa_bar, double beta, double sigma) {
    return {{EnergyTerm::bending(kappa), EnergyTerm::gaussian(kappa_bar), EnergyTerm::mean(beta),
             EnergyTerm::soap(sigma)}};
  }
  bool depends_on_position() const {
    for (const auto& t : terms)
      if (t.kind == TermKind::Volume || t.kind == TermKind::Magnetic) return true;
    return false;
  }
  bool heterogeneous() const {
    for (const auto& t : terms)
      if (t.heterogeneous() || t.kind == TermKind::PhaseField) return true;
    return false;
  }
};

/// kappa (K - K0)^2 as [Bending(kappa), Mean(-2 kappa K0), Soap(kappa K0^2)], zero terms dropped.
std::vector<EnergyTerm> expand_spontaneous_curvature(double kappa, double K0);

/// Derivatives of the densitized energy with respect to X, X_a and X_ab. The X_ab slot is
/// contracted with covariant second derivatives of the deformation.
template <class S>
struct PhaseGradient {
  Vec3<S> dX = Vec3<S>::Zero();
  Pair<Vec3<S>> Pa{Vec3<S>::Zero(), Vec3<S>::Zero()};
  Sym<Vec3<S>> Pab{{{Vec3<S>::Zero(), Vec3<S>::Zero()}, {Vec3<S>::Zero(), Vec3<S>::Zero()}}};
};

/// Modulus and phase-field jets for every term at every grid point.
struct PreparedModel {
  EnergyModel model;
  GridSpec grid;
  std::vector<std::vector<Jet4>> modulus;
  std::vector<std::vector<Jet4>> phi;
};

PreparedModel prepare(const EnergyModel& model, const GridSpec& grid);

template <class S>
S polynomial(const std::vector<double>& c, const S& x, int derivative_order = 0) {
  S r(0.0);
  for (int k = static_cast<int>(c.size()) - 1; k >= derivative_order; --k) {
    double coef = c[k];
    for (int q = 0; q < derivative_order; ++q) coef *= (k - q);
    r = r * x + coef;
  }
  return r;
}

template <class S>
S term_density(const EnergyTerm& t, const LocalFrame<S>& f, const Jet4& modulus, const Jet4& phi) {
  const S m = lift<S>(modulus);
  switch (t.kind) {
    case TermKind::Soap: return m * f.sqrt_g;
    case TermKind::Bending: return m * f.sqrt_g * f.K * f.K;
    case TermKind::Mean: return m * f.sqrt_g * f.K;
    case TermKind::Gaussian: return m * f.sqrt_g * f.R;
    case TermKind::Volume: return (-t.pressure / 3.0) * f.sqrt_g * dot(f.n, f.X);
    case TermKind::Magnetic: {
      const S nB = dot(f.n, t.B.at(f.X));
      return -t.alpha * f.sqrt_g * nB * nB;
    }
    case TermKind::PhaseField: {
      const S ph = lift<S>(phi);
      const Pair<S> dphi{lift_derivative<S>(phi, 0), lift_derivative<S>(phi, 1)};
      S grad2(0.0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) grad2 += f.ginv(a, b) * dphi[a] * dphi[b];
      return f.sqrt_g * (0.5 * t.lambda * grad2 + polynomial(t.potential, ph) + t.beta_phi * ph * f.K);
    }
  }
  return S(0.0);
}

template <class S>
void add_term_gradient(const EnergyTerm& t, const LocalFrame<S>& f, const Jet4& modulus,
                       const Jet4& phi, PhaseGradient<S>& out) {
  const S m = lift<S>(modulus);
  const S& sg = f.sqrt_g;
  // P^a += sqrt(g) T^ab X_b for a symmetric tangential tensor T
  auto add_tangential = [&](const Mat2<S>& T) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out.Pa[a] += f.e[b] * (sg * T(a, b));
  };
  auto add_normal_momentum = [&](const Mat2<S>& T) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out.Pab[a][b] += f.n * (sg * T(a, b));
  };
  switch (t.kind) {
    case TermKind::Soap: add_tangential(f.ginv * m); break;
    case TermKind::Bending:
      add_tangential((f.ginv * f.K - f.Kup * S(4.0)) * (m * f.K));
      add_normal_momentum(f.ginv * (S(-2.0) * m * f.K));
      break;
    case TermKind::Mean:
      add_tangential((f.ginv * f.K - f.Kup * S(2.0)) * m);
      add_normal_momentum(f.ginv * (-m));
      break;
    case TermKind::Gaussian:
      add_tangential(f.ginv * (-m * f.R));
      add_normal_momentum((f.Kup - f.ginv * f.K) * (S(2.0) * m));
      break;
    case TermKind::Volume: {
      const S c = S(-t.pressure / 3.0) * sg;
      const S nX = dot(f.n, f.X);
      out.dX += f.n * c;
      for (int a = 0; a < 2; ++a) out.Pa[a] += (f.eup[a] * nX - f.n * dot(f.eup[a], f.X)) * c;
      break;
    }
    case TermKind::Magnetic: {
      const Vec3<S> B = t.B.at(f.X);
      const S nB = dot(f.n, B);
      const S c = S(-t.alpha) * sg * nB;
      for (int nu = 0; nu < 3; ++nu) {
        S s(0.0);
        for (int mu = 0; mu < 3; ++mu)
          if (t.B.M(mu, nu) != 0.0) s += f.n(mu) * t.B.M(mu, nu);
        out.dX(nu) += 2.0 * c * s;
      }
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.Pa[a] += (f.e[b] * nB - f.n * (S(2.0) * dot(f.e[b], B))) * (c * f.ginv(a, b));
      break;
    }
    case TermKind::PhaseField: {
      const S ph = lift<S>(phi);
      const Pair<S> dphi{lift_derivative<S>(phi, 0), lift_derivative<S>(phi, 1)};
      Pair<S> up{S(0.0), S(0.0)};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) up[a] += f.ginv(a, b) * dphi[b];
      const S grad2 = up[0] * dphi[0] + up[1] * dphi[1];
      const S bphi = t.beta_phi * ph;
      Mat2<S> T = f.ginv * (0.5 * t.lambda * grad2 + polynomial(t.potential, ph)) +
                  (f.ginv * f.K - f.Kup * S(2.0)) * bphi;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) T(a, b) -= t.lambda * up[a] * up[b];
      add_tangential(T);
      add_normal_momentum(f.ginv * (-bphi));
      break;
    }
  }
}

template <class S>
S model_density(const PreparedModel& pm, const LocalFrame<S>& f, int p) {
  S r(0.0);
  for (size_t k = 0; k < pm.model.terms.size(); ++k)
    r += term_density(pm.model.terms[k], f, pm.modulus[k][p], pm.phi[k].empty() ? Jet4() : pm.phi[k][p]);
  return r;
}

template <class S>
PhaseGradient<S> model_gradient(const PreparedModel& pm, const LocalFrame<S>& f, int p) {
  PhaseGradient<S> out;
  for (size_t k = 0; k < pm.model.terms.size(); ++k)
    add_term_gradient(pm.model.terms[k], f, pm.modulus[k][p],
                      pm.phi[k].empty() ? Jet4() : pm.phi[k][p], out);
  return out;
}

double energy_density(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo,
                      int point);
PhaseGradient<double> phase_gradient(const EnergyModel& model, const SurfaceField& sf,
                                     const GeometryField& geo, int point);

/// Densities at every grid point.
Eigen::VectorXd energy_densities(const PreparedModel& pm, const SurfaceField& sf);

/// Total energy of X + t W (W omitted: the surface itself). Only jets up to second order enter.
double total_energy(const PreparedModel& pm, const SurfaceField& sf,
                    const VariationField* W = nullptr, double t = 0.0);
double total_energy(const EnergyModel& model, const SurfaceField& sf);

/// (1/3) integral of sqrt(g) n.X over a closed surface.
double volume_functional(const SurfaceField& sf, const GeometryField& geo);

}  // namespace memkernel
