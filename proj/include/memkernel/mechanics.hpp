#pragma once

#include <vector>

#include "memkernel/energy.hpp"

namespace memkernel {

/// Stress and force densities per point (all carry the sqrt(g) weight).
///   f_tilde_a   f^a = -P^a + nabla_b P^ab            (linear stress)
///   f_tilde_ab  f^ab = -P^ab                           (bending momentum)
///   m_tilde_a   m^a = X x f^a + X_b x f^ab             (angular stress)
///   EL          dF/dX - d_a P^a + d_a nabla_b P^ab     (Euler-Lagrange derivative)
///   source      dF/dX, so that EL = force_div + source
///   force_div   d_a f^a
///   torque_div  d_a m^a
///   angular_residual  X_a x f^a + d_a(X_b x f^ab) - X x source, zero for rotation-invariant models
///   force_div_fd      d_a f^a from grid finite differences of f^a (structured grids only)
struct StressField {
  GridSpec grid;
  std::vector<Pair<Eigen::Vector3d>> f_tilde_a, m_tilde_a;
  std::vector<Sym<Eigen::Vector3d>> f_tilde_ab;
  std::vector<Eigen::Vector3d> EL, source, force_div, torque_div, angular_residual, force_div_fd;

  int size() const { return grid.size(); }
};

/// Every routine below fills the complete StressField.
StressField linear_stress(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo);
StressField euler_lagrange(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo);
StressField angular_stress(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo);

/// Final geometric shape equations, evaluated term by term without the phase-space route.
std::vector<Eigen::Vector3d> shape_residual_closed_form(const EnergyModel& model,
                                                        const SurfaceField& sf,
                                                        const GeometryField& geo);

struct Balance {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();   // integral of EL
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // integral of d_a m^a
};
Balance global_balance(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo);

struct TangentialReport {
  double max_abs = 0;       // max |EL . X_a|
  double max_relative = 0;  // max |EL . X_a| / (|EL| |X_a| + 1e-30)
};
TangentialReport tangential_el_check(const EnergyModel& model, const SurfaceField& sf,
                                     const GeometryField& geo);

/// Normal/tangential split of the Euler-Lagrange derivative, generic route versus closed form.
struct MarangoniSplit {
  std::vector<double> el_normal, closed_normal;
  std::vector<Eigen::Vector3d> el_tangential, closed_tangential;
};
MarangoniSplit marangoni_force(const EnergyModel& model, const SurfaceField& sf,
                               const GeometryField& geo);

struct GaugeReport {
  double pointwise = 0;   // max |d_a (eps^ab d_b s)|
  double integrated = 0;  // |integral of the added current|
};
GaugeReport noether_gauge_check(const SurfaceField& sf, const GeometryField& geo,
                                const Eigen::VectorXd& s);

}  // namespace memkernel
