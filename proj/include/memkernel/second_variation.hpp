#pragma once

#include <vector>

#include "memkernel/energy.hpp"
#include "memkernel/oracle.hpp"

namespace memkernel {

/// Second partials of the densitized energy at one point, in the variables (X_a, covariant X_ab).
/// Rows and columns are flattened as a*3 + mu for X_a and (a*2 + b)*3 + mu for X_ab; the ordered
/// pairs (1,2) and (2,1) share the symmetric derivative equally.
///   H_aa     d P^a / d X_c
///   H_a_cd   d P^a / d X_cd
///   H_ab_c   d P^ab / d X_c
///   H_abcd   d P^ab / d X_cd     (top block)
/// The mixed blocks are not transposes of each other: the phase-space basis is not a coordinate basis.
struct HessianBlocks {
  Eigen::Matrix<double, 6, 6> H_aa;
  Eigen::Matrix<double, 6, 12> H_a_cd;
  Eigen::Matrix<double, 12, 6> H_ab_c;
  Eigen::Matrix<double, 12, 12> H_abcd;
  Pair<Eigen::Vector3d> Pa;
  Sym<Eigen::Vector3d> Pab;
};

/// Throws UnsupportedTerm unless every term is Soap, Bending or Mean.
HessianBlocks hessian_blocks(const EnergyModel& model, const SurfaceField& sf,
                             const GeometryField& geo, int point);

/// Relative difference between H_a_cd and the transpose of H_ab_c.
double mixed_block_gap(const HessianBlocks& h);

/// delta Gamma^c_ab = X^c . W_ab - K_ab n . W^c, with W^c = g^cd d_d W.
std::vector<Pair<Eigen::Matrix2d>> connection_variation(const SurfaceField& sf,
                                                        const GeometryField& geo,
                                                        const VariationField& W);

/// Pointwise d^2/dt^2 of the density along X + tW (no equilibrium assumption).
Eigen::VectorXd second_variation_density(const EnergyModel& model, const SurfaceField& sf,
                                         const GeometryField& geo, const VariationField& W);

/// Integral of the density over a closed surface.
double second_variation(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo,
                        const VariationField& W);

/// The expanded closed forms for the bending and mean terms, written out term by term.
double bending_second_variation_expanded(const ScalarProfile& kappa, const SurfaceField& sf,
                                         const GeometryField& geo, const VariationField& W);
double mean_second_variation_expanded(const ScalarProfile& beta, const SurfaceField& sf,
                                      const GeometryField& geo, const VariationField& W);

/// Integral of sqrt(g) sigma [grad phi . grad phi + R phi^2] over a closed surface.
double soap_normal_second_variation(const SurfaceField& sf, const GeometryField& geo,
                                    const ScalarProfile& phi, double sigma = 1.0);

/// Top-block quadratic form W_ab H W_cd at every point.
Eigen::VectorXd legendre_hadamard(const EnergyModel& model, const SurfaceField& sf,
                                  const GeometryField& geo, const VariationField& W);

struct SecondVariationMatch {
  double analytic = 0;
  FdEstimate fd;
  double gap = 0;
  double relative_gap() const { return gap / (std::abs(fd.value) + 1e-12); }
};

SecondVariationMatch oracle_second_variation_match(const EnergyModel& model, const SurfaceField& sf,
                                                   const GeometryField& geo, const VariationField& W,
                                                   const OracleConfig& cfg = {});

}  // namespace memkernel
