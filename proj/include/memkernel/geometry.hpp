#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "memkernel/field.hpp"
#include "memkernel/local_frame.hpp"

namespace memkernel {

/// Per-point intrinsic and extrinsic geometry on the grid.
struct GeometryField {
  GridSpec grid;
  std::vector<Eigen::Matrix2d> g, g_inv, Kab, Kup, Kmix;
  std::vector<double> sqrt_g, K, Rscalar;
  std::vector<Pair<Eigen::Matrix2d>> Gamma;             // from metric derivatives (stored value)
  std::vector<Pair<Eigen::Matrix2d>> Gamma_projection;  // g^cd X_d . d_a d_b X
  std::vector<Eigen::Vector3d> normal;
  std::vector<Sym<Eigen::Vector3d>> Xab_cov;            // d_a d_b X - Gamma^c_ab X_c
  double gamma_discrepancy = 0.0;                       // max |Gamma - Gamma_projection|

  int size() const { return grid.size(); }
};

GeometryField compute_geometry(const SurfaceField& sf);

/// (1/sqrt g) d_a (sqrt g g^ab d_b f) by nested finite differences.
Eigen::VectorXd laplace_beltrami(const GeometryField& geo, const Eigen::VectorXd& f);

/// d_a V^a for a vector density with components V1, V2.
Eigen::VectorXd covariant_divergence_vector_density(const GeometryField& geo,
                                                    const Eigen::VectorXd& V1,
                                                    const Eigen::VectorXd& V2);

/// Quadrature over the grid; the density carries sqrt g unless multiply_sqrt_g is set.
double surface_integral(const GeometryField& geo, const Eigen::VectorXd& density,
                        bool multiply_sqrt_g = false);
double surface_integral(const GridSpec& grid, const Eigen::VectorXd& density);
Eigen::Vector3d surface_integral(const GridSpec& grid, const std::vector<Eigen::Vector3d>& density);

struct IdentityReport {
  double gauss = 0;          // R from the connection versus K^2 - K_ab K^ab
  double codazzi = 0;        // nabla_b K_a^b - nabla_a K
  double completeness = 0;   // g^ab X_a X_b + n n = identity, on random vector pairs
  double christoffel = 0;    // metric-derivative versus projection form
  double metric_inverse = 0;
  double normal_unit = 0;
  double normal_tangent = 0;
  double gauss_product = 0;  // R versus twice the product of principal curvatures
};

IdentityReport check_identities(const SurfaceField& sf, const GeometryField& geo,
                                std::uint64_t seed = 20240917);

/// Compensated summation.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

}  // namespace memkernel
