#pragma once

#include <vector>

#include <Eigen/Dense>

#include "memkernel/grid.hpp"

namespace memkernel {

/// Fornberg weights: column m of the result differentiates m times at z using nodes x.
Eigen::MatrixXd fornberg_weights(double z, const std::vector<double>& x, int max_order);

/// Fourth-order accurate 1-D stencil for the k-th derivative along one grid axis.
/// Periodic axes wrap; clamped axes shift to one-sided windows near the ends.
class AxisStencil {
 public:
  AxisStencil(const GridSpec& grid, int axis, int derivative_order);

  struct Tap {
    int offset_index;
    double weight;
  };
  const std::vector<Tap>& row(int k) const { return rows_[k]; }
  int axis() const { return axis_; }

 private:
  int axis_;
  std::vector<std::vector<Tap>> rows_;
};

/// Applies d1^i d2^j to every column of F (rows are grid points).
Eigen::MatrixXd partial(const Eigen::MatrixXd& F, const GridSpec& grid, int i, int j);

/// Single-axis derivative of a per-point scalar.
Eigen::VectorXd partial_axis(const Eigen::VectorXd& f, const GridSpec& grid, int axis,
                             int order = 1);

}  // namespace memkernel
