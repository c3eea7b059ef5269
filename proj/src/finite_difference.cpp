#include "memkernel/finite_difference.hpp"

#include <algorithm>
#include <cmath>

#include "memkernel/error.hpp"

namespace memkernel {

Eigen::MatrixXd fornberg_weights(double z, const std::vector<double>& x, int max_order) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0, c4 = x[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

AxisStencil::AxisStencil(const GridSpec& grid, int axis, int k) : axis_(axis) {
  if (grid.rule(axis) == AxisRule::gauss_legendre)
    throw Error(ErrorCode::IncompatibleGrid,
                "finite differences are not defined on a Gauss-Legendre axis");
  if (k < 1 || k > 4) throw Error(ErrorCode::InvalidParameter, "derivative order must be 1..4");
  const int n = grid.count(axis);
  const double h = grid.h(axis);
  const double scale = std::pow(h, -k);
  const int half = k <= 2 ? 2 : 3;
  rows_.resize(n);

  if (grid.rule(axis) == AxisRule::periodic) {
    std::vector<double> x;
    for (int o = -half; o <= half; ++o) x.push_back(o);
    const Eigen::VectorXd w = fornberg_weights(0.0, x, k).col(k);
    for (int i = 0; i < n; ++i)
      for (int o = -half; o <= half; ++o)
        rows_[i].push_back({((i + o) % n + n) % n, w(o + half) * scale});
    return;
  }

  const int one_sided = k + 4;
  for (int i = 0; i < n; ++i) {
    int lo, width;
    if (i - half >= 0 && i + half <= n - 1) {
      lo = i - half;
      width = 2 * half + 1;
    } else {
      width = one_sided;
      lo = i - half < 0 ? 0 : n - width;
    }
    std::vector<double> x;
    for (int q = 0; q < width; ++q) x.push_back(lo + q);
    const Eigen::VectorXd w = fornberg_weights(static_cast<double>(i), x, k).col(k);
    for (int q = 0; q < width; ++q) rows_[i].push_back({lo + q, w(q) * scale});
  }
}

namespace {

Eigen::MatrixXd apply_axis(const Eigen::MatrixXd& F, const GridSpec& grid,
                           const AxisStencil& st) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(F.rows(), F.cols());
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      const int p = grid.index(i, j);
      const auto& row = st.row(st.axis() == 0 ? i : j);
      for (const auto& tap : row) {
        const int q = st.axis() == 0 ? grid.index(tap.offset_index, j)
                                     : grid.index(i, tap.offset_index);
        out.row(p) += tap.weight * F.row(q);
      }
    }
  return out;
}

}  // namespace

Eigen::MatrixXd partial(const Eigen::MatrixXd& F, const GridSpec& grid, int i, int j) {
  if (F.rows() != grid.size())
    throw Error(ErrorCode::GridMismatch, "field size does not match grid");
  Eigen::MatrixXd out = F;
  if (i > 0) out = apply_axis(out, grid, AxisStencil(grid, 0, i));
  if (j > 0) out = apply_axis(out, grid, AxisStencil(grid, 1, j));
  return out;
}

Eigen::VectorXd partial_axis(const Eigen::VectorXd& f, const GridSpec& grid, int axis,
                             int order) {
  return axis == 0 ? partial(f, grid, order, 0) : partial(f, grid, 0, order);
}

}  // namespace memkernel
