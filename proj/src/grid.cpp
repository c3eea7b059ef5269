#include "memkernel/grid.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "memkernel/error.hpp"

namespace memkernel {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    nodes[k] = mid + half * es.eigenvalues()(k);
    weights[k] = 2.0 * v0 * v0 * half;
  }
}

namespace {

void fill_axis(int n, double a, double b, AxisRule rule, std::vector<double>& nodes,
               std::vector<double>& weights) {
  if (rule == AxisRule::gauss_legendre) {
    gauss_legendre(n, a, b, nodes, weights);
    return;
  }
  nodes.resize(n);
  weights.resize(n);
  if (rule == AxisRule::periodic) {
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) {
      nodes[k] = a + k * h;
      weights[k] = h;
    }
  } else {
    const double h = (b - a) / (n - 1);
    for (int k = 0; k < n; ++k) {
      nodes[k] = a + k * h;
      weights[k] = (k == 0 || k == n - 1) ? 0.5 * h : h;
    }
    nodes[n - 1] = b;
  }
}

}  // namespace

GridSpec GridSpec::make(int n1, int n2, double a1, double b1, double a2, double b2,
                        AxisRule rule1, AxisRule rule2) {
  if (n1 < 8 || n2 < 8)
    throw Error(ErrorCode::InvalidParameter,
                "grid counts must be at least 8, got " + std::to_string(n1) + "x" +
                    std::to_string(n2));
  if (!(b1 > a1) || !(b2 > a2))
    throw Error(ErrorCode::InvalidParameter, "grid domain must have positive extent");
  GridSpec g;
  g.n1 = n1;
  g.n2 = n2;
  g.a1 = a1;
  g.b1 = b1;
  g.a2 = a2;
  g.b2 = b2;
  g.rule1 = rule1;
  g.rule2 = rule2;
  fill_axis(n1, a1, b1, rule1, g.nodes1, g.weights1);
  fill_axis(n2, a2, b2, rule2, g.nodes2, g.weights2);
  return g;
}

double GridSpec::h(int axis) const {
  const int n = count(axis);
  switch (rule(axis)) {
    case AxisRule::periodic: return length(axis) / n;
    case AxisRule::clamped: return length(axis) / (n - 1);
    case AxisRule::gauss_legendre: break;
  }
  throw Error(ErrorCode::IncompatibleGrid, "Gauss-Legendre axis has no uniform spacing");
}

}  // namespace memkernel
