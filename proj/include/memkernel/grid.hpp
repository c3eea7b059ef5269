#pragma once

#include <vector>

namespace memkernel {

enum class AxisRule { periodic, clamped, gauss_legendre };

/// Structured parameter grid. Point (i, j) has flat index i * n2 + j.
/// Periodic axes use nodes a + k h with h = (b - a)/n, clamped axes include both
/// ends with h = (b - a)/(n - 1), Gauss-Legendre axes carry quadrature nodes only.
struct GridSpec {
  int n1 = 0, n2 = 0;
  double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  AxisRule rule1 = AxisRule::periodic, rule2 = AxisRule::periodic;
  std::vector<double> nodes1, nodes2;
  std::vector<double> weights1, weights2;

  static GridSpec make(int n1, int n2, double a1, double b1, double a2, double b2,
                       AxisRule rule1, AxisRule rule2);
  static GridSpec periodic(int n1, int n2, double a1, double b1, double a2, double b2) {
    return make(n1, n2, a1, b1, a2, b2, AxisRule::periodic, AxisRule::periodic);
  }

  int size() const { return n1 * n2; }
  int index(int i, int j) const { return i * n2 + j; }
  int count(int axis) const { return axis == 0 ? n1 : n2; }
  AxisRule rule(int axis) const { return axis == 0 ? rule1 : rule2; }
  bool periodic1() const { return rule1 == AxisRule::periodic; }
  bool periodic2() const { return rule2 == AxisRule::periodic; }
  bool doubly_periodic() const { return periodic1() && periodic2(); }
  bool structured() const {
    return rule1 != AxisRule::gauss_legendre && rule2 != AxisRule::gauss_legendre;
  }
  double lower(int axis) const { return axis == 0 ? a1 : a2; }
  double upper(int axis) const { return axis == 0 ? b1 : b2; }
  double length(int axis) const { return upper(axis) - lower(axis); }
  /// Node spacing; meaningless on a Gauss-Legendre axis.
  double h(int axis) const;
  double h1() const { return h(0); }
  double h2() const { return h(1); }
  double node(int axis, int k) const { return axis == 0 ? nodes1[k] : nodes2[k]; }
  double weight(int axis, int k) const { return axis == 0 ? weights1[k] : weights2[k]; }

  bool same_shape(const GridSpec& o) const { return n1 == o.n1 && n2 == o.n2; }
};

/// Gauss-Legendre nodes and weights on [a, b] via the Golub-Welsch eigenproblem.
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace memkernel
