#pragma once

#include <array>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "memkernel/grid.hpp"
#include "memkernel/jet.hpp"

namespace memkernel {

using Jet4 = Jet<4>;
using Jet2 = Jet<2>;
using SurfaceJet = Vec3<Jet4>;

/// Shape functions on a grid, stored as per-point jets holding every partial
/// d1^i d2^j X with i + j <= 4.
struct SurfaceField {
  GridSpec grid;
  std::vector<SurfaceJet> jets;
  bool analytic = true;  // false: partials come from finite differences of samples
  bool closed = false;   // compact surface without boundary covered once by the grid
  std::array<Eigen::Vector3d, 2> lattice_shift{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};

  int size() const { return grid.size(); }
  Eigen::Vector3d partial(int p, int i, int j) const {
    const auto& J = jets[p];
    return {J(0).partial(i, j), J(1).partial(i, j), J(2).partial(i, j)};
  }
  Eigen::Vector3d X(int p) const { return partial(p, 0, 0); }
  Eigen::Matrix<double, 3, 2> dX(int p) const {
    Eigen::Matrix<double, 3, 2> m;
    m.col(0) = partial(p, 1, 0);
    m.col(1) = partial(p, 0, 1);
    return m;
  }
  Eigen::Vector3d ddX(int p, int a, int b) const { return partial(p, (a == 0) + (b == 0), (a == 1) + (b == 1)); }
  Eigen::Vector3d d3X(int p, int a, int b, int c) const {
    return partial(p, (a == 0) + (b == 0) + (c == 0), (a == 1) + (b == 1) + (c == 1));
  }
  Eigen::Vector3d d4X(int p, int a, int b, int c, int d) const {
    const int i = (a == 0) + (b == 0) + (c == 0) + (d == 0);
    return partial(p, i, 4 - i);
  }
};

using AnalyticMap = std::function<SurfaceJet(const Jet4& u, const Jet4& v)>;

SurfaceField build_from_analytic(const AnalyticMap& map, const GridSpec& grid, bool closed = false);

/// Periodic samples; X may jump by lattice_shift[a] across axis a (cylinders, height patches).
SurfaceField build_from_samples(const std::vector<Eigen::Vector3d>& samples, const GridSpec& grid,
                                const Eigen::Vector3d& shift1 = Eigen::Vector3d::Zero(),
                                const Eigen::Vector3d& shift2 = Eigen::Vector3d::Zero());

/// Smooth scalar over parameter space: base + sum_k A_k cos(m1 xi1 + m2 xi2 + phase_k),
/// or a sampled field whose partials come from finite differences.
struct ScalarProfile {
  struct Mode {
    double amplitude = 0;
    double m1 = 0, m2 = 0;
    double phase = 0;
  };
  double base = 0;
  std::vector<Mode> modes;
  std::vector<double> samples;  // non-empty: sampled profile

  static ScalarProfile constant(double v) { return {v, {}, {}}; }
  static ScalarProfile cosine(double base, double amplitude, int axis, double mode) {
    ScalarProfile p{base, {}, {}};
    p.modes.push_back({amplitude, axis == 1 ? mode : 0.0, axis == 2 ? mode : 0.0, 0.0});
    return p;
  }
  static ScalarProfile sine(double base, double amplitude, int axis, double mode) {
    ScalarProfile p = cosine(base, amplitude, axis, mode);
    p.modes.back().phase = -std::numbers::pi / 2;
    return p;
  }
  bool is_constant() const {
    if (!samples.empty()) return false;
    for (const auto& m : modes)
      if (m.amplitude != 0.0 && (m.m1 != 0.0 || m.m2 != 0.0)) return false;
    return true;
  }

  template <class S>
  S evaluate(const S& u, const S& v) const {
    using std::cos;
    S r(base);
    for (const auto& m : modes) r += m.amplitude * cos(m.m1 * u + m.m2 * v + m.phase);
    return r;
  }
};

/// Per-point jets of a profile on the grid.
std::vector<Jet4> profile_jets(const ScalarProfile& profile, const GridSpec& grid);

/// Finite-difference jets of a sampled scalar field.
std::vector<Jet4> scalar_jets_from_samples(const Eigen::VectorXd& samples, const GridSpec& grid);

}  // namespace memkernel
