#include "memkernel/field.hpp"

#include "memkernel/error.hpp"
#include "memkernel/finite_difference.hpp"

namespace memkernel {

namespace {

void check_immersion(const SurfaceField& sf) {
  for (int p = 0; p < sf.size(); ++p) {
    const auto d = sf.dX(p);
    if (d.col(0).cross(d.col(1)).norm() < 1e-10)
      throw Error(ErrorCode::DegenerateParametrization,
                  "|X_1 x X_2| < 1e-10 at grid point " + std::to_string(p));
  }
}

// All 15 partials of each column of F, from tensor-product stencils.
std::array<Eigen::MatrixXd, Jet4::size> fd_partials(const Eigen::MatrixXd& F, const GridSpec& grid) {
  std::array<Eigen::MatrixXd, Jet4::size> out;
  for (int d = 0; d <= 4; ++d)
    for (int j = 0; j <= d; ++j) out[Jet4::index(d - j, j)] = partial(F, grid, d - j, j);
  return out;
}

}  // namespace

SurfaceField build_from_analytic(const AnalyticMap& map, const GridSpec& grid, bool closed) {
  SurfaceField sf;
  sf.grid = grid;
  sf.analytic = true;
  sf.closed = closed;
  sf.jets.resize(grid.size());
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      sf.jets[grid.index(i, j)] =
          map(Jet4::variable(grid.node(0, i), 0), Jet4::variable(grid.node(1, j), 1));
  check_immersion(sf);
  return sf;
}

SurfaceField build_from_samples(const std::vector<Eigen::Vector3d>& samples, const GridSpec& grid,
                                const Eigen::Vector3d& shift1, const Eigen::Vector3d& shift2) {
  if (!grid.doubly_periodic())
    throw Error(ErrorCode::NonPeriodicGrid, "sampled surfaces need a grid periodic on both axes");
  if (static_cast<int>(samples.size()) != grid.size())
    throw Error(ErrorCode::GridMismatch, "sample count does not match grid");

  // Remove the lattice drift so the remainder is periodic, then restore it analytically.
  const Eigen::Vector3d slope1 = shift1 / grid.length(0), slope2 = shift2 / grid.length(1);
  Eigen::MatrixXd F(grid.size(), 3);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      const int p = grid.index(i, j);
      F.row(p) = (samples[p] - (grid.node(0, i) - grid.a1) * slope1 -
                  (grid.node(1, j) - grid.a2) * slope2)
                     .transpose();
    }
  const auto D = fd_partials(F, grid);

  SurfaceField sf;
  sf.grid = grid;
  sf.analytic = false;
  sf.closed = shift1.isZero(0) && shift2.isZero(0);
  sf.lattice_shift = {shift1, shift2};
  sf.jets.resize(grid.size());
  for (int p = 0; p < grid.size(); ++p)
    for (int mu = 0; mu < 3; ++mu) {
      Jet4& J = sf.jets[p](mu);
      for (int d = 0; d <= 4; ++d)
        for (int j = 0; j <= d; ++j) J.set_partial(d - j, j, D[Jet4::index(d - j, j)](p, mu));
      J.set_partial(0, 0, samples[p](mu));
      J.set_partial(1, 0, J.partial(1, 0) + slope1(mu));
      J.set_partial(0, 1, J.partial(0, 1) + slope2(mu));
    }
  check_immersion(sf);
  return sf;
}

std::vector<Jet4> profile_jets(const ScalarProfile& profile, const GridSpec& grid) {
  if (!profile.samples.empty()) {
    if (static_cast<int>(profile.samples.size()) != grid.size())
      throw Error(ErrorCode::GridMismatch, "sampled profile does not match grid");
    return scalar_jets_from_samples(
        Eigen::Map<const Eigen::VectorXd>(profile.samples.data(), grid.size()), grid);
  }
  std::vector<Jet4> out(grid.size());
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      out[grid.index(i, j)] = profile.evaluate(Jet4::variable(grid.node(0, i), 0),
                                               Jet4::variable(grid.node(1, j), 1));
  return out;
}

std::vector<Jet4> scalar_jets_from_samples(const Eigen::VectorXd& samples, const GridSpec& grid) {
  if (samples.size() != grid.size())
    throw Error(ErrorCode::GridMismatch, "sample count does not match grid");
  const auto D = fd_partials(samples, grid);
  std::vector<Jet4> out(grid.size());
  for (int p = 0; p < grid.size(); ++p) {
    for (int k = 0; k < Jet4::size; ++k) out[p].c[k] = 0.0;
    for (int d = 0; d <= 4; ++d)
      for (int j = 0; j <= d; ++j) out[p].set_partial(d - j, j, D[Jet4::index(d - j, j)](p, 0));
    out[p].set_partial(0, 0, samples(p));
  }
  return out;
}

}  // namespace memkernel
