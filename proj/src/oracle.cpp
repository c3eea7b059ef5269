#include "memkernel/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "memkernel/error.hpp"
#include "memkernel/mechanics.hpp"

namespace memkernel {

void OracleConfig::validate() const {
  if (t_steps.empty()) throw Error(ErrorCode::InvalidParameter, "oracle needs at least one step");
  if (scheme != 2 && scheme != 4)
    throw Error(ErrorCode::InvalidParameter, "oracle scheme must be 2 or 4");
  for (size_t i = 0; i < t_steps.size(); ++i) {
    if (!(t_steps[i] > 0.0)) throw Error(ErrorCode::InvalidParameter, "oracle steps must be positive");
    if (i > 0 && !(t_steps[i] < t_steps[i - 1]))
      throw Error(ErrorCode::InvalidParameter, "oracle steps must be strictly decreasing");
  }
}

double FdEstimate::tolerance() const { return std::max(10.0 * error, 1e-9); }

double FirstVariationMatch::relative_gap() const { return gap / (std::abs(fd.value) + 1e-12); }

namespace {

using Extended = long double;

/// F[X + tW] in extended precision: the second difference divides roundoff by t^2.
Extended energy_along(const PreparedModel& pm, const SurfaceField& sf, const VariationField& W,
                      double t) {
  auto ext = [](const Eigen::Vector3d& v) { return v.cast<Extended>().eval(); };
  const Extended te = t;
  Extended sum = 0, comp = 0;
  for (int i = 0; i < sf.grid.n1; ++i)
    for (int j = 0; j < sf.grid.n2; ++j) {
      const int p = sf.grid.index(i, j);
      const auto d = sf.dX(p);
      const LocalFrame<Extended> f = make_frame<Extended>(
          ext(sf.X(p)) + te * ext(W.W[p]), ext(d.col(0)) + te * ext(W.Wa[p][0]),
          ext(d.col(1)) + te * ext(W.Wa[p][1]), ext(sf.ddX(p, 0, 0)) + te * ext(W.raw_second(p, 0, 0)),
          ext(sf.ddX(p, 0, 1)) + te * ext(W.raw_second(p, 0, 1)),
          ext(sf.ddX(p, 1, 1)) + te * ext(W.raw_second(p, 1, 1)));
      if (!(f.sqrt_g >= 1e-10))
        throw Error(ErrorCode::DegenerateParametrization,
                    "perturbed surface degenerates at grid point " + std::to_string(p));
      const Extended term =
          Extended(sf.grid.weight(0, i)) * Extended(sf.grid.weight(1, j)) * model_density(pm, f, p);
      const Extended s = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
      sum = s;
    }
  return sum + comp;
}

/// d^order/dt^order of F(t) at 0 by a central stencil of the given accuracy.
template <class F>
double central(const F& energy, Extended t, int order, int scheme, Extended f0) {
  if (order == 1) {
    if (scheme == 2) return (energy(t) - energy(-t)) / (2 * t);
    return (-energy(2 * t) + 8 * energy(t) - 8 * energy(-t) + energy(-2 * t)) / (12 * t);
  }
  if (scheme == 2) return (energy(t) - 2 * f0 + energy(-t)) / (t * t);
  return (-energy(2 * t) + 16 * energy(t) - 30 * f0 + 16 * energy(-t) - energy(-2 * t)) / (12 * t * t);
}

FdEstimate fd_derivative(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo,
                         const VariationField& W, const OracleConfig& cfg, int order) {
  cfg.validate();
  if (!sf.grid.same_shape(geo.grid) || !sf.grid.same_shape(W.grid))
    throw Error(ErrorCode::GridMismatch, "surface, geometry and variation grids differ");
  const PreparedModel pm = prepare(model, sf.grid);
  auto energy = [&](double t) { return energy_along(pm, sf, W, t); };
  const Extended f0 = order == 2 ? energy(0.0) : 0.0;

  FdEstimate est;
  for (double t : cfg.t_steps)
    est.raw.push_back(static_cast<double>(central(energy, t, order, cfg.scheme, f0)));
  const int n = static_cast<int>(est.raw.size());
  if (!cfg.richardson || n == 1) {
    est.value = est.raw.back();
    est.error = n > 1 ? std::abs(est.raw[n - 1] - est.raw[n - 2]) : 0.0;
    return est;
  }
  // Error expansion of a central stencil runs in t^scheme, t^(scheme+2), ...
  std::vector<std::vector<double>> T(n);
  for (int i = 0; i < n; ++i) {
    T[i].push_back(est.raw[i]);
    for (int k = 1; k <= i; ++k) {
      const double ratio = std::pow(cfg.t_steps[i - 1] / cfg.t_steps[i], cfg.scheme + 2 * (k - 1));
      T[i].push_back(T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) / (ratio - 1.0));
    }
  }
  est.value = T[n - 1][n - 1];
  est.error = std::abs(T[n - 1][n - 1] - T[n - 1][n - 2]);
  return est;
}

}  // namespace

FdEstimate fd_first_variation(const EnergyModel& model, const SurfaceField& sf,
                              const GeometryField& geo, const VariationField& W,
                              const OracleConfig& cfg) {
  return fd_derivative(model, sf, geo, W, cfg, 1);
}

FdEstimate fd_second_variation(const EnergyModel& model, const SurfaceField& sf,
                               const GeometryField& geo, const VariationField& W,
                               const OracleConfig& cfg) {
  return fd_derivative(model, sf, geo, W, cfg, 2);
}

FirstVariationMatch match_first_variation(const EnergyModel& model, const SurfaceField& sf,
                                          const GeometryField& geo, const VariationField& W,
                                          const OracleConfig& cfg) {
  if (!sf.closed)
    throw Error(ErrorCode::NotClosedSurface, "first-variation match needs a closed surface");
  FirstVariationMatch m;
  m.fd = fd_first_variation(model, sf, geo, W, cfg);

  const PreparedModel pm = prepare(model, sf.grid);
  const StressField s = euler_lagrange(model, sf, geo);
  Eigen::VectorXd pre(sf.size()), post(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const PhaseGradient<double> pg = model_gradient(pm, frame_from_jet<double>(sf.jets[p]), p);
    double v = pg.dX.dot(W.W[p]);
    for (int a = 0; a < 2; ++a) {
      v += pg.Pa[a].dot(W.Wa[p][a]);
      for (int b = 0; b < 2; ++b) v += pg.Pab[a][b].dot(W.Wab[p][a][b]);
    }
    pre(p) = v;
    post(p) = s.EL[p].dot(W.W[p]);
  }
  m.pre_ibp = surface_integral(sf.grid, pre);
  m.post_ibp = surface_integral(sf.grid, post);
  m.gap = std::max({std::abs(m.pre_ibp - m.post_ibp), std::abs(m.pre_ibp - m.fd.value),
                    std::abs(m.post_ibp - m.fd.value)});
  return m;
}

}  // namespace memkernel
