#include "memkernel/energy.hpp"

#include "memkernel/error.hpp"

namespace memkernel {

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::Soap: return "soap";
    case TermKind::Bending: return "bending";
    case TermKind::Mean: return "mean";
    case TermKind::Gaussian: return "gaussian";
    case TermKind::Volume: return "volume";
    case TermKind::PhaseField: return "phase_field";
    case TermKind::Magnetic: return "magnetic";
  }
  return "unknown";
}

std::vector<EnergyTerm> expand_spontaneous_curvature(double kappa, double K0) {
  std::vector<EnergyTerm> out;
  if (kappa != 0.0) out.push_back(EnergyTerm::bending(kappa));
  if (kappa * K0 != 0.0) {
    out.push_back(EnergyTerm::mean(-2.0 * kappa * K0));
    out.push_back(EnergyTerm::soap(kappa * K0 * K0));
  }
  return out;
}

PreparedModel prepare(const EnergyModel& model, const GridSpec& grid) {
  PreparedModel pm;
  pm.model = model;
  pm.grid = grid;
  for (const auto& t : model.terms) {
    if (t.kind == TermKind::PhaseField && !t.has_phi)
      throw Error(ErrorCode::MissingField, "phase_field term has no phi field");
    pm.modulus.push_back(profile_jets(t.modulus, grid));
    pm.phi.push_back(t.kind == TermKind::PhaseField ? profile_jets(t.phi, grid) : std::vector<Jet4>{});
  }
  return pm;
}

namespace {

LocalFrame<double> perturbed_frame(const SurfaceField& sf, const VariationField* W, double t, int p) {
  const auto d = sf.dX(p);
  if (!W || t == 0.0)
    return make_frame<double>(sf.X(p), d.col(0), d.col(1), sf.ddX(p, 0, 0), sf.ddX(p, 0, 1),
                              sf.ddX(p, 1, 1));
  return make_frame<double>(sf.X(p) + t * W->W[p], d.col(0) + t * W->Wa[p][0],
                            d.col(1) + t * W->Wa[p][1], sf.ddX(p, 0, 0) + t * W->raw_second(p, 0, 0),
                            sf.ddX(p, 0, 1) + t * W->raw_second(p, 0, 1),
                            sf.ddX(p, 1, 1) + t * W->raw_second(p, 1, 1));
}

void check_sizes(const SurfaceField& sf, const GeometryField& geo, int point) {
  if (!sf.grid.same_shape(geo.grid))
    throw Error(ErrorCode::GridMismatch, "surface and geometry grids differ");
  if (point < 0 || point >= sf.size())
    throw Error(ErrorCode::InvalidParameter, "point index out of range");
}

}  // namespace

double energy_density(const EnergyModel& model, const SurfaceField& sf, const GeometryField& geo,
                      int point) {
  check_sizes(sf, geo, point);
  return model_density(prepare(model, sf.grid), frame_from_jet<double>(sf.jets[point]), point);
}

PhaseGradient<double> phase_gradient(const EnergyModel& model, const SurfaceField& sf,
                                     const GeometryField& geo, int point) {
  check_sizes(sf, geo, point);
  return model_gradient(prepare(model, sf.grid), frame_from_jet<double>(sf.jets[point]), point);
}

Eigen::VectorXd energy_densities(const PreparedModel& pm, const SurfaceField& sf) {
  if (!pm.grid.same_shape(sf.grid))
    throw Error(ErrorCode::GridMismatch, "model was prepared on a different grid");
  Eigen::VectorXd d(sf.size());
  for (int p = 0; p < sf.size(); ++p) d(p) = model_density(pm, perturbed_frame(sf, nullptr, 0, p), p);
  return d;
}

double total_energy(const PreparedModel& pm, const SurfaceField& sf, const VariationField* W,
                    double t) {
  if (!pm.grid.same_shape(sf.grid) || (W && !W->grid.same_shape(sf.grid)))
    throw Error(ErrorCode::GridMismatch, "energy inputs live on different grids");
  Eigen::VectorXd d(sf.size());
  for (int p = 0; p < sf.size(); ++p) {
    const auto f = perturbed_frame(sf, W, t, p);
    if (!(f.sqrt_g >= 1e-10))
      throw Error(ErrorCode::DegenerateParametrization,
                  "perturbed surface degenerates at grid point " + std::to_string(p));
    d(p) = model_density(pm, f, p);
  }
  return surface_integral(sf.grid, d);
}

double total_energy(const EnergyModel& model, const SurfaceField& sf) {
  return total_energy(prepare(model, sf.grid), sf);
}

double volume_functional(const SurfaceField& sf, const GeometryField& geo) {
  if (!sf.closed) throw Error(ErrorCode::NotClosedSurface, "volume needs a closed surface");
  if (!sf.grid.same_shape(geo.grid))
    throw Error(ErrorCode::GridMismatch, "surface and geometry grids differ");
  Eigen::VectorXd d(sf.size());
  for (int p = 0; p < sf.size(); ++p) d(p) = geo.sqrt_g[p] * geo.normal[p].dot(sf.X(p)) / 3.0;
  return surface_integral(sf.grid, d);
}

}  // namespace memkernel
