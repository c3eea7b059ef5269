#pragma once

#include <vector>

#include "memkernel/energy.hpp"

namespace memkernel {

/// Central differences of F[X + tW] in t, optionally Richardson-extrapolated over the steps.
struct OracleConfig {
  std::vector<double> t_steps{1e-3, 5e-4, 2.5e-4};
  bool richardson = true;
  int scheme = 4;  // 2 or 4

  /// Throws InvalidParameter unless the steps are positive and strictly decreasing.
  void validate() const;
};

struct FdEstimate {
  double value = 0;
  double error = 0;            // |last level - previous level|
  std::vector<double> raw;     // plain differences, one per step
  double tolerance() const;    // max(10 error, 1e-9)
};

FdEstimate fd_first_variation(const EnergyModel& model, const SurfaceField& sf,
                              const GeometryField& geo, const VariationField& W,
                              const OracleConfig& cfg = {});
FdEstimate fd_second_variation(const EnergyModel& model, const SurfaceField& sf,
                               const GeometryField& geo, const VariationField& W,
                               const OracleConfig& cfg = {});

struct FirstVariationMatch {
  double pre_ibp = 0;   // integral of dF/dX.W + P^a.W_a + P^ab.W_ab
  double post_ibp = 0;  // integral of EL.W
  FdEstimate fd;
  double gap = 0;       // worst pairwise difference
  double relative_gap() const;
};

/// Closed surfaces only: the boundary current must integrate away.
FirstVariationMatch match_first_variation(const EnergyModel& model, const SurfaceField& sf,
                                          const GeometryField& geo, const VariationField& W,
                                          const OracleConfig& cfg = {});

}  // namespace memkernel
