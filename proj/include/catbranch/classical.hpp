#pragma once

#include <vector>

#include "catbranch/model.hpp"
#include "catbranch/normal_modes.hpp"

namespace catbranch {

// Exact linear-network solution from rest: x(t) = S diag(cos w t) S^{-1} x0,
// free modes constant.
std::vector<double> harmonic_solution(const NormalModeBasis& basis,
                                      const std::vector<double>& x0, double t);

// The 2^n classical companions of the quantum branches: trajectory for label
// a starts at x_i(0) = a_i d_i, v(0) = 0. Only the observed particle's
// coordinate is kept per sample; mode data is retained so x_sys can be
// re-evaluated exactly at arbitrary t (crossing refinement).
struct TrajectoryEnsemble {
  int n = 0;
  int system_index = 0;
  std::vector<PacketLabel> labels;
  std::vector<double> times;
  std::vector<std::vector<double>> x_sys;  // [label][time index]

  std::vector<double> omega;
  std::vector<bool> free_mode;
  std::vector<double> srow;                // row of S for the observed particle
  std::vector<std::vector<double>> q0;     // [label][mode]

  int group(int label_idx) const { return labels[label_idx].a[system_index]; }
  double x_sys_at(int label_idx, double t) const;
};

TrajectoryEnsemble evolve_ensemble(const ValidatedConfig& cfg,
                                   const std::vector<double>& times);

// Time of closest approach of two branch trajectories of the observed
// particle, one from each group.
struct Crossing {
  double t = 0.0;
  unsigned j = 0;  // group-0 label index
  unsigned k = 0;  // group-1 label index
};

struct BranchReport {
  std::vector<double> times;
  std::vector<double> b;        // mean of the two within-group diameters
  std::vector<double> diam_g0;
  std::vector<double> diam_g1;
  std::vector<double> rms_g0;
  std::vector<double> rms_g1;
  std::vector<double> min_diam;
  std::vector<Crossing> crossings;
  double time_avg_b = 0.0;
};

// Per-time spread columns only (no crossings).
BranchReport branching_metric(const TrajectoryEnsemble& ens);

// Sign changes of x_sys_j - x_sys_k between samples for cross-group pairs,
// refined by bisection on the exact solution to |dt| <= 1e-9; roots of one
// pair closer than 1e-6 are merged; pairs identical within tolerance are
// skipped. Sorted by (t, j, k).
std::vector<Crossing> find_crossings(const TrajectoryEnsemble& ens);

BranchReport make_branch_report(const TrajectoryEnsemble& ens);

struct CorrelationSummary {
  std::vector<Crossing> crossings;
  std::vector<double> imax_at_crossings;
  std::vector<double> b_at_crossings;
  double time_avg_imax = 0.0;
  double time_avg_b = 0.0;
  double mean_imax_at_crossings = 0.0;
  double mean_b_at_crossings = 0.0;
};

// Lines up the branching report with an i_max(t) series (linear interpolation
// at crossing times, trapezoid time averages). Throws EmptyInput on an empty
// series.
CorrelationSummary correlate(const BranchReport& report,
                             const std::vector<std::pair<double, double>>& imax_series);

}  // namespace catbranch
