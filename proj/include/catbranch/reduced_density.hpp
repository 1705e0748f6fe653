#pragma once

#include <utility>
#include <vector>

#include "catbranch/gaussian.hpp"
#include "catbranch/model.hpp"
#include "catbranch/propagation.hpp"

namespace catbranch {

struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  int points = 1201;

  std::vector<double> xs() const;
};

// Reduced density of the observed particle on a grid at one time. rho is the
// full normalized reduced density (what the density plots show as the upper
// curve); interference is its cross-branch part (the lower curve), normalized
// by the same constant, so rho - interference is the diagonal part. i_max is
// the peak |interference|.
struct ReducedSnapshot {
  double t = 0.0;
  GridSpec grid;
  std::vector<double> rho;
  std::vector<double> interference;
  double i_max = 0.0;
  double norm = 0.0;  // trapezoid integral of the raw density before scaling
};

// All bra/ket products conj(G_j) G_k of the wavefunction terms: 4^n density
// terms, still over every coordinate.
std::vector<LabeledTerm> density_pair_terms(const std::vector<LabeledTerm>& wf_terms);

// Integrates out every coordinate except keep_index.
std::vector<LabeledTerm> reduce(const std::vector<LabeledTerm>& pair_terms, int keep_index);

// Splits reduced terms into diagonal (bra and ket agree on the observed
// particle) and interference (they differ) groups.
std::pair<std::vector<LabeledTerm>, std::vector<LabeledTerm>> split_interference(
    const std::vector<LabeledTerm>& reduced, int particle_index);

ReducedSnapshot snapshot(const ValidatedConfig& cfg, double t, const GridSpec& grid);

// i_max(t) over a monotone time list; threads = 0 picks the environment /
// hardware default.
std::vector<std::pair<double, double>> interference_series(const ValidatedConfig& cfg,
                                                           const std::vector<double>& times,
                                                           const GridSpec& grid,
                                                           int threads = 0);

}  // namespace catbranch
