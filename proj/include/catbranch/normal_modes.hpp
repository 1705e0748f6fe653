#pragma once

#include <vector>

#include "catbranch/linalg.hpp"

namespace catbranch {

// Orthogonal normal-mode frame of a coupled oscillator network. The
// mass-weighted potential W = M^{-1/2} V M^{-1/2} is diagonalized as
// W = O diag(omega2) O^T; particle coordinates relate to mode coordinates by
// x = M^{-1/2} O q, q = O^T M^{1/2} x. Modes with |omega2| <= free_tol are
// flagged free (zero-frequency translations of unbound clusters).
struct NormalModeBasis {
  int n = 0;
  std::vector<double> masses;
  RealMatrix modes;            // O, columns are mass-weighted eigenvectors
  std::vector<double> omega2;  // ascending
  std::vector<bool> free_mode;

  // x = S q
  RealMatrix particle_from_mode() const;  // S = M^{-1/2} O
  RealMatrix mode_from_particle() const;  // S^{-1} = O^T M^{1/2}
};

RealMatrix mass_weighted(const RealMatrix& v, const std::vector<double>& masses);

// Throws NegativeEigenvalue if any eigenvalue < -free_tol, NoConvergence from
// the underlying Jacobi sweep.
NormalModeBasis eigendecompose(const RealMatrix& w, const std::vector<double>& masses,
                               double free_tol = 1e-9);

std::vector<double> to_modes(const std::vector<double>& x, const NormalModeBasis& basis);
std::vector<double> from_modes(const std::vector<double>& q, const NormalModeBasis& basis);

}  // namespace catbranch
