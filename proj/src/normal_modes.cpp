#include "catbranch/normal_modes.hpp"

#include <cmath>
#include <string>

#include "catbranch/errors.hpp"

namespace catbranch {

RealMatrix NormalModeBasis::particle_from_mode() const {
  RealMatrix s(n, n);
  for (int i = 0; i < n; ++i) {
    double mi = 1.0 / std::sqrt(masses[i]);
    for (int j = 0; j < n; ++j) s(i, j) = mi * modes(i, j);
  }
  return s;
}

RealMatrix NormalModeBasis::mode_from_particle() const {
  RealMatrix s(n, n);
  for (int j = 0; j < n; ++j) {
    double mj = std::sqrt(masses[j]);
    for (int i = 0; i < n; ++i) s(i, j) = modes(j, i) * mj;
  }
  return s;
}

RealMatrix mass_weighted(const RealMatrix& v, const std::vector<double>& masses) {
  if (v.rows != v.cols || v.rows != static_cast<int>(masses.size()))
    throw SimError(ErrorCode::DimensionMismatch, "mass_weighted shapes");
  int n = v.rows;
  RealMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    double mi = 1.0 / std::sqrt(masses[i]);
    for (int j = 0; j < n; ++j) w(i, j) = mi * v(i, j) / std::sqrt(masses[j]);
  }
  return w;
}

NormalModeBasis eigendecompose(const RealMatrix& w, const std::vector<double>& masses,
                               double free_tol) {
  JacobiResult eig = jacobi_eigen(w);
  NormalModeBasis basis;
  basis.n = w.rows;
  basis.masses = masses;
  basis.modes = eig.vectors;
  basis.omega2 = eig.values;
  basis.free_mode.resize(basis.n);
  for (int k = 0; k < basis.n; ++k) {
    double w2 = basis.omega2[k];
    if (w2 < -free_tol)
      throw SimError(ErrorCode::NegativeEigenvalue,
                     "mode " + std::to_string(k) + " has omega^2 = " + std::to_string(w2));
    basis.free_mode[k] = std::abs(w2) <= free_tol;
  }
  return basis;
}

std::vector<double> to_modes(const std::vector<double>& x, const NormalModeBasis& basis) {
  return matvec(basis.mode_from_particle(), x);
}

std::vector<double> from_modes(const std::vector<double>& q, const NormalModeBasis& basis) {
  return matvec(basis.particle_from_mode(), q);
}

}  // namespace catbranch
