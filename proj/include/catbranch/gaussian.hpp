#pragma once

#include <vector>

#include "catbranch/linalg.hpp"
#include "catbranch/model.hpp"

namespace catbranch {

// One Gaussian term exp(c + b.x - x.A.x/2) with complex symmetric A stored as
// the packed upper triangle (row-major). c absorbs amplitude and phase, so
// sums of terms represent the full wavefunctions and densities in this code.
struct ComplexGaussianTerm {
  int dim = 0;
  cplx c{0.0};
  std::vector<cplx> b;
  std::vector<cplx> upper;

  ComplexGaussianTerm() = default;
  explicit ComplexGaussianTerm(int n)
      : dim(n), b(n, cplx(0.0)), upper(static_cast<size_t>(n) * (n + 1) / 2, cplx(0.0)) {}

  cplx a(int i, int j) const;
  void set_a(int i, int j, cplx v);
  ComplexMatrix a_full() const;

  // Symmetrizes off-diagonal pairs of m as (m_ij + m_ji)/2 while packing.
  static ComplexGaussianTerm from_parts(cplx c, const std::vector<cplx>& b,
                                        const ComplexMatrix& m);
};

struct LabeledTerm {
  ComplexGaussianTerm term;
  PacketLabel bra;
  PacketLabel ket;
};

// Overflow-safe: the real part of the exponent is clamped to [-700, 700]
// before exponentiation.
cplx evaluate(const ComplexGaussianTerm& t, const std::vector<double>& x);

ComplexGaussianTerm multiply(const ComplexGaussianTerm& t1, const ComplexGaussianTerm& t2);
ComplexGaussianTerm conjugate(const ComplexGaussianTerm& t);

// Integrates out the coordinates listed in drop (0-based, deduplicated order
// irrelevant), keeping the remaining coordinates in their original relative
// order. Requires Re of the dropped diagonal block to be positive definite.
ComplexGaussianTerm marginalize(const ComplexGaussianTerm& t, const std::vector<int>& drop);

// Integral over all coordinates: (2 pi)^{dim/2} det(A)^{-1/2} exp(c + b.A^{-1}.b/2),
// branch fixed by the positive-real-part pivots of the symmetric factorization.
cplx integrate_all(const ComplexGaussianTerm& t);

}  // namespace catbranch
