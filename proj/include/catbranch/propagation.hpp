#pragma once

#include <vector>

#include "catbranch/gaussian.hpp"
#include "catbranch/model.hpp"
#include "catbranch/normal_modes.hpp"

namespace catbranch {

// Closed-form propagation parameters of one normal mode over a fixed interval
// t. A Gaussian exp(c + b q - A q^2/2) maps under the harmonic (or free)
// kernel to another Gaussian whose parameters follow from co, g, f alone:
//   co = cos(w t),  g = hbar t sinc(w t),  f = w sin(w t) / hbar
// (free mode: co = 1, g = hbar t, f = 0). This form stays finite at caustics
// where the raw Mehler kernel's 1/sin(w t) blows up.
struct ModeKernel {
  enum class Regime { oscillator, free_particle, near_caustic };

  double omega = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  double t = 0.0;
  double co = 1.0;
  double g = 0.0;
  double f = 0.0;
  Regime regime = Regime::free_particle;

  static ModeKernel make(double omega2, bool free_mode, double hbar, double t);
};

std::vector<ModeKernel> make_kernels(const NormalModeBasis& basis, double hbar, double t);

// 2^n product-of-cats branches in particle coordinates, diagonal A with
// A_ii = 1/(2 sigma_i^2), unit amplitude each (bra = ket = branch label).
std::vector<LabeledTerm> build_initial_terms(const ValidatedConfig& cfg);

// Multi-mode update in mode coordinates. With diagonal matrices Co, G, F from
// the kernels and D = Co + i A G:
//   A' = sym(D^{-1} (A Co + i F)),  b' = D^{-1} b,
//   c' = c + (i/2) b^T G D^{-1} b - (1/2) log det D.
// The log-determinant branch is kept continuous in t by tracking the winding
// of det D(tau) from 0 to t (principal values fail past caustics).
ComplexGaussianTerm propagate_term(const ComplexGaussianTerm& mode_term,
                                   const std::vector<ModeKernel>& kernels);

// Applies the coordinate substitution x = T x' to a term (congruence on A,
// transpose action on b, c unchanged).
ComplexGaussianTerm transform_term(const ComplexGaussianTerm& t, const RealMatrix& T);

// Full pipeline for labeled particle-coordinate terms: to modes, propagate,
// back to particle coordinates. Labels are preserved.
std::vector<LabeledTerm> evolve_state(const std::vector<LabeledTerm>& initial,
                                      const NormalModeBasis& basis, double hbar, double t);

}  // namespace catbranch
