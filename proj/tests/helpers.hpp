#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "catbranch/gaussian.hpp"
#include "catbranch/model.hpp"
#include "catbranch/oracle.hpp"
#include "catbranch/propagation.hpp"
#include "catbranch/reduced_density.hpp"

namespace testutil {

using catbranch::cplx;

// mt19937 output is pinned by the standard; distributions are not, so map the
// raw 32-bit stream ourselves for cross-platform reproducibility.
struct Rng {
  std::mt19937 engine;

  explicit Rng(unsigned seed) : engine(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (engine() / 4294967296.0);
  }
};

// Normalizable random term: Re(A) = R^T R + 0.8 I keeps the mass well inside
// [-12, 12] for quadrature cross-checks.
inline catbranch::ComplexGaussianTerm random_term(Rng& rng, int dim) {
  catbranch::RealMatrix r(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = rng.uniform(-0.6, 0.6);
  catbranch::RealMatrix re = catbranch::matmul(catbranch::transpose(r), r);
  catbranch::ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = re(i, j);
    a(i, i) += 0.8;
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double im = rng.uniform(-0.3, 0.3);
      a(i, j) += cplx(0.0, im);
      if (j != i) a(j, i) += cplx(0.0, im);
    }
  std::vector<cplx> b(dim);
  for (int i = 0; i < dim; ++i) b[i] = cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
  cplx c(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
  return catbranch::ComplexGaussianTerm::from_parts(c, b, a);
}

inline catbranch::QuadratureSpec box_quadrature(int dim, double half_width, int points) {
  catbranch::QuadratureSpec spec;
  for (int d = 0; d < dim; ++d)
    spec.axes.push_back(catbranch::AxisSpec{-half_width, half_width, points});
  return spec;
}

// <psi|psi> via closed-form integrals of all bra/ket products.
inline double total_norm(const catbranch::ValidatedConfig& cfg, double t) {
  std::vector<catbranch::LabeledTerm> wf = catbranch::evolve_state(
      catbranch::build_initial_terms(cfg), cfg.basis, cfg.cat.hbar, t);
  cplx z(0.0);
  for (const catbranch::LabeledTerm& lt : catbranch::density_pair_terms(wf))
    z += catbranch::integrate_all(lt.term);
  return z.real();
}

// Restriction of a term to the plane where the coordinates in `fixed` take the
// given values; the result is a term over the remaining coordinates.
inline catbranch::ComplexGaussianTerm slice_term(const catbranch::ComplexGaussianTerm& t,
                                                 const std::vector<int>& fixed,
                                                 const std::vector<double>& values) {
  std::vector<bool> is_fixed(t.dim, false);
  std::vector<double> value_of(t.dim, 0.0);
  for (size_t i = 0; i < fixed.size(); ++i) {
    is_fixed[fixed[i]] = true;
    value_of[fixed[i]] = values[i];
  }
  std::vector<int> keep;
  for (int i = 0; i < t.dim; ++i)
    if (!is_fixed[i]) keep.push_back(i);

  catbranch::ComplexGaussianTerm out(static_cast<int>(keep.size()));
  cplx c = t.c;
  for (int i : fixed) c += t.b[i] * value_of[i];
  for (size_t p = 0; p < fixed.size(); ++p)
    for (size_t q = 0; q < fixed.size(); ++q)
      c -= 0.5 * t.a(fixed[p], fixed[q]) * value_of[fixed[p]] * value_of[fixed[q]];
  out.c = c;
  for (size_t i = 0; i < keep.size(); ++i) {
    cplx b = t.b[keep[i]];
    for (int p : fixed) b -= t.a(keep[i], p) * value_of[p];
    out.b[i] = b;
    for (size_t j = i; j < keep.size(); ++j)
      out.set_a(static_cast<int>(i), static_cast<int>(j), t.a(keep[i], keep[j]));
  }
  return out;
}

inline catbranch::OscillatorNetwork single_particle(double m, double k) {
  catbranch::OscillatorNetwork net;
  net.n = 1;
  net.masses = {m};
  net.external_k = {k};
  net.coupling_k = catbranch::RealMatrix(1, 1);
  net.system_index = 0;
  return net;
}

inline catbranch::CatSpec single_cat(double d, double sigma, double hbar = 1.0) {
  catbranch::CatSpec cat;
  cat.d = {d};
  cat.sigma = {sigma};
  cat.hbar = hbar;
  return cat;
}

}  // namespace testutil
