#include "catbranch/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "catbranch/errors.hpp"

namespace catbranch {

namespace {

double sinc(double z) {
  if (std::abs(z) < 1e-6) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

struct CoGF {
  std::vector<double> co, g, f;
};

CoGF cogf_at(const std::vector<ModeKernel>& kernels, double tau) {
  CoGF v;
  size_t n = kernels.size();
  v.co.resize(n);
  v.g.resize(n);
  v.f.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const ModeKernel& mk = kernels[k];
    if (mk.regime == ModeKernel::Regime::free_particle) {
      v.co[k] = 1.0;
      v.g[k] = mk.hbar * tau;
      v.f[k] = 0.0;
    } else {
      double z = mk.omega * tau;
      v.co[k] = std::cos(z);
      v.g[k] = mk.hbar * tau * sinc(z);
      v.f[k] = mk.omega * std::sin(z) / mk.hbar;
    }
  }
  return v;
}

cplx det_d_at(const ComplexMatrix& a, const std::vector<ModeKernel>& kernels, double tau) {
  CoGF v = cogf_at(kernels, tau);
  int n = a.rows;
  ComplexMatrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx val = cplx(0.0, v.g[j]) * a(i, j);
      if (i == j) val += v.co[i];
      d(i, j) = val;
    }
  return lu_det(lu_factor(d));
}

// Winding angle of det D(tau) along [0, t]. Segments whose endpoint ratio
// turns by more than pi/2 are bisected until the principal argument of each
// ratio is trustworthy.
double track_arg(const ComplexMatrix& a, const std::vector<ModeKernel>& kernels, double t) {
  if (t == 0.0) return 0.0;
  double omega_max = 0.0;
  for (const ModeKernel& mk : kernels) omega_max = std::max(omega_max, mk.omega);
  double hbar = kernels.front().hbar;
  double rate = omega_max + hbar * max_abs_row_sum(a);
  int k0 = std::max(4, static_cast<int>(std::ceil(t * rate / 0.4)));

  struct Node {
    double tau;
    cplx det;
  };
  std::vector<Node> stack;  // pending right endpoints, deepest last
  stack.reserve(64);
  double theta = 0.0;
  Node left{0.0, cplx(1.0)};
  for (int k = k0; k >= 1; --k) {
    double tau = t * k / k0;
    stack.push_back({tau, det_d_at(a, kernels, tau)});
  }
  int splits = 0;
  const int max_splits = 1 << 20;
  while (!stack.empty()) {
    Node right = stack.back();
    cplx ratio = right.det / left.det;
    double darg = std::arg(ratio);
    if (std::abs(darg) > 1.5707963267948966 && right.tau - left.tau > 1e-300) {
      if (++splits > max_splits)
        throw SimError(ErrorCode::NoConvergence, "determinant branch tracking stalled");
      double mid = 0.5 * (left.tau + right.tau);
      stack.push_back({mid, det_d_at(a, kernels, mid)});
      continue;
    }
    theta += darg;
    left = right;
    stack.pop_back();
  }
  return theta;
}

}  // namespace

ModeKernel ModeKernel::make(double omega2, bool free_mode, double hbar, double t) {
  if (t < 0.0) throw SimError(ErrorCode::ValidationError, "kernel time must be >= 0");
  if (!(hbar > 0.0)) throw SimError(ErrorCode::ValidationError, "kernel hbar must be > 0");
  ModeKernel mk;
  mk.hbar = hbar;
  mk.t = t;
  if (free_mode) {
    mk.omega = 0.0;
    mk.regime = Regime::free_particle;
    mk.co = 1.0;
    mk.g = hbar * t;
    mk.f = 0.0;
    return mk;
  }
  mk.omega = std::sqrt(std::max(omega2, 0.0));
  double z = mk.omega * t;
  double s = std::sin(z);
  mk.co = std::cos(z);
  mk.g = hbar * t * sinc(z);
  mk.f = mk.omega * s / hbar;
  mk.regime = (t > 0.0 && std::abs(s) < 1e-8) ? Regime::near_caustic : Regime::oscillator;
  return mk;
}

std::vector<ModeKernel> make_kernels(const NormalModeBasis& basis, double hbar, double t) {
  std::vector<ModeKernel> ks;
  ks.reserve(basis.n);
  for (int k = 0; k < basis.n; ++k)
    ks.push_back(ModeKernel::make(basis.omega2[k], basis.free_mode[k], hbar, t));
  return ks;
}

std::vector<LabeledTerm> build_initial_terms(const ValidatedConfig& cfg) {
  int n = cfg.network.n;
  std::vector<LabeledTerm> terms;
  terms.reserve(1u << n);
  for (unsigned idx = 0; idx < (1u << n); ++idx) {
    PacketLabel lbl = PacketLabel::from_index(idx, n);
    ComplexGaussianTerm t(n);
    cplx c(0.0);
    for (int i = 0; i < n; ++i) {
      double s2 = cfg.cat.sigma[i] * cfg.cat.sigma[i];
      double mu = lbl.a[i] ? cfg.cat.d[i] : 0.0;
      t.set_a(i, i, 1.0 / (2.0 * s2));
      t.b[i] = mu / (2.0 * s2);
      c -= mu * mu / (4.0 * s2);
    }
    t.c = c;
    terms.push_back({std::move(t), lbl, lbl});
  }
  return terms;
}

ComplexGaussianTerm propagate_term(const ComplexGaussianTerm& mode_term,
                                   const std::vector<ModeKernel>& kernels) {
  int n = mode_term.dim;
  if (static_cast<int>(kernels.size()) != n)
    throw SimError(ErrorCode::DimensionMismatch, "kernel count vs term dimension");
  if (n == 0) throw SimError(ErrorCode::EmptyInput, "empty term");
  double t = kernels.front().t;
  double hbar = kernels.front().hbar;
  for (const ModeKernel& mk : kernels)
    if (mk.t != t || mk.hbar != hbar)
      throw SimError(ErrorCode::ValidationError, "kernels disagree on t or hbar");

  ComplexMatrix a = mode_term.a_full();
  {
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i).real());
    require_normalizable(ldlt_sym(a), max_diag);
  }

  CoGF v = cogf_at(kernels, t);
  ComplexMatrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx val = cplx(0.0, v.g[j]) * a(i, j);
      if (i == j) val += v.co[i];
      d(i, j) = val;
    }
  ComplexLU lu = lu_factor(d);

  ComplexMatrix rhs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx val = a(i, j) * v.co[j];
      if (i == j) val += cplx(0.0, v.f[i]);
      rhs(i, j) = val;
    }
  ComplexMatrix a_new = lu_solve_matrix(lu, rhs);

  std::vector<cplx> y = lu_solve(lu, mode_term.b);

  cplx quad(0.0);
  for (int i = 0; i < n; ++i) quad += mode_term.b[i] * v.g[i] * y[i];

  cplx det = lu_det(lu);
  cplx logdet(std::log(std::abs(det)), track_arg(a, kernels, t));

  ComplexGaussianTerm out(n);
  out.b = std::move(y);
  out.c = mode_term.c + cplx(0.0, 0.5) * quad - 0.5 * logdet;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.set_a(i, j, 0.5 * (a_new(i, j) + a_new(j, i)));
  return out;
}

ComplexGaussianTerm transform_term(const ComplexGaussianTerm& t, const RealMatrix& T) {
  if (T.rows != t.dim || T.cols != t.dim)
    throw SimError(ErrorCode::DimensionMismatch, "transform shape");
  ComplexMatrix tc = ComplexMatrix::from_real(T);
  ComplexMatrix a_new = matmul(transpose(tc), matmul(t.a_full(), tc));
  std::vector<cplx> b_new = matvec(transpose(tc), t.b);
  return ComplexGaussianTerm::from_parts(t.c, b_new, a_new);
}

std::vector<LabeledTerm> evolve_state(const std::vector<LabeledTerm>& initial,
                                      const NormalModeBasis& basis, double hbar, double t) {
  std::vector<ModeKernel> kernels = make_kernels(basis, hbar, t);
  RealMatrix s = basis.particle_from_mode();
  RealMatrix sinv = basis.mode_from_particle();
  std::vector<LabeledTerm> out;
  out.reserve(initial.size());
  for (const LabeledTerm& lt : initial) {
    ComplexGaussianTerm mode_t = transform_term(lt.term, s);
    ComplexGaussianTerm prop = propagate_term(mode_t, kernels);
    out.push_back({transform_term(prop, sinv), lt.bra, lt.ket});
  }
  return out;
}

}  // namespace catbranch
