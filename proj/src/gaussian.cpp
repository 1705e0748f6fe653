#include "catbranch/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "catbranch/errors.hpp"

namespace catbranch {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

size_t packed_index(int dim, int i, int j) {
  // row-major upper triangle, i <= j
  return static_cast<size_t>(i) * dim - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

}  // namespace

cplx ComplexGaussianTerm::a(int i, int j) const {
  if (i > j) std::swap(i, j);
  return upper[packed_index(dim, i, j)];
}

void ComplexGaussianTerm::set_a(int i, int j, cplx v) {
  if (i > j) std::swap(i, j);
  upper[packed_index(dim, i, j)] = v;
}

ComplexMatrix ComplexGaussianTerm::a_full() const {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      cplx v = upper[packed_index(dim, i, j)];
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

ComplexGaussianTerm ComplexGaussianTerm::from_parts(cplx c, const std::vector<cplx>& b,
                                                    const ComplexMatrix& m) {
  if (m.rows != m.cols || m.rows != static_cast<int>(b.size()))
    throw SimError(ErrorCode::DimensionMismatch, "term parts disagree");
  ComplexGaussianTerm t(m.rows);
  t.c = c;
  t.b = b;
  for (int i = 0; i < t.dim; ++i) {
    t.set_a(i, i, m(i, i));
    for (int j = i + 1; j < t.dim; ++j) t.set_a(i, j, 0.5 * (m(i, j) + m(j, i)));
  }
  return t;
}

cplx evaluate(const ComplexGaussianTerm& t, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != t.dim)
    throw SimError(ErrorCode::DimensionMismatch, "evaluate point dimension");
  cplx e = t.c;
  for (int i = 0; i < t.dim; ++i) e += t.b[i] * x[i];
  for (int i = 0; i < t.dim; ++i) {
    e -= 0.5 * t.a(i, i) * x[i] * x[i];
    for (int j = i + 1; j < t.dim; ++j) e -= t.a(i, j) * x[i] * x[j];
  }
  double re = std::min(700.0, std::max(-700.0, e.real()));
  return std::exp(cplx(re, e.imag()));
}

ComplexGaussianTerm multiply(const ComplexGaussianTerm& t1, const ComplexGaussianTerm& t2) {
  if (t1.dim != t2.dim)
    throw SimError(ErrorCode::DimensionMismatch, "multiply term dimensions");
  ComplexGaussianTerm r(t1.dim);
  r.c = t1.c + t2.c;
  for (int i = 0; i < r.dim; ++i) r.b[i] = t1.b[i] + t2.b[i];
  for (size_t k = 0; k < r.upper.size(); ++k) r.upper[k] = t1.upper[k] + t2.upper[k];
  return r;
}

ComplexGaussianTerm conjugate(const ComplexGaussianTerm& t) {
  ComplexGaussianTerm r = t;
  r.c = std::conj(r.c);
  for (cplx& v : r.b) v = std::conj(v);
  for (cplx& v : r.upper) v = std::conj(v);
  return r;
}

ComplexGaussianTerm marginalize(const ComplexGaussianTerm& t, const std::vector<int>& drop) {
  if (drop.empty()) throw SimError(ErrorCode::EmptyInput, "marginalize drop set empty");
  std::vector<int> d = drop;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  if (d.front() < 0 || d.back() >= t.dim)
    throw SimError(ErrorCode::DimensionMismatch, "marginalize drop index out of range");
  if (static_cast<int>(d.size()) == t.dim)
    throw SimError(ErrorCode::ValidationError,
                   "marginalize would drop every coordinate; use integrate_all");

  std::vector<int> keep;
  keep.reserve(t.dim - d.size());
  {
    size_t di = 0;
    for (int i = 0; i < t.dim; ++i) {
      if (di < d.size() && d[di] == i) {
        ++di;
      } else {
        keep.push_back(i);
      }
    }
  }
  int nk = static_cast<int>(keep.size());
  int nd = static_cast<int>(d.size());

  ComplexMatrix add(nd, nd);
  double max_diag = 0.0;
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < nd; ++j) add(i, j) = t.a(d[i], d[j]);
    max_diag = std::max(max_diag, add(i, i).real());
  }
  ComplexLDLT fac = ldlt_sym(add);
  require_normalizable(fac, max_diag);

  std::vector<cplx> bd(nd);
  for (int i = 0; i < nd; ++i) bd[i] = t.b[d[i]];
  std::vector<cplx> z = ldlt_solve(fac, bd);

  // columns of A_dk solved against A_dd
  ComplexMatrix y(nd, nk);
  {
    std::vector<cplx> col(nd);
    for (int j = 0; j < nk; ++j) {
      for (int i = 0; i < nd; ++i) col[i] = t.a(d[i], keep[j]);
      std::vector<cplx> sol = ldlt_solve(fac, col);
      for (int i = 0; i < nd; ++i) y(i, j) = sol[i];
    }
  }

  ComplexGaussianTerm r(nk);
  for (int i = 0; i < nk; ++i) {
    cplx bi = t.b[keep[i]];
    for (int p = 0; p < nd; ++p) bi -= t.a(keep[i], d[p]) * z[p];
    r.b[i] = bi;
  }
  for (int i = 0; i < nk; ++i)
    for (int j = i; j < nk; ++j) {
      cplx aij = t.a(keep[i], keep[j]);
      cplx aji = aij;
      for (int p = 0; p < nd; ++p) {
        aij -= t.a(keep[i], d[p]) * y(p, j);
        aji -= t.a(keep[j], d[p]) * y(p, i);
      }
      r.set_a(i, j, 0.5 * (aij + aji));
    }

  cplx quad(0.0);
  for (int i = 0; i < nd; ++i) quad += bd[i] * z[i];
  r.c = t.c + 0.5 * quad + 0.5 * nd * std::log(kTwoPi) - 0.5 * ldlt_logdet(fac);
  return r;
}

cplx integrate_all(const ComplexGaussianTerm& t) {
  if (t.dim < 1) throw SimError(ErrorCode::EmptyInput, "integrate_all on empty term");
  ComplexMatrix a = t.a_full();
  double max_diag = 0.0;
  for (int i = 0; i < t.dim; ++i) max_diag = std::max(max_diag, a(i, i).real());
  ComplexLDLT fac = ldlt_sym(a);
  require_normalizable(fac, max_diag);
  std::vector<cplx> z = ldlt_solve(fac, t.b);
  cplx quad(0.0);
  for (int i = 0; i < t.dim; ++i) quad += t.b[i] * z[i];
  cplx log_val =
      t.c + 0.5 * quad + 0.5 * t.dim * std::log(kTwoPi) - 0.5 * ldlt_logdet(fac);
  return std::exp(log_val);
}

}  // namespace catbranch
