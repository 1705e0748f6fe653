#include "catbranch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catbranch/errors.hpp"

namespace catbranch {

RealMatrix RealMatrix::identity(int n) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_real(const RealMatrix& r) {
  ComplexMatrix m(r.rows, r.cols);
  for (size_t k = 0; k < r.a.size(); ++k) m.a[k] = r.a[k];
  return m;
}

RealMatrix transpose(const RealMatrix& m) {
  RealMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

RealMatrix matmul(const RealMatrix& x, const RealMatrix& y) {
  if (x.cols != y.rows) throw SimError(ErrorCode::DimensionMismatch, "matmul shapes");
  RealMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double xv = x(i, k);
      if (xv == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
    }
  return z;
}

std::vector<double> matvec(const RealMatrix& m, const std::vector<double>& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw SimError(ErrorCode::DimensionMismatch, "matvec shapes");
  std::vector<double> r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
  ComplexMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.cols != y.rows) throw SimError(ErrorCode::DimensionMismatch, "matmul shapes");
  ComplexMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      cplx xv = x(i, k);
      if (xv == cplx(0.0)) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
    }
  return z;
}

std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw SimError(ErrorCode::DimensionMismatch, "matvec shapes");
  std::vector<cplx> r(m.rows, cplx(0.0));
  for (int i = 0; i < m.rows; ++i) {
    cplx s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs_row_sum(const ComplexMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

JacobiResult jacobi_eigen(const RealMatrix& sym, int max_sweeps) {
  if (sym.rows != sym.cols) throw SimError(ErrorCode::DimensionMismatch, "jacobi needs square");
  int n = sym.rows;
  RealMatrix a = sym;
  RealMatrix v = RealMatrix::identity(n);

  double fro2 = 0.0;
  for (double x : sym.a) fro2 += x * x;
  double thresh = 1e-30 * std::max(fro2, 1e-300);

  auto offdiag2 = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return 2.0 * s;
  };

  bool converged = (n <= 1) || offdiag2() <= thresh;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double app = a(p, p), aqq = a(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = offdiag2() <= thresh;
  }
  if (!converged)
    throw SimError(ErrorCode::NoConvergence, "jacobi sweeps exhausted");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });

  JacobiResult res;
  res.values.resize(n);
  res.vectors = RealMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    int src = order[j];
    res.values[j] = a(src, src);
    int imax = 0;
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = std::abs(v(i, src));
      if (m > vmax) {
        vmax = m;
        imax = i;
      }
    }
    double flip = (v(imax, src) < 0.0) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) res.vectors(i, j) = flip * v(i, src);
  }
  return res;
}

ComplexLU lu_factor(const ComplexMatrix& m) {
  if (m.rows != m.cols) throw SimError(ErrorCode::DimensionMismatch, "lu needs square");
  int n = m.rows;
  ComplexLU f;
  f.lu = m;
  f.piv.resize(n);
  f.sign = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      double cand = std::abs(f.lu(i, k));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (best == 0.0) throw SimError(ErrorCode::SingularBlock, "lu zero pivot");
    f.piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      f.sign = -f.sign;
    }
    cplx inv = 1.0 / f.lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      cplx lik = f.lu(i, k) * inv;
      f.lu(i, k) = lik;
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  return f;
}

std::vector<cplx> lu_solve(const ComplexLU& f, const std::vector<cplx>& rhs) {
  int n = f.lu.rows;
  if (static_cast<int>(rhs.size()) != n)
    throw SimError(ErrorCode::DimensionMismatch, "lu_solve rhs size");
  std::vector<cplx> x = rhs;
  for (int k = 0; k < n; ++k) {
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
    for (int i = k + 1; i < n; ++i) x[i] -= f.lu(i, k) * x[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

ComplexMatrix lu_solve_matrix(const ComplexLU& f, const ComplexMatrix& rhs) {
  int n = f.lu.rows;
  if (rhs.rows != n) throw SimError(ErrorCode::DimensionMismatch, "lu_solve rhs rows");
  ComplexMatrix x(n, rhs.cols);
  std::vector<cplx> col(n);
  for (int j = 0; j < rhs.cols; ++j) {
    for (int i = 0; i < n; ++i) col[i] = rhs(i, j);
    std::vector<cplx> sol = lu_solve(f, col);
    for (int i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

cplx lu_det(const ComplexLU& f) {
  cplx d(static_cast<double>(f.sign), 0.0);
  for (int i = 0; i < f.lu.rows; ++i) d *= f.lu(i, i);
  return d;
}

ComplexLDLT ldlt_sym(const ComplexMatrix& sym) {
  if (sym.rows != sym.cols) throw SimError(ErrorCode::DimensionMismatch, "ldlt needs square");
  int n = sym.rows;
  ComplexLDLT f;
  f.l = ComplexMatrix::identity(n);
  f.d.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx dj = sym(j, j);
    for (int k = 0; k < j; ++k) dj -= f.l(j, k) * f.l(j, k) * f.d[k];
    if (std::abs(dj) < 1e-300)
      throw SimError(ErrorCode::SingularBlock, "ldlt zero pivot");
    f.d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      cplx lij = sym(i, j);
      for (int k = 0; k < j; ++k) lij -= f.l(i, k) * f.l(j, k) * f.d[k];
      f.l(i, j) = lij / dj;
    }
  }
  return f;
}

std::vector<cplx> ldlt_solve(const ComplexLDLT& f, const std::vector<cplx>& rhs) {
  int n = f.l.rows;
  if (static_cast<int>(rhs.size()) != n)
    throw SimError(ErrorCode::DimensionMismatch, "ldlt_solve rhs size");
  std::vector<cplx> x = rhs;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) x[i] -= f.l(i, k) * x[k];
  for (int i = 0; i < n; ++i) x[i] /= f.d[i];
  for (int i = n - 1; i >= 0; --i)
    for (int k = i + 1; k < n; ++k) x[i] -= f.l(k, i) * x[k];
  return x;
}

cplx ldlt_logdet(const ComplexLDLT& f) {
  cplx s(0.0);
  for (const cplx& d : f.d) s += std::log(d);
  return s;
}

void require_normalizable(const ComplexLDLT& f, double max_diag) {
  double floor = 1e-12 * max_diag;
  for (const cplx& d : f.d) {
    if (d.real() <= floor)
      throw SimError(ErrorCode::NotNormalizable,
                     "factorization pivot real part below positivity floor");
  }
}

}  // namespace catbranch
