#pragma once

#include <complex>
#include <vector>

namespace catbranch {

using cplx = std::complex<double>;

// Dense row-major real matrix. Everything in this project is tiny (n <= 8
// particles, at most 2n x 2n intermediates), so no effort is spent on blocking.
struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  RealMatrix() = default;
  RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static RealMatrix identity(int n);
};

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, cplx(0.0)) {}

  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  cplx operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static ComplexMatrix identity(int n);
  static ComplexMatrix from_real(const RealMatrix& m);
};

RealMatrix transpose(const RealMatrix& m);
RealMatrix matmul(const RealMatrix& x, const RealMatrix& y);
std::vector<double> matvec(const RealMatrix& m, const std::vector<double>& v);

ComplexMatrix transpose(const ComplexMatrix& m);
ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y);
std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v);

double max_abs_row_sum(const ComplexMatrix& m);

// Symmetric eigendecomposition by cyclic Jacobi rotations, sweeping the strict
// upper triangle in row-major order. Deterministic output convention:
// eigenvalues ascending; each eigenvector column scaled so its largest-magnitude
// entry is positive (ties broken by lowest index). Throws NoConvergence if the
// off-diagonal norm has not dropped below 1e-15 * ||A||_F after max_sweeps.
struct JacobiResult {
  std::vector<double> values;
  RealMatrix vectors;  // columns are eigenvectors
};
JacobiResult jacobi_eigen(const RealMatrix& sym, int max_sweeps = 64);

// LU with partial pivoting for general complex square matrices. Used by the
// propagator (solving against D and tracking det D) but not by the Gaussian
// marginalization path, which needs the symmetric factorization below for its
// branch rule.
struct ComplexLU {
  ComplexMatrix lu;
  std::vector<int> piv;
  int sign = 1;
};
ComplexLU lu_factor(const ComplexMatrix& m);
std::vector<cplx> lu_solve(const ComplexLU& f, const std::vector<cplx>& rhs);
ComplexMatrix lu_solve_matrix(const ComplexLU& f, const ComplexMatrix& rhs);
cplx lu_det(const ComplexLU& f);

// Non-pivoting LDL^T of a complex symmetric (not Hermitian) matrix,
// A = L D L^T with unit lower L. When Re(A) is positive definite every pivot
// has positive real part, which makes sum(principal log d_j) a branch-safe
// log-determinant. Pivoting would destroy that guarantee, hence none is done.
struct ComplexLDLT {
  ComplexMatrix l;
  std::vector<cplx> d;
};
ComplexLDLT ldlt_sym(const ComplexMatrix& sym);
std::vector<cplx> ldlt_solve(const ComplexLDLT& f, const std::vector<cplx>& rhs);
cplx ldlt_logdet(const ComplexLDLT& f);
// Smallest pivot real part must exceed 1e-12 * max real diagonal entry of the
// original matrix, else NotNormalizable.
void require_normalizable(const ComplexLDLT& f, double max_diag);

}  // namespace catbranch
