#pragma once

// Bipartite matrix bookkeeping: the (n*m) x (n*m) operator type with a
// declared outside/inside factorization, Kronecker products and partial
// traces.  Row index (i,j) -> i*m + j with i outside (dim n), j inside (dim m).

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ncnorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline Matrix herm(const Matrix& M) { return 0.5 * (M + M.adjoint()); }

inline double max_abs(const Matrix& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& M, double tol = 1e-12) {
  if (M.rows() != M.cols()) return false;
  return max_abs(M - M.adjoint()) <= tol * std::max(1.0, max_abs(M));
}

struct BipartiteOp {
  int n = 1;  // outside dimension
  int m = 1;  // inside dimension
  Matrix mat;

  BipartiteOp() : mat(Matrix::Zero(1, 1)) {}
  BipartiteOp(int n_, int m_, Matrix mat_) : n(n_), m(m_), mat(std::move(mat_)) {
    if (n <= 0 || m <= 0)
      throw std::invalid_argument("BipartiteOp: dimensions must be positive");
    if (mat.rows() != static_cast<long>(n) * m || mat.cols() != mat.rows())
      throw std::invalid_argument("BipartiteOp: matrix dim must equal n*m, got " +
                                  std::to_string(mat.rows()) + " for n=" +
                                  std::to_string(n) + " m=" + std::to_string(m));
  }
  long dim() const { return static_cast<long>(n) * m; }
};

inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long k = 0; k < A.cols(); ++k)
      K.block(i * B.rows(), k * B.cols(), B.rows(), B.cols()) = A(i, k) * B;
  return K;
}

// A (x) I_m, the outside-factor lift used throughout the NC norm.
inline Matrix lift_outside(const Matrix& A, int m) {
  return kron(A, Matrix::Identity(m, m));
}

enum class Which { inside, outside };

// Partial trace over one factor.  `inside` sums out the inside index and
// returns an n x n matrix; `outside` returns m x m.
inline Matrix partial_trace(const BipartiteOp& Y, Which which) {
  const int n = Y.n, m = Y.m;
  if (which == Which::inside) {
    Matrix R = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < m; ++j)
          R(i, k) += Y.mat(static_cast<long>(i) * m + j, static_cast<long>(k) * m + j);
    return R;
  }
  Matrix R = Matrix::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < n; ++i)
        R(j, l) += Y.mat(static_cast<long>(i) * m + j, static_cast<long>(i) * m + l);
  return R;
}

inline Matrix partial_trace_inside(const BipartiteOp& Y) {
  return partial_trace(Y, Which::inside);
}
inline Matrix partial_trace_outside(const BipartiteOp& Y) {
  return partial_trace(Y, Which::outside);
}

inline bool is_diagonal(const Matrix& M, double tol = 1e-12) {
  for (long i = 0; i < M.rows(); ++i)
    for (long k = 0; k < M.cols(); ++k)
      if (i != k && std::abs(M(i, k)) > tol) return false;
  return true;
}

}  // namespace ncnorm
