#pragma once

// The Carlen-Lieb norm.  For Hermitian Y (Lemma 2):
//
//   ||Y||_CL = inf { Psi_{p,q}( diag(Y+A, A) ) : A >= 0, Y + A >= 0 }
//
// with the block-diagonal operator taken in M_n (x) M_{2m} (inside dimension
// doubled).  For general Y, half the triple-bar norm of the Hermitian
// embedding [[0, Y], [Y*, 0]], again with inside-space doubling.  The
// minimizations are convex for 1 <= p <= 2, so the converged objective is the
// norm up to tolerance; outside that range the routines refuse to run.

#include "ncnorm/linalg.hpp"
#include "ncnorm/matrix.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"

namespace ncnorm {

struct CLResult {
  NormEstimate estimate;
  Matrix optimal_A;  // minimizing slack of Lemma 2 (Hermitian path)
};

namespace detail {

// diag(P, Q) with the doubling on the inside factor: (i, j, s) -> (i, 2j + s).
inline Matrix embed_diag_inside(const Matrix& P, const Matrix& Q, int n, int m) {
  Matrix Z = Matrix::Zero(2L * n * m, 2L * n * m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          const long row = static_cast<long>(i) * 2 * m + 2 * j;
          const long col = static_cast<long>(k) * 2 * m + 2 * l;
          Z(row, col) = P(static_cast<long>(i) * m + j, static_cast<long>(k) * m + l);
          Z(row + 1, col + 1) = Q(static_cast<long>(i) * m + j, static_cast<long>(k) * m + l);
        }
  return Z;
}

// Adjoint of A -> diag(A, A): sums the two diagonal embedding blocks.
inline Matrix extract_diag_inside(const Matrix& G, int n, int m) {
  Matrix g = Matrix::Zero(static_cast<long>(n) * m, static_cast<long>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          const long row = static_cast<long>(i) * 2 * m + 2 * j;
          const long col = static_cast<long>(k) * 2 * m + 2 * l;
          g(static_cast<long>(i) * m + j, static_cast<long>(k) * m + l) =
              G(row, col) + G(row + 1, col + 1);
        }
  return g;
}

inline void check_cl_regime(const NormOrder& ord) {
  if (!(ord.p >= 1.0 && ord.p <= 2.0 && std::isfinite(ord.p)))
    throw std::invalid_argument("cl_norm: requires 1 <= p <= 2");
  if (!(ord.q >= 1.0 && std::isfinite(ord.q)))
    throw std::invalid_argument("cl_norm: requires finite q >= 1");
}

}  // namespace detail

inline CLResult cl_norm_hermitian(const BipartiteOp& Y, const NormOrder& ord,
                                  const OptimizerConfig& cfg = {}) {
  detail::check_cl_regime(ord);
  if (!is_hermitian(Y.mat))
    throw std::invalid_argument("cl_norm_hermitian: input must be Hermitian");
  const int n = Y.n, m = Y.m;
  const Matrix Yh = herm(Y.mat);
  CLResult out;
  if (max_abs(Yh) == 0.0) {
    out.estimate.status = SolveStatus::converged;
    out.optimal_A = Matrix::Zero(Y.dim(), Y.dim());
    out.estimate.witness = out.optimal_A;
    return out;
  }

  // Dykstra iterates are feasible only within 1e-9; clip both blocks onto the
  // PSD cone before Psi sees them.
  auto objective = [&](const Matrix& A) {
    return psi(BipartiteOp(n, 2 * m,
                           detail::embed_diag_inside(psd_project(Yh + A), psd_project(A), n, m)),
               ord);
  };
  auto gradient = [&](const Matrix& A) {
    Matrix Z = detail::embed_diag_inside(psd_project(Yh + A), psd_project(A), n, m);
    Matrix G = psi_gradient(BipartiteOp(n, 2 * m, Z), ord);
    return detail::extract_diag_inside(G, n, m);
  };
  auto project = [&](const Matrix& A) { return project_feasible_cl(A, Yh); };

  Matrix A0 = psd_project(Matrix(-Yh)) +
              0.1 * schatten_norm(Yh, kInf) * Matrix::Identity(Y.dim(), Y.dim());
  auto res = detail::projected_descent(A0, objective, gradient, project, cfg.tol, cfg.max_iters);
  // the Jordan split A = (-Y)_+ is feasible and attains psi(Y) when Y is PSD;
  // the interior start can stall above it, so keep whichever is better
  const Matrix Aneg = psd_project(Matrix(-Yh));
  const double fneg = objective(Aneg);
  if (fneg < res.value) {
    res.value = fneg;
    res.argmin = Aneg;
  }
  out.estimate.value = res.value;
  out.estimate.upper = res.value;
  out.estimate.lower =
      res.converged ? std::max(0.0, res.value * (1.0 - 10.0 * cfg.tol)) : 0.0;
  out.estimate.status = res.converged ? SolveStatus::converged : SolveStatus::bracket_only;
  out.estimate.iterations = res.iterations;
  out.optimal_A = res.argmin;
  out.estimate.witness = res.argmin;
  return out;
}

// [[0, Y], [Y*, 0]] with the doubling on the inside factor.
inline Matrix embed_offdiag_inside(const BipartiteOp& Y) {
  const int n = Y.n, m = Y.m;
  Matrix X = Matrix::Zero(2L * n * m, 2L * n * m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          const Complex y = Y.mat(static_cast<long>(i) * m + j, static_cast<long>(k) * m + l);
          X(static_cast<long>(i) * 2 * m + 2 * j, static_cast<long>(k) * 2 * m + 2 * l + 1) = y;
          X(static_cast<long>(k) * 2 * m + 2 * l + 1, static_cast<long>(i) * 2 * m + 2 * j) =
              std::conj(y);
        }
  return X;
}

inline CLResult cl_norm_general(const BipartiteOp& Y, const NormOrder& ord,
                                const OptimizerConfig& cfg = {}) {
  detail::check_cl_regime(ord);
  CLResult out;
  if (max_abs(Y.mat) == 0.0) {
    out.estimate.status = SolveStatus::converged;
    out.optimal_A = Matrix::Zero(2L * Y.dim(), 2L * Y.dim());
    out.estimate.witness = out.optimal_A;
    return out;
  }
  BipartiteOp X(Y.n, 2 * Y.m, embed_offdiag_inside(Y));
  NormEstimate half = triple_bar_norm(X, ord, cfg);
  out.estimate = half;
  out.estimate.value = 0.5 * half.value;
  out.estimate.lower = 0.5 * half.lower;
  out.estimate.upper = 0.5 * half.upper;
  if (half.witness) out.optimal_A = *half.witness;
  return out;
}

// Lemma pos-bound5: for 2 = p <= q and PSD Y, ||Y||_CL >= Psi_{2,q}(Y)/sqrt(2).
inline double cl_lower_p2(const BipartiteOp& Y, const NormOrder& ord) {
  if (!(ord.p == 2.0 && ord.q >= 2.0))
    throw std::invalid_argument("cl_lower_p2: requires p = 2 <= q");
  if (!is_psd(Y.mat)) throw std::domain_error("cl_lower_p2: input must be PSD");
  return psi(Y, ord) / std::sqrt(2.0);
}

// Theorem 1(b) constant 2^{3 - 1/p}.
inline double theorem1_constant(const NormOrder& ord) {
  if (!(ord.p >= 1.0 && ord.p <= 2.0))
    throw std::invalid_argument("theorem1_constant: requires 1 <= p <= 2");
  return std::pow(2.0, 3.0 - 1.0 / ord.p);
}

}  // namespace ncnorm
