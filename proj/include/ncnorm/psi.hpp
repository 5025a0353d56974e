#pragma once

// The mixed-norm functional Psi_{p,q}(Y) = (Tr_1 (Tr_2 Y^p)^{q/p})^{1/q}, its
// Frechet gradient, and the triple-bar norm
//   |||X||| = inf { Psi(A) + Psi(B) : X + A = B, A >= 0, B >= 0 }
// solved by projected gradient descent over the feasible slack A.

#include <cmath>
#include <optional>
#include <string>

#include "ncnorm/linalg.hpp"
#include "ncnorm/matrix.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/random.hpp"

namespace ncnorm {

struct OptimizerConfig {
  double tol = 1e-8;
  int max_iters = 5000;
  int restarts = 16;
  std::uint64_t seed = 0;
};

enum class SolveStatus { closed_form, converged, bracket_only };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::closed_form: return "closed-form";
    case SolveStatus::converged: return "converged";
    default: return "bracket-only";
  }
}

struct NormEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  SolveStatus status = SolveStatus::bracket_only;
  int iterations = 0;
  std::optional<Matrix> witness;
};

namespace detail {

// Spectrum of the Hermitian part, with the PSD tolerance check used by Psi:
// eigenvalues down to -1e-10 (relative to scale) are clipped to zero.
inline Spectrum psd_spectrum(const Matrix& Y, const char* who) {
  if (!is_hermitian(Y, 1e-9))
    throw std::domain_error(std::string(who) + ": input must be Hermitian");
  Spectrum sp = eigh(Y);
  const double lmax = sp.eigenvalues.size() ? sp.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-10 * std::max(1.0, lmax);
  for (long i = 0; i < sp.eigenvalues.size(); ++i) {
    if (sp.eigenvalues[i] < -tol)
      throw std::domain_error(std::string(who) + ": input not PSD within tolerance (min eig " +
                              std::to_string(sp.eigenvalues.minCoeff()) + ")");
    if (sp.eigenvalues[i] < 0.0) sp.eigenvalues[i] = 0.0;
  }
  return sp;
}

}  // namespace detail

inline bool is_psd(const Matrix& Y, double tol_scale = 1e-10) {
  if (!is_hermitian(Y, 1e-9)) return false;
  Spectrum sp = eigh(Y);
  const double lmax = sp.eigenvalues.size() ? sp.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return sp.eigenvalues.minCoeff() >= -tol_scale * std::max(1.0, lmax);
}

inline double psi(const BipartiteOp& Y, const NormOrder& ord) {
  if (!std::isfinite(ord.p) || !std::isfinite(ord.q))
    throw std::invalid_argument("psi: requires finite p, q");
  Spectrum sp = detail::psd_spectrum(Y.mat, "psi");
  RealVector lam = sp.eigenvalues;
  for (long i = 0; i < lam.size(); ++i) lam[i] = std::pow(lam[i], ord.p);
  Matrix Yp = sp.eigenvectors * lam.asDiagonal() * sp.eigenvectors.adjoint();
  Matrix M = partial_trace_inside(BipartiteOp(Y.n, Y.m, herm(Yp)));
  Spectrum ms = eigh(M);
  double F = 0.0;
  for (long i = 0; i < ms.eigenvalues.size(); ++i)
    F += std::pow(std::max(ms.eigenvalues[i], 0.0), ord.q / ord.p);
  return std::pow(F, 1.0 / ord.q);
}

// Gradient of Y -> psi(Y, ord) on the support of Y, assembled by the chain
// rule: with M = Tr_2 Y^p and F = Tr M^{q/p},
//   grad = (1/p) F^{1/q-1} D[Y -> Y^p]^*( M^{q/p-1} (x) I_m ).
inline Matrix psi_gradient(const BipartiteOp& Y, const NormOrder& ord) {
  if (!std::isfinite(ord.p) || !std::isfinite(ord.q))
    throw std::invalid_argument("psi_gradient: requires finite p, q");
  const double p = ord.p, q = ord.q;
  Spectrum sp = detail::psd_spectrum(Y.mat, "psi_gradient");
  RealVector lam = sp.eigenvalues;
  for (long i = 0; i < lam.size(); ++i) lam[i] = std::pow(lam[i], p);
  Matrix Yp = herm(sp.eigenvectors * lam.asDiagonal() * sp.eigenvectors.adjoint());
  Matrix M = herm(partial_trace_inside(BipartiteOp(Y.n, Y.m, Yp)));

  Spectrum ms = eigh(M);
  const double mclip = detail::power_clip(ms.eigenvalues);
  double F = 0.0;
  RealVector epow(ms.eigenvalues.size());
  for (long i = 0; i < ms.eigenvalues.size(); ++i) {
    const double mu = ms.eigenvalues[i];
    if (mu > mclip) {
      F += std::pow(mu, q / p);
      epow[i] = std::pow(mu, q / p - 1.0);
    } else {
      epow[i] = 0.0;
    }
  }
  if (F <= 0.0) return Matrix::Zero(Y.dim(), Y.dim());
  Matrix E = herm(ms.eigenvectors * epow.asDiagonal() * ms.eigenvectors.adjoint());
  Matrix lifted = lift_outside(E, Y.m);
  Matrix dk = frechet_power(Y.mat, p, lifted);
  return (1.0 / p) * std::pow(F, 1.0 / q - 1.0) * dk;
}

namespace detail {

struct PgdResult {
  double value = 0.0;
  Matrix argmin;
  int iterations = 0;
  bool converged = false;
};

// Projected gradient descent with Armijo backtracking (halving from 1.0,
// constant 1e-4) over a feasible set given by `project`.  Stops when the
// relative objective change stays below tol for 5 consecutive iterations.
template <class F, class G, class P>
PgdResult projected_descent(Matrix A, F&& objective, G&& gradient, P&& project,
                            double tol, int max_iters) {
  PgdResult res;
  A = project(A);
  double f = objective(A);
  res.value = f;
  res.argmin = A;
  int stall = 0;
  int it = 0;
  for (; it < max_iters && stall < 5; ++it) {
    Matrix g = gradient(A);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      res.converged = true;
      break;
    }
    double t = 1.0;
    bool accepted = false;
    Matrix Anew;
    double fnew = f;
    for (int bt = 0; bt < 45; ++bt, t *= 0.5) {
      Anew = project(A - t * g);
      const double decrease = (g.adjoint() * (A - Anew)).trace().real();
      fnew = objective(Anew);
      if (fnew <= f - 1e-4 * decrease && fnew <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++stall;  // no descent direction left at line-search resolution
      continue;
    }
    const double rel = std::abs(f - fnew) / std::max(1.0, std::abs(f));
    stall = (rel < tol) ? stall + 1 : 0;
    A = Anew;
    f = fnew;
    if (f < res.value) {
      res.value = f;
      res.argmin = A;
    }
  }
  res.iterations = it;
  res.converged = res.converged || stall >= 5;
  return res;
}

}  // namespace detail

// inf { Psi(X + A) + Psi(A) : A >= 0, X + A >= 0 } for Hermitian X, valid in
// the convexity regime 1 <= p <= 2, q >= 1.
inline NormEstimate triple_bar_norm(const BipartiteOp& X, const NormOrder& ord,
                                    const OptimizerConfig& cfg = {}) {
  if (!(ord.p >= 1.0 && ord.p <= 2.0 && std::isfinite(ord.p)))
    throw std::invalid_argument("triple_bar_norm: requires 1 <= p <= 2");
  if (!(ord.q >= 1.0 && std::isfinite(ord.q)))
    throw std::invalid_argument("triple_bar_norm: requires finite q >= 1");
  const Matrix Xh = herm(X.mat);
  NormEstimate est;
  if (max_abs(Xh) == 0.0) {
    est.status = SolveStatus::converged;
    est.witness = Matrix::Zero(X.dim(), X.dim());
    return est;
  }
  const double xnorm = schatten_norm(Xh, kInf);
  Matrix A0 = psd_project(-Xh) + 0.1 * xnorm * Matrix::Identity(X.dim(), X.dim());

  // Dykstra iterates are feasible only within 1e-9; clip them onto the PSD
  // cone before Psi sees them.
  auto objective = [&](const Matrix& A) {
    return psi(BipartiteOp(X.n, X.m, psd_project(Xh + A)), ord) +
           psi(BipartiteOp(X.n, X.m, psd_project(A)), ord);
  };
  auto gradient = [&](const Matrix& A) -> Matrix {
    return psi_gradient(BipartiteOp(X.n, X.m, psd_project(Xh + A)), ord) +
           psi_gradient(BipartiteOp(X.n, X.m, psd_project(A)), ord);
  };
  auto project = [&](const Matrix& A) { return project_feasible_cl(A, Xh); };

  auto res = detail::projected_descent(A0, objective, gradient, project, cfg.tol, cfg.max_iters);
  est.value = res.value;
  est.upper = res.value;
  est.status = res.converged ? SolveStatus::converged : SolveStatus::bracket_only;
  est.lower = res.converged ? std::max(0.0, res.value * (1.0 - 10.0 * cfg.tol)) : 0.0;
  est.iterations = res.iterations;
  est.witness = res.argmin;
  return est;
}

}  // namespace ncnorm
