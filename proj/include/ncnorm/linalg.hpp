#pragma once

// Dense Hermitian primitives: eigendecomposition, fractional powers, Schatten
// norms, PSD projections, the Dykstra projection onto the Carlen-Lieb feasible
// set, and Daleckii-Krein Frechet derivatives of matrix functions.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ncnorm/matrix.hpp"

namespace ncnorm {

struct Spectrum {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // unitary, columns match eigenvalues
};

inline Spectrum eigh(const Matrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm(H));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  Spectrum sp;
  sp.eigenvalues = es.eigenvalues().reverse();
  sp.eigenvectors = es.eigenvectors().rowwise().reverse();
  return sp;
}

inline double min_eigenvalue(const Matrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm(H), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  return es.eigenvalues().minCoeff();
}

namespace detail {

// Scale-invariant threshold below which eigenvalues count as numerically zero.
inline double power_clip(const RealVector& lam) {
  return 1e-12 * (lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0);
}

inline bool is_integer(double s) {
  return std::isfinite(s) && s == std::nearbyint(s);
}

}  // namespace detail

// U diag(lam^s) U^dag in the eigenbasis of H.  Fractional/negative exponents
// require H PSD up to the clip threshold; small negative eigenvalues are
// clipped to zero.
inline Matrix matrix_power(const Matrix& H, double s) {
  Spectrum sp = eigh(H);
  RealVector lam = sp.eigenvalues;
  const double clip = detail::power_clip(lam);
  const bool frac = !detail::is_integer(s);
  if (frac || s < 0) {
    for (long i = 0; i < lam.size(); ++i) {
      if (lam[i] < -clip)
        throw std::domain_error("matrix_power: negative eigenvalue " +
                                std::to_string(lam[i]) +
                                " with non-integer or negative exponent");
      if (lam[i] < 0) lam[i] = 0.0;
      if (s < 0 && lam[i] <= clip)
        throw std::domain_error("matrix_power: zero eigenvalue with negative exponent");
    }
  }
  RealVector plam(lam.size());
  for (long i = 0; i < lam.size(); ++i) plam[i] = std::pow(lam[i], s);
  return herm(sp.eigenvectors * plam.asDiagonal() * sp.eigenvectors.adjoint());
}

// Like matrix_power but restricted to the support of H: eigenvalues at or
// below the clip threshold map to zero instead of raising on s < 0.  Used by
// gradient assembly where derivatives are taken on the support.
inline Matrix matrix_power_support(const Matrix& H, double s) {
  Spectrum sp = eigh(H);
  RealVector lam = sp.eigenvalues;
  const double clip = detail::power_clip(lam);
  RealVector plam(lam.size());
  for (long i = 0; i < lam.size(); ++i)
    plam[i] = (lam[i] > clip) ? std::pow(lam[i], s) : 0.0;
  return herm(sp.eigenvectors * plam.asDiagonal() * sp.eigenvectors.adjoint());
}

struct Svd {
  RealVector singular_values;  // descending
  Matrix U, V;                 // M = U diag(sigma) V^dag
};

inline Svd svd(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> d(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{d.singularValues(), d.matrixU(), d.matrixV()};
}

inline RealVector singular_values(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> d(M);
  return d.singularValues();
}

// (sum_i sigma_i^p)^(1/p); p = inf returns the largest singular value.
inline double schatten_norm(const Matrix& M, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("schatten_norm: exponent must satisfy p >= 1");
  RealVector sv = singular_values(M);
  if (sv.size() == 0) return 0.0;
  const double smax = sv.maxCoeff();
  if (smax <= 0.0) return 0.0;
  if (std::isinf(p)) return smax;
  double acc = 0.0;
  for (long i = 0; i < sv.size(); ++i) acc += std::pow(sv[i] / smax, p);
  return smax * std::pow(acc, 1.0 / p);
}

// Nearest PSD matrix in Frobenius distance (eigenvalue clipping).
inline Matrix psd_project(const Matrix& H) {
  Spectrum sp = eigh(H);
  RealVector lam = sp.eigenvalues.cwiseMax(0.0);
  return herm(sp.eigenvectors * lam.asDiagonal() * sp.eigenvectors.adjoint());
}

// Dykstra alternating projections onto {A >= 0} intersect {Y + A >= 0}.
// Both constraints hold within 1e-9 in minimum eigenvalue on return.
inline Matrix project_feasible_cl(const Matrix& H, const Matrix& Y, int iters = 200) {
  const double feas_tol = 1e-9;
  Matrix X = herm(H);
  const Matrix Yh = herm(Y);
  if (min_eigenvalue(X) >= -1e-12 && min_eigenvalue(Yh + X) >= -1e-12) return X;
  Matrix P = Matrix::Zero(X.rows(), X.cols());
  Matrix Q = Matrix::Zero(X.rows(), X.cols());
  for (int it = 0; it < iters; ++it) {
    Matrix Z = psd_project(X + P);
    P = X + P - Z;
    Matrix X2 = psd_project(Z + Q + Yh) - Yh;
    Q = Z + Q - X2;
    X = X2;
    if (min_eigenvalue(X) >= -feas_tol && min_eigenvalue(Yh + X) >= -feas_tol)
      return X;
  }
  throw std::runtime_error("project_feasible_cl: infeasible after iteration cap");
}

// Daleckii-Krein derivative of H -> f(H) at Hermitian H in direction Delta.
// In the eigenbasis, entry (i,k) of the transformed direction is multiplied by
// the divided difference (f(l_i)-f(l_k))/(l_i-l_k), switching to fprime at the
// midpoint when |l_i - l_k| < 1e-8 * max(1, |l_i|).
inline Matrix frechet_fun(const Spectrum& sp,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime,
                          const Matrix& Delta) {
  const RealVector& lam = sp.eigenvalues;
  const long d = lam.size();
  Matrix Dt = sp.eigenvectors.adjoint() * herm(Delta) * sp.eigenvectors;
  for (long i = 0; i < d; ++i) {
    for (long k = 0; k < d; ++k) {
      const double li = lam[i], lk = lam[k];
      double kern;
      if (std::abs(li - lk) < 1e-8 * std::max(1.0, std::abs(li)))
        kern = fprime(0.5 * (li + lk));
      else
        kern = (f(li) - f(lk)) / (li - lk);
      Dt(i, k) *= kern;
    }
  }
  return herm(sp.eigenvectors * Dt * sp.eigenvectors.adjoint());
}

// Frechet derivative of H -> H^s for PSD H.  Eigenvalues below the clip
// threshold are treated as exact zeros; divided differences touching only the
// kernel vanish (derivative on the support).
inline Matrix frechet_power(const Matrix& H, double s, const Matrix& Delta) {
  Spectrum sp = eigh(H);
  RealVector lam = sp.eigenvalues;
  const double clip = detail::power_clip(lam);
  // same PSD acceptance as Psi itself: anything Psi evaluates must be
  // differentiable here
  const double lmax = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
  const double psd_tol = 1e-10 * std::max(1.0, lmax);
  for (long i = 0; i < lam.size(); ++i) {
    if (lam[i] < -psd_tol && !detail::is_integer(s))
      throw std::domain_error("frechet_power: input not PSD up to tolerance");
    if (lam[i] < clip) lam[i] = 0.0;
  }
  const long d = lam.size();
  Matrix Dt = sp.eigenvectors.adjoint() * herm(Delta) * sp.eigenvectors;
  for (long i = 0; i < d; ++i) {
    for (long k = 0; k < d; ++k) {
      const double li = lam[i], lk = lam[k];
      double kern;
      if (li == 0.0 && lk == 0.0) {
        kern = 0.0;
      } else if (std::abs(li - lk) < 1e-8 * std::max(1.0, std::abs(li))) {
        kern = s * std::pow(0.5 * (li + lk), s - 1.0);
      } else {
        kern = (std::pow(li, s) - std::pow(lk, s)) / (li - lk);
      }
      Dt(i, k) *= kern;
    }
  }
  return herm(sp.eigenvectors * Dt * sp.eigenvectors.adjoint());
}

inline Matrix frechet_exp(const Matrix& H, const Matrix& Delta) {
  return frechet_fun(eigh(H), [](double x) { return std::exp(x); },
                     [](double x) { return std::exp(x); }, Delta);
}

inline Matrix matrix_exp(const Matrix& H) {
  Spectrum sp = eigh(H);
  RealVector e = sp.eigenvalues.array().exp();
  return herm(sp.eigenvectors * e.asDiagonal() * sp.eigenvectors.adjoint());
}

inline Matrix matrix_log(const Matrix& H) {
  Spectrum sp = eigh(H);
  RealVector lam = sp.eigenvalues;
  for (long i = 0; i < lam.size(); ++i) {
    if (lam[i] <= 0.0)
      throw std::domain_error("matrix_log: input must be positive definite");
    lam[i] = std::log(lam[i]);
  }
  return herm(sp.eigenvectors * lam.asDiagonal() * sp.eigenvectors.adjoint());
}

// Euclidean projection of a real vector onto the probability simplex.
inline RealVector simplex_project(const RealVector& v) {
  const long d = v.size();
  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  long rho = 0;
  for (long i = 0; i < d; ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  RealVector w(d);
  for (long i = 0; i < d; ++i) w[i] = std::max(v[i] - theta, 0.0);
  return w;
}

// Frobenius projection onto the density matrices (unit-trace PSD): project the
// spectrum onto the probability simplex in the current eigenbasis.
inline Matrix density_project(const Matrix& M) {
  Spectrum sp = eigh(M);
  RealVector lam = simplex_project(sp.eigenvalues);
  return herm(sp.eigenvectors * lam.asDiagonal() * sp.eigenvectors.adjoint());
}

}  // namespace ncnorm
