#pragma once

// The Pisier-type NC norm.
//
//   p <= q :  ||Y||_NC = sup_{A,B} ||(A (x) I_m) Y (B (x) I_m)||_p
//                                   / (||A||_{2r} ||B||_{2r})
//   q <= p :  ||Y||_NC = inf over decompositions
//                        Y = sum_i (A_i (x) I_m) Z_i (B_i (x) I_m)
//                        of sum_i ||A_i||_{2r} ||B_i||_{2r} ||Z_i||_p
//
// with 1/r = |1/p - 1/q|.  For PSD Y and p <= q the supremum reduces to a
// concave maximization over density matrices C of
// ||(C^{1/2r} (x) I_m) Y (C^{1/2r} (x) I_m)||_p, solved exactly by projected
// gradient ascent.  For q <= p only a certified bracket is computed: upper
// bounds from single-term decompositions, lower bounds from Hoelder duality
// against the computable (p', q') regime.

#include <algorithm>
#include <cstdlib>
#include <future>
#include <optional>
#include <utility>
#include <vector>

#include "ncnorm/linalg.hpp"
#include "ncnorm/matrix.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"
#include "ncnorm/random.hpp"

namespace ncnorm {

namespace detail {

inline int thread_budget() {
  const char* s = std::getenv("NCNORM_THREADS");
  if (!s) return 1;
  const int t = std::atoi(s);
  return t < 1 ? 1 : t;
}

// Deterministic parallel map: results are collected by index and reduced by
// the caller in index order, so the thread budget never changes values.
template <class Fn>
auto indexed_map(int count, Fn&& fn) {
  using R = decltype(fn(0));
  std::vector<R> out(static_cast<size_t>(count));
  const int budget = thread_budget();
  if (budget <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = fn(i);
    return out;
  }
  int next = 0;
  while (next < count) {
    const int batch = std::min(budget, count - next);
    std::vector<std::future<R>> futs;
    futs.reserve(static_cast<size_t>(batch));
    for (int b = 0; b < batch; ++b)
      futs.push_back(std::async(std::launch::async, [&fn, i = next + b] { return fn(i); }));
    for (int b = 0; b < batch; ++b) out[static_cast<size_t>(next + b)] = futs[static_cast<size_t>(b)].get();
    next += batch;
  }
  return out;
}

}  // namespace detail

// Schatten-p objective of the Remark-2 reduction; for r = infinity (p = q)
// the scaling exponent is zero and the value is ||Y||_p for every C.
inline double nc_objective(const BipartiteOp& Y, const Matrix& C, const NormOrder& ord) {
  if (!(ord.p <= ord.q)) throw std::invalid_argument("nc_objective: requires p <= q");
  if (std::isinf(ord.r)) return schatten_norm(Y.mat, ord.p);
  Matrix S = matrix_power(C, 0.5 * ord.inv_r());
  Matrix L = lift_outside(S, Y.m);
  return schatten_norm(L * Y.mat * L, ord.p);
}

// Gradient in C of the PSD-case objective (equivalently of nc_objective for
// PSD Y, through the cyclic rewrite K = Y^{1/2} (C^{1/r} (x) I) Y^{1/2}):
// grad = (Tr K^p)^{1/p - 1} D[C -> C^{1/r}]( Tr_2( Y^{1/2} K^{p-1} Y^{1/2} ) ).
inline Matrix nc_objective_gradient(const BipartiteOp& Y, const Matrix& C, const NormOrder& ord) {
  if (!(ord.p <= ord.q)) throw std::invalid_argument("nc_objective_gradient: requires p <= q");
  if (!is_psd(Y.mat)) throw std::domain_error("nc_objective_gradient: Y must be PSD");
  if (std::isinf(ord.r)) return Matrix::Zero(C.rows(), C.cols());
  const double p = ord.p;
  const double s = ord.inv_r();
  const Matrix Ysqrt = matrix_power(psd_project(herm(Y.mat)), 0.5);
  const Matrix K = herm(Ysqrt * lift_outside(matrix_power(C, s), Y.m) * Ysqrt);
  Spectrum ks = eigh(K);
  double g = 0.0;
  RealVector kp(ks.eigenvalues.size());
  for (long i = 0; i < ks.eigenvalues.size(); ++i) {
    const double kv = std::max(ks.eigenvalues[i], 0.0);
    g += std::pow(kv, p);
    kp[i] = std::pow(kv, p - 1.0);
  }
  if (g <= 0.0) return Matrix::Zero(C.rows(), C.cols());
  const Matrix Kp1 = herm(ks.eigenvectors * kp.asDiagonal() * ks.eigenvectors.adjoint());
  const Matrix T = herm(partial_trace_inside(BipartiteOp(Y.n, Y.m, herm(Ysqrt * Kp1 * Ysqrt))));
  return std::pow(g, 1.0 / p - 1.0) * frechet_power(C, s, T);
}

// Y = Y1 (x) Y2 detection (up to scalar regrouping).  Returns factors with
// kron(Y1, Y2) equal to Y within 1e-9 relative, or nothing.
inline std::optional<std::pair<Matrix, Matrix>> detect_product(const BipartiteOp& Y) {
  const int n = Y.n, m = Y.m;
  if (n == 1) return std::make_pair(Matrix::Identity(1, 1), Y.mat);
  if (m == 1) return std::make_pair(Y.mat, Matrix::Identity(1, 1));
  double best = 0.0;
  int bi = 0, bk = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double f = Y.mat.block(static_cast<long>(i) * m, static_cast<long>(k) * m, m, m).norm();
      if (f > best) {
        best = f;
        bi = i;
        bk = k;
      }
    }
  if (best == 0.0) return std::make_pair(Matrix::Zero(n, n), Matrix::Zero(m, m));
  Matrix Y2 = Y.mat.block(static_cast<long>(bi) * m, static_cast<long>(bk) * m, m, m) / best;
  Matrix Y1(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      Y1(i, k) = (Y2.adjoint() * Y.mat.block(static_cast<long>(i) * m, static_cast<long>(k) * m, m, m))
                     .trace() /
                 Y2.squaredNorm();
  if (max_abs(kron(Y1, Y2) - Y.mat) > 1e-9 * std::max(1.0, max_abs(Y.mat))) return std::nullopt;
  return std::make_pair(Y1, Y2);
}

// If Y is PSD and a product, rescale the detected factors so both are PSD.
inline std::optional<std::pair<Matrix, Matrix>> detect_psd_product(const BipartiteOp& Y) {
  auto fac = detect_product(Y);
  if (!fac) return std::nullopt;
  auto [Y1, Y2] = *fac;
  if (max_abs(Y1) == 0.0 || max_abs(Y2) == 0.0) return std::nullopt;
  // PSD product factors are Hermitian up to a common phase; absorb it into Y1.
  if (!is_hermitian(Y1, 1e-8)) {
    long ri = 0, ci = 0;
    Y1.cwiseAbs().maxCoeff(&ri, &ci);
    const Complex pivot = Y1(ri, ci);
    const Complex phase = pivot / std::abs(pivot);
    Y1 /= phase;
    Y2 *= phase;
    if (!is_hermitian(Y1, 1e-8) || !is_hermitian(Y2, 1e-8)) return std::nullopt;
  }
  if (Y1.trace().real() < 0.0) {  // PSD (x) PSD vs NSD (x) NSD regrouping
    Y1 = -Y1;
    Y2 = -Y2;
  }
  if (!is_psd(Y1, 1e-8) || !is_psd(Y2, 1e-8)) return std::nullopt;
  return std::make_pair(psd_project(Y1), psd_project(Y2));
}

// Classical mixed norm of the diagonal: ( sum_i ( sum_j |y_ij|^p )^{q/p} )^{1/q}.
inline double nc_norm_diagonal(const BipartiteOp& Y, const NormOrder& ord) {
  if (!is_diagonal(Y.mat, 1e-12))
    throw std::invalid_argument("nc_norm_diagonal: matrix is not diagonal in the product basis");
  const int n = Y.n, m = Y.m;
  double outer = 0.0, outer_max = 0.0;
  for (int i = 0; i < n; ++i) {
    double inner = 0.0, inner_max = 0.0;
    for (int j = 0; j < m; ++j) {
      const double a = std::abs(Y.mat(static_cast<long>(i) * m + j, static_cast<long>(i) * m + j));
      inner_max = std::max(inner_max, a);
      if (std::isfinite(ord.p)) inner += std::pow(a, ord.p);
    }
    const double u = std::isfinite(ord.p) ? std::pow(inner, 1.0 / ord.p) : inner_max;
    outer_max = std::max(outer_max, u);
    if (std::isfinite(ord.q)) outer += std::pow(u, ord.q);
  }
  return std::isfinite(ord.q) ? std::pow(outer, 1.0 / ord.q) : outer_max;
}

// Dual witness for a diagonal matrix: diagonal W with unit (p', q') mixed norm
// and Tr(YW) equal to the (p, q) mixed norm of diag(Y).
inline Matrix diagonal_dual_witness(const BipartiteOp& Y, const NormOrder& ord) {
  const int n = Y.n, m = Y.m;
  const double p = ord.p, q = ord.q;
  Matrix W = Matrix::Zero(Y.dim(), Y.dim());
  if (!std::isfinite(p) || !std::isfinite(q)) return W;
  std::vector<double> u(static_cast<size_t>(n), 0.0);
  double N = 0.0;
  for (int i = 0; i < n; ++i) {
    double inner = 0.0;
    for (int j = 0; j < m; ++j)
      inner += std::pow(std::abs(Y.mat(static_cast<long>(i) * m + j, static_cast<long>(i) * m + j)), p);
    u[static_cast<size_t>(i)] = std::pow(inner, 1.0 / p);
    N += std::pow(u[static_cast<size_t>(i)], q);
  }
  N = std::pow(N, 1.0 / q);
  if (N <= 0.0) return W;
  for (int i = 0; i < n; ++i) {
    const double ui = u[static_cast<size_t>(i)];
    if (ui <= 0.0) continue;
    for (int j = 0; j < m; ++j) {
      const long idx = static_cast<long>(i) * m + j;
      const Complex y = Y.mat(idx, idx);
      const double a = std::abs(y);
      if (a <= 0.0) continue;
      const Complex phase = std::conj(y) / a;
      W(idx, idx) = phase * std::pow(a, p - 1.0) * std::pow(ui, q - p) * std::pow(N, 1.0 - q);
    }
  }
  return W;
}

// Schatten duality witness: W with ||W||_{t'} = 1 and Re Tr(M W) = ||M||_t.
inline Matrix schatten_dual_witness(const Matrix& M, double t) {
  Svd d = svd(M);
  const double nrm = schatten_norm(M, t);
  if (nrm <= 0.0) return Matrix::Zero(M.rows(), M.cols());
  if (std::isinf(t)) return d.V.col(0) * d.U.col(0).adjoint();
  RealVector s(d.singular_values.size());
  for (long i = 0; i < s.size(); ++i)
    s[i] = std::pow(d.singular_values[i] / nrm, t - 1.0);
  return d.V * s.asDiagonal() * d.U.adjoint();
}

namespace detail {

struct AscentOut {
  double value = 0.0;
  Matrix C;
  int iterations = 0;
  bool converged = false;
};

// Concave maximization of C -> (Tr (Y^{1/2} (C^{1/r} (x) I_m) Y^{1/2})^p)^{1/p}
// over density matrices by projected gradient ascent with Armijo backtracking.
inline AscentOut density_ascent(const BipartiteOp& Y, const Matrix& Ysqrt, const NormOrder& ord,
                                Matrix C, double tol, int max_iters) {
  const double p = ord.p;
  const double s = ord.inv_r();  // 1/r
  const int m = Y.m;

  auto kmat = [&](const Matrix& Cd) {
    return herm(Ysqrt * lift_outside(matrix_power(Cd, s), m) * Ysqrt);
  };
  auto fval = [&](const Matrix& Cd) {
    Spectrum ks = eigh(kmat(Cd));
    double g = 0.0;
    for (long i = 0; i < ks.eigenvalues.size(); ++i)
      g += std::pow(std::max(ks.eigenvalues[i], 0.0), p);
    return std::pow(g, 1.0 / p);
  };

  AscentOut out;
  C = density_project(C);
  double f = fval(C);
  out.value = f;
  out.C = C;
  int stall = 0;
  int it = 0;
  for (; it < max_iters && stall < 5; ++it) {
    Spectrum ks = eigh(kmat(C));
    double g = 0.0;
    RealVector kp(ks.eigenvalues.size());
    for (long i = 0; i < ks.eigenvalues.size(); ++i) {
      const double kv = std::max(ks.eigenvalues[i], 0.0);
      g += std::pow(kv, p);
      kp[i] = std::pow(kv, p - 1.0);
    }
    if (g <= 0.0) break;
    Matrix Kp1 = herm(ks.eigenvectors * kp.asDiagonal() * ks.eigenvectors.adjoint());
    Matrix T = herm(partial_trace_inside(BipartiteOp(Y.n, m, herm(Ysqrt * Kp1 * Ysqrt))));
    Matrix G = std::pow(g, 1.0 / p - 1.0) * frechet_power(C, s, T);

    double t = 1.0;
    bool accepted = false;
    Matrix Cnew;
    double fnew = f;
    for (int bt = 0; bt < 45; ++bt, t *= 0.5) {
      Cnew = density_project(C + t * G);
      const double increase = (G.adjoint() * (Cnew - C)).trace().real();
      fnew = fval(Cnew);
      if (fnew >= f + 1e-4 * increase && fnew >= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++stall;
      continue;
    }
    const double rel = std::abs(fnew - f) / std::max(1.0, std::abs(f));
    stall = (rel < tol) ? stall + 1 : 0;
    C = Cnew;
    f = fnew;
    if (f > out.value) {
      out.value = f;
      out.C = C;
    }
  }
  out.iterations = it;
  out.converged = stall >= 5;
  return out;
}

inline Matrix normalized_density(const Matrix& P) {
  const double tr = P.trace().real();
  if (!(tr > 0.0)) return Matrix();
  return density_project(P / tr);
}

}  // namespace detail

// Exact solver for PSD Y in the p <= q regime (concave problem over density
// matrices; the converged value is the norm up to cfg.tol).
inline NormEstimate nc_norm_psd(const BipartiteOp& Y, const NormOrder& ord,
                                const OptimizerConfig& cfg = {}) {
  if (!(ord.p <= ord.q)) throw std::invalid_argument("nc_norm_psd: requires p <= q");
  if (!is_psd(Y.mat)) throw std::domain_error("nc_norm_psd: input must be PSD");
  NormEstimate est;
  if (std::isinf(ord.r)) {
    est.value = est.lower = est.upper = schatten_norm(Y.mat, ord.p);
    est.status = SolveStatus::closed_form;
    return est;
  }
  const int n = Y.n;
  const Matrix Ysym = psd_project(herm(Y.mat));
  const Matrix Ysqrt = matrix_power(Ysym, 0.5);
  const BipartiteOp Yop(Y.n, Y.m, Ysym);

  std::vector<Matrix> inits;
  inits.push_back(Matrix::Identity(n, n) / static_cast<double>(n));
  {
    Matrix M2 = herm(partial_trace_inside(BipartiteOp(Y.n, Y.m, matrix_power(Ysym, ord.p))));
    for (double e : {ord.q / ord.p, ord.r_dual}) {
      Matrix C = detail::normalized_density(matrix_power_support(M2, e));
      if (C.size()) inits.push_back(C);
    }
  }
  if (auto fac = detect_psd_product(Yop)) {
    Matrix C = detail::normalized_density(matrix_power_support(fac->first, ord.q));
    if (C.size()) inits.push_back(C);
  }

  auto runs = detail::indexed_map(static_cast<int>(inits.size()), [&](int i) {
    return detail::density_ascent(Yop, Ysqrt, ord, inits[static_cast<size_t>(i)], cfg.tol,
                                  cfg.max_iters);
  });
  double bestv = -1.0;
  Matrix bestC;
  bool any_converged = false;
  for (const auto& r : runs) {
    est.iterations += r.iterations;
    any_converged = any_converged || r.converged;
    if (r.value > bestv) {
      bestv = r.value;
      bestC = r.C;
    }
  }
  est.value = bestv;
  est.lower = bestv;
  est.witness = bestC;
  if (any_converged) {
    est.status = SolveStatus::converged;
    est.upper = bestv * (1.0 + 10.0 * cfg.tol);
  } else {
    est.status = SolveStatus::bracket_only;
    est.upper = kInf;
  }
  return est;
}

namespace detail {

// Gradient pieces for the general p <= q ascent over PSD pairs (A, B):
// the Schatten subdifferential of M = (A (x) I) Y (B (x) I) pulled back
// through the lifts by partial traces.
struct PairAscentOut {
  double value = 0.0;
  Matrix A, B;
  int iterations = 0;
};

inline PairAscentOut pair_ascent(const BipartiteOp& Y, const NormOrder& ord, Matrix A, Matrix B,
                                 double tol, int max_iters) {
  const double p = ord.p;
  const double two_r = std::isinf(ord.r) ? kInf : 2.0 * ord.r;
  const int m = Y.m;
  auto normalize = [&](Matrix M) {
    M = psd_project(M);
    const double nn = schatten_norm(M, two_r);
    if (!(nn > 0.0)) return Matrix(Matrix::Identity(M.rows(), M.cols()) /
                                   schatten_norm(Matrix::Identity(M.rows(), M.cols()), two_r));
    return Matrix(M / nn);
  };
  auto fval = [&](const Matrix& Aa, const Matrix& Bb) {
    return schatten_norm(lift_outside(Aa, m) * Y.mat * lift_outside(Bb, m), p);
  };
  A = normalize(A);
  B = normalize(B);
  PairAscentOut out;
  double f = fval(A, B);
  out.value = f;
  out.A = A;
  out.B = B;
  int stall = 0;
  int it = 0;
  for (; it < max_iters && stall < 5; ++it) {
    const Matrix LA = lift_outside(A, m);
    const Matrix LB = lift_outside(B, m);
    const Matrix M = LA * Y.mat * LB;
    Svd d = svd(M);
    const double nrm = schatten_norm(M, p);
    if (!(nrm > 0.0)) break;
    RealVector s(d.singular_values.size());
    for (long i = 0; i < s.size(); ++i) s[i] = std::pow(d.singular_values[i] / nrm, p - 1.0);
    const Matrix GM = d.U * s.asDiagonal() * d.V.adjoint();
    const Matrix N = Y.mat * LB;
    const Matrix P = LA * Y.mat;
    Matrix gA = herm(partial_trace_inside(BipartiteOp(Y.n, m, N * GM.adjoint())));
    Matrix gB = herm(partial_trace_inside(BipartiteOp(Y.n, m, GM.adjoint() * P)));

    double t = 1.0;
    bool accepted = false;
    Matrix An, Bn;
    double fnew = f;
    for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
      An = normalize(A + t * gA);
      Bn = normalize(B + t * gB);
      fnew = fval(An, Bn);
      if (fnew > f * (1.0 + 1e-12)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++stall;
      continue;
    }
    const double rel = std::abs(fnew - f) / std::max(1.0, std::abs(f));
    stall = (rel < tol) ? stall + 1 : 0;
    A = An;
    B = Bn;
    f = fnew;
    if (f > out.value) {
      out.value = f;
      out.A = A;
      out.B = B;
    }
  }
  out.iterations = it;
  return out;
}

}  // namespace detail

// Multi-start lower bound for general Y in the p <= q regime.  The PSD-pair
// restriction is lossless (polar decomposition absorbs the unitary parts into
// the Schatten norm), but the objective is not proven concave for general Y,
// so the result is reported as a bracket lower end.
inline NormEstimate nc_norm_general_lower(const BipartiteOp& Y, const NormOrder& ord,
                                          const OptimizerConfig& cfg = {}) {
  if (!(ord.p <= ord.q)) throw std::invalid_argument("nc_norm_general_lower: requires p <= q");
  NormEstimate est;
  est.status = SolveStatus::bracket_only;
  est.upper = kInf;
  if (std::isinf(ord.r)) {
    est.value = est.lower = schatten_norm(Y.mat, ord.p);
    return est;
  }
  const int n = Y.n;
  const double s = (ord.q - ord.p) / (2.0 * ord.p);

  std::vector<std::pair<Matrix, Matrix>> inits;
  const Matrix In = Matrix::Identity(n, n);
  inits.emplace_back(In, In);
  if (auto fac = detect_product(Y)) {
    const Matrix& Y1 = fac->first;
    if (max_abs(Y1) > 0.0) {
      Matrix left = matrix_power_support(matrix_power(herm(Y1 * Y1.adjoint()), 0.5), s);
      Matrix right = matrix_power_support(matrix_power(herm(Y1.adjoint() * Y1), 0.5), s);
      inits.emplace_back(left, right);
    }
  }
  {
    Matrix absY = matrix_power(herm(Y.mat.adjoint() * Y.mat), 0.5);
    Matrix marg = herm(partial_trace_inside(BipartiteOp(Y.n, Y.m, absY)));
    Matrix M = matrix_power_support(psd_project(marg), s);
    if (max_abs(M) > 0.0) inits.emplace_back(M, M);
  }
  CounterRng rng(cfg.seed);
  while (static_cast<int>(inits.size()) < std::max(cfg.restarts, 1)) {
    CounterRng sub = rng.derive(inits.size());
    inits.emplace_back(random_psd(n, sub), random_psd(n, sub));
  }

  auto runs = detail::indexed_map(static_cast<int>(inits.size()), [&](int i) {
    return detail::pair_ascent(Y, ord, inits[static_cast<size_t>(i)].first,
                               inits[static_cast<size_t>(i)].second, cfg.tol,
                               std::min(cfg.max_iters, 1200));
  });
  detail::PairAscentOut best;
  for (const auto& r : runs) {
    est.iterations += r.iterations;
    if (r.value > best.value || best.A.size() == 0) best = r;
  }
  est.value = est.lower = best.value;
  est.witness = best.A;

  if (is_psd(Y.mat)) {
    NormEstimate psd = nc_norm_psd(Y, ord, cfg);
    if (psd.lower > est.lower) {
      est.value = est.lower = psd.lower;
      est.witness = psd.witness;
    }
  }
  return est;
}

// Upper bound for q <= p from the single-term decomposition
// Y = (C^{1/2r} (x) I) Z (C^{1/2r} (x) I): minimize
// ||(C^{-1/2r} (x) I) Y (C^{-1/2r} (x) I)||_p over strictly positive
// unit-trace C parameterized as C = exp(G)/Tr exp(G).
inline NormEstimate nc_norm_upper_qlep(const BipartiteOp& Y, const NormOrder& ord,
                                       const OptimizerConfig& cfg = {}) {
  if (!(ord.q <= ord.p)) throw std::invalid_argument("nc_norm_upper_qlep: requires q <= p");
  NormEstimate est;
  if (std::isinf(ord.r)) {
    est.value = est.lower = est.upper = schatten_norm(Y.mat, ord.p);
    est.status = SolveStatus::closed_form;
    est.witness = Matrix::Identity(Y.n, Y.n) / static_cast<double>(Y.n);
    return est;
  }
  const int n = Y.n, m = Y.m;
  const double p = ord.p;
  const double se = -0.5 * ord.inv_r();  // exponent of C in the scaling

  auto cma = [&](const Matrix& G) {
    Matrix E = matrix_exp(G);
    Matrix C = E / E.trace().real();
    // keep strictly inside the cone: C^{se} with se < 0 rejects eigenvalues
    // under the support clip, and a descent step can underflow exp(G)
    const double ridge = 1e-10;
    return Matrix((C + (ridge / n) * Matrix::Identity(n, n)) / (1.0 + ridge));
  };
  auto fofC = [&](const Matrix& C) {
    Matrix S = matrix_power(C, se);
    Matrix L = lift_outside(S, m);
    return schatten_norm(L * Y.mat * L, p);
  };

  std::vector<Matrix> ginits;
  ginits.push_back(Matrix::Zero(n, n));
  auto push_logged = [&](Matrix C) {
    const double tr = C.trace().real();
    if (!(tr > 0.0)) return;
    C = psd_project(C / tr);
    C += 1e-10 * Matrix::Identity(n, n);
    C /= C.trace().real();
    ginits.push_back(matrix_log(C));
  };
  {
    Matrix absY = is_psd(Y.mat) ? psd_project(herm(Y.mat))
                                : matrix_power(herm(Y.mat.adjoint() * Y.mat), 0.5);
    Matrix M2 = herm(partial_trace_inside(BipartiteOp(n, m, matrix_power(absY, p))));
    push_logged(matrix_power_support(M2, ord.q / ord.p));
  }
  if (auto fac = detect_psd_product(BipartiteOp(n, m, Y.mat)))
    push_logged(matrix_power_support(fac->first, ord.q));

  double bestv = kInf;
  Matrix bestC = Matrix::Identity(n, n) / static_cast<double>(n);
  int iters = 0;
  for (const Matrix& G0 : ginits) {
    Matrix G = G0;
    Matrix C = cma(G);
    double f = fofC(C);
    if (f < bestv) {
      bestv = f;
      bestC = C;
    }
    int stall = 0;
    for (int it = 0; it < std::min(cfg.max_iters, 1500) && stall < 5; ++it) {
      ++iters;
      Matrix S = matrix_power(C, se);
      Matrix L = lift_outside(S, m);
      Matrix M = L * Y.mat * L;
      Svd d = svd(M);
      const double nrm = schatten_norm(M, p);
      if (!(nrm > 0.0)) break;
      RealVector sv(d.singular_values.size());
      for (long i = 0; i < sv.size(); ++i)
        sv[i] = std::pow(d.singular_values[i] / nrm, p - 1.0);
      Matrix GM = d.U * sv.asDiagonal() * d.V.adjoint();
      Matrix H1 = herm(partial_trace_inside(BipartiteOp(n, m, Y.mat * L * GM.adjoint())));
      Matrix H2 = herm(partial_trace_inside(BipartiteOp(n, m, GM.adjoint() * L * Y.mat)));
      Matrix gS = H1 + H2;
      Matrix gC = frechet_power(C, se, gS);
      const double shift = (gC * C).trace().real();
      Matrix gG = frechet_exp(G, gC - shift * Matrix::Identity(n, n)) /
                  matrix_exp(G).trace().real();

      double t = 1.0;
      bool accepted = false;
      Matrix Gn, Cn;
      double fnew = f;
      for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
        Gn = G - t * gG;
        Cn = cma(Gn);
        fnew = fofC(Cn);
        if (fnew < f) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        ++stall;
        continue;
      }
      const double rel = std::abs(fnew - f) / std::max(1.0, std::abs(f));
      stall = (rel < cfg.tol) ? stall + 1 : 0;
      G = Gn;
      C = Cn;
      f = fnew;
      if (f < bestv) {
        bestv = f;
        bestC = C;
      }
    }
  }
  est.value = est.upper = bestv;
  est.lower = 0.0;
  est.status = SolveStatus::bracket_only;
  est.iterations = iters;
  est.witness = bestC;
  return est;
}

// Certified lower bound for q <= p from Hoelder duality: |Tr(YW)| divided by
// an upper estimate of ||W||_{NC:p',q'} (computable since p' <= q').  The
// candidates are the diagonal dual witness, product witnesses (exact), the
// identity, and Schatten witnesses with PSD-split denominators.
inline NormEstimate nc_norm_lower_qlep(const BipartiteOp& Y, const NormOrder& ord,
                                       const OptimizerConfig& cfg = {}) {
  if (!(ord.q <= ord.p)) throw std::invalid_argument("nc_norm_lower_qlep: requires q <= p");
  NormOrder dual = dual_order(ord);
  NormEstimate est;
  est.status = SolveStatus::bracket_only;
  est.upper = kInf;
  const int n = Y.n, m = Y.m;

  double best = 0.0;
  Matrix bestW = Matrix::Zero(Y.dim(), Y.dim());
  auto offer = [&](double v, const Matrix& W) {
    if (v > best) {
      best = v;
      bestW = W;
    }
  };

  {  // diagonal dual witness (sees diag(Y); exact when Y is diagonal)
    Matrix D = Y.mat.diagonal().asDiagonal();
    Matrix W = diagonal_dual_witness(BipartiteOp(n, m, D), ord);
    if (max_abs(W) > 0.0) offer(std::abs((Y.mat * W).trace()), W);
  }
  {  // identity witness
    const double denom = std::pow(static_cast<double>(n), 1.0 / dual.q) *
                         std::pow(static_cast<double>(m), 1.0 / dual.p);
    Matrix W = Matrix::Identity(Y.dim(), Y.dim());
    offer(std::abs(Y.mat.trace()) / denom, W);
  }
  if (auto fac = detect_product(Y)) {  // product witness: exact by the product form
    Matrix W1 = schatten_dual_witness(fac->first, ord.q);
    Matrix W2 = schatten_dual_witness(fac->second, ord.p);
    if (max_abs(W1) > 0.0 && max_abs(W2) > 0.0) {
      Matrix W = kron(W1, W2);
      offer(std::abs((Y.mat * W).trace()), W);
    }
  }
  if (is_hermitian(Y.mat, 1e-9) && std::isfinite(ord.p)) {
    // Schatten witness Y |-> Y^{p-1}-type; denominator bounded by the PSD
    // solver applied to the positive and negative parts separately.
    Spectrum sp = eigh(Y.mat);
    const double nrm = schatten_norm(Y.mat, ord.p);
    if (nrm > 0.0) {
      RealVector wl(sp.eigenvalues.size());
      for (long i = 0; i < wl.size(); ++i) {
        const double l = sp.eigenvalues[i];
        wl[i] = (l >= 0 ? 1.0 : -1.0) * std::pow(std::abs(l) / nrm, ord.p - 1.0);
      }
      Matrix W = herm(sp.eigenvectors * wl.asDiagonal() * sp.eigenvectors.adjoint());
      OptimizerConfig lite = cfg;
      lite.restarts = 1;
      lite.max_iters = std::min(cfg.max_iters, 1500);
      double denom = 0.0;
      bool ok = true;
      for (const Matrix& part : {psd_project(W), psd_project(Matrix(-W))}) {
        if (max_abs(part) <= 0.0) continue;
        NormEstimate de = nc_norm_psd(BipartiteOp(n, m, part), dual, lite);
        if (!std::isfinite(de.upper)) {
          ok = false;
          break;
        }
        denom += de.upper;
      }
      if (ok && denom > 0.0) offer(nrm / denom, W);
    }
  }
  est.value = est.lower = best;
  est.witness = bestW;
  return est;
}

// Dispatcher: closed forms where available, the concave PSD solver for
// p <= q, multi-start lower bounds for general matrices, and the
// upper/lower bracket for q <= p.
inline NormEstimate nc_norm(const BipartiteOp& Y, const NormOrder& ord,
                            const OptimizerConfig& cfg = {}) {
  NormEstimate est;
  if (is_diagonal(Y.mat, 1e-12)) {
    est.value = est.lower = est.upper = nc_norm_diagonal(Y, ord);
    est.status = SolveStatus::closed_form;
    return est;
  }
  if (ord.p == ord.q) {
    est.value = est.lower = est.upper = schatten_norm(Y.mat, ord.p);
    est.status = SolveStatus::closed_form;
    return est;
  }
  if (ord.p < ord.q) {
    if (is_psd(Y.mat)) return nc_norm_psd(Y, ord, cfg);
    return nc_norm_general_lower(Y, ord, cfg);
  }
  NormEstimate up = nc_norm_upper_qlep(Y, ord, cfg);
  NormEstimate lo = nc_norm_lower_qlep(Y, ord, cfg);
  est.lower = std::min(lo.lower, up.upper);
  est.upper = up.upper;
  est.value = 0.5 * (est.lower + est.upper);
  est.iterations = up.iterations + lo.iterations;
  est.witness = up.witness;
  est.status = (est.upper - est.lower <= std::max(10.0 * cfg.tol * est.upper, 1e-12))
                   ? SolveStatus::converged
                   : SolveStatus::bracket_only;
  return est;
}

}  // namespace ncnorm
