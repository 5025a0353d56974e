#pragma once

// The divergence family of section 4 and the Appendix B non-monotonicity
// example.  The family Y = sum_a U_a |psi><psi| U_a (x) |a><a| satisfies
// Y^p = Y, so both norms have closed forms in the weight vector lambda:
//
//   Psi_{p,q}(Y)^p  = 2^n ||D||_{q/p}
//   ||Y||_NC^p      = 2^n ||D||_{r'}^p        (Hoelder bound, attained)
//
// with D = diag(lambda).  For lambda_j = c/j the ratio grows like a power of
// log n, witnessing the inequivalence of the two norms.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ncnorm/linalg.hpp"
#include "ncnorm/matrix.hpp"
#include "ncnorm/nc.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"

namespace ncnorm {

struct CounterexampleSpec {
  int n = 1;
  RealVector lambda;

  CounterexampleSpec(int n_, RealVector lambda_) : n(n_), lambda(std::move(lambda_)) {
    if (n < 1 || lambda.size() != n)
      throw std::invalid_argument("CounterexampleSpec: lambda must have length n >= 1");
    if (lambda.minCoeff() < 0.0)
      throw std::invalid_argument("CounterexampleSpec: lambda must be nonnegative");
    if (std::abs(lambda.sum() - 1.0) > 1e-12)
      throw std::invalid_argument("CounterexampleSpec: lambda must sum to 1");
  }
};

// All 2^n diagonal sign matrices; U_1 = I corresponds to a = 0.
inline std::vector<Matrix> sign_unitaries(int n) {
  if (n < 1 || n > 12) throw std::invalid_argument("sign_unitaries: need 1 <= n <= 12");
  const int count = 1 << n;
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(count));
  for (int a = 0; a < count; ++a) {
    Matrix U = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) U(j, j) = ((a >> j) & 1) ? -1.0 : 1.0;
    out.push_back(std::move(U));
  }
  return out;
}

// Y = sum_a Y_a (x) |a><a| with Y_a = U_a |psi><psi| U_a, psi_j = sqrt(lambda_j);
// block-diagonal over the inside index a, m = 2^n.
inline BipartiteOp build_family(const CounterexampleSpec& spec) {
  if (spec.n > 5) throw std::invalid_argument("build_family: n > 5 would materialize dim > 160");
  const int n = spec.n;
  const int m = 1 << n;
  RealVector psi_vec(n);
  for (int j = 0; j < n; ++j) psi_vec[j] = std::sqrt(spec.lambda[j]);
  Matrix Y = Matrix::Zero(static_cast<long>(n) * m, static_cast<long>(n) * m);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double si = ((a >> i) & 1) ? -1.0 : 1.0;
        const double sk = ((a >> k) & 1) ? -1.0 : 1.0;
        Y(static_cast<long>(i) * m + a, static_cast<long>(k) * m + a) =
            si * psi_vec[i] * sk * psi_vec[k];
      }
  return BipartiteOp(n, m, Y);
}

namespace detail {

inline double vec_norm(const RealVector& v, double t) {
  if (std::isinf(t)) return v.maxCoeff();
  double s = 0.0;
  for (long i = 0; i < v.size(); ++i) s += std::pow(v[i], t);
  return std::pow(s, 1.0 / t);
}

inline void check_family_regime(const NormOrder& ord) {
  if (!(ord.p < ord.q)) throw std::invalid_argument("family closed forms require p < q");
  if (!(ord.p >= 1.0 && ord.p <= 2.0))
    throw std::invalid_argument("family closed forms require 1 <= p <= 2");
}

}  // namespace detail

// Psi_{p,q}(Y) = (2^n ||D||_{q/p})^{1/p} without materializing Y.
inline double psi_closed(const CounterexampleSpec& spec, const NormOrder& ord) {
  detail::check_family_regime(ord);
  const double inner = detail::vec_norm(spec.lambda, ord.q / ord.p);
  return std::pow(std::pow(2.0, spec.n) * inner, 1.0 / ord.p);
}

// ||Y||_NC = 2^{n/p} ||D||_{r'}; the Hoelder bound is attained at the
// maximizer p_j proportional to lambda_j^{r'}.
inline double nc_closed(const CounterexampleSpec& spec, const NormOrder& ord) {
  detail::check_family_regime(ord);
  return std::pow(2.0, spec.n / ord.p) * detail::vec_norm(spec.lambda, ord.r_dual);
}

// lambda_j = c/j with c = 1/H_n (exact harmonic normalization; c <= 1/ln n
// holds but is only an upper bound).
inline CounterexampleSpec harmonic_lambda(int n) {
  if (n < 1) throw std::invalid_argument("harmonic_lambda: need n >= 1");
  double hsum = 0.0;
  for (int j = n; j >= 1; --j) hsum += 1.0 / j;
  RealVector lambda(n);
  for (int j = 1; j <= n; ++j) lambda[j - 1] = 1.0 / (hsum * j);
  return CounterexampleSpec(n, lambda);
}

// h(t) = zeta(t)^{1/t} by partial summation; the integral tail
// K^{1-t}/(t-1) is folded in with Euler-Maclaurin corrections, giving
// errors far below 1e-10 at terms = 10^6.
inline double h_function(double t, long long terms = 1000000) {
  if (!(t > 1.0)) throw std::domain_error("h_function: series diverges for t <= 1");
  if (terms < 1) throw std::invalid_argument("h_function: need terms >= 1");
  double s = 0.0;
  for (long long k = terms; k >= 1; --k) s += std::pow(static_cast<double>(k), -t);
  const double K = static_cast<double>(terms);
  s += std::pow(K, 1.0 - t) / (t - 1.0) - 0.5 * std::pow(K, -t) +
       (t / 12.0) * std::pow(K, -t - 1.0);
  return std::pow(s, 1.0 / t);
}

struct DivergenceRow {
  int n = 0;
  double psi = 0.0;
  double nc = 0.0;
  double ratio = 0.0;
  double paper_bound = 0.0;
};

// Tabulates the closed forms on harmonic_lambda(n) together with the analytic
// lower bound (ln n)^{p-1}/h(r')^p on ratio^p, asserting the bound row-wise.
inline std::vector<DivergenceRow> divergence_table(const NormOrder& ord, int n_min, int n_max) {
  detail::check_family_regime(ord);
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("divergence_table: need 1 <= n_min <= n_max");
  const double h = h_function(ord.r_dual);
  auto rows = detail::indexed_map(n_max - n_min + 1, [&](int idx) {
    DivergenceRow row;
    row.n = n_min + idx;
    const CounterexampleSpec spec = harmonic_lambda(row.n);
    row.psi = psi_closed(spec, ord);
    row.nc = nc_closed(spec, ord);
    row.ratio = row.psi / row.nc;
    row.paper_bound =
        std::pow(std::log(static_cast<double>(row.n)), ord.p - 1.0) / std::pow(h, ord.p);
    if (std::pow(row.ratio, ord.p) < row.paper_bound * (1.0 - 1e-12) - 1e-15)
      throw std::runtime_error("divergence_table: ratio fell below the logarithmic bound");
    return row;
  });
  return rows;
}

// Appendix B pair, as printed: W is the rank-one Gram matrix of (w, 1) with
// w = 3 - sqrt(10), Y is diag(e1 e1^T, (1/2)[[1,1],[1,1]]); both PSD in
// M_2 (x) M_2.
inline std::pair<Matrix, Matrix> nonmono_example() {
  const double w = 3.0 - std::sqrt(10.0);
  Matrix W = Matrix::Zero(4, 4);
  W(0, 0) = w * w;
  W(0, 1) = W(1, 0) = w;
  W(1, 1) = 1.0;
  Matrix Y = Matrix::Zero(4, 4);
  Y(0, 0) = 1.0;
  Y(2, 2) = Y(2, 3) = Y(3, 2) = Y(3, 3) = 0.5;
  return {W, Y};
}

// The printed Appendix B matrices display their blocks over the inside
// factor; conjugating by the (outside, inside) index swap moves them into
// the layout used everywhere else in this library.
inline std::pair<Matrix, Matrix> nonmono_example_layout() {
  auto [W, Y] = nonmono_example();
  const int perm[4] = {0, 2, 1, 3};
  Matrix Wp(4, 4), Yp(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      Wp(i, k) = W(perm[i], perm[k]);
      Yp(i, k) = Y(perm[i], perm[k]);
    }
  return {Wp, Yp};
}

struct NonmonoPoint {
  double p = 0.0;
  double q = 0.0;
  double deriv = 0.0;          // inside-blocks reading of the printed matrices
  double deriv_printed = 0.0;  // entries taken verbatim as M_2 (x) M_2
  double deriv_m4 = 0.0;       // alternative M_4 (x) M_1 ordering
};

// One-sided derivative of g(t) = Psi(Y + tW) at 0+ over a (p, q) grid,
// via the PSD-safe difference (g(2h) - g(0))/(2h).  The printed Appendix B
// matrices display their blocks over the inside factor; `deriv` conjugates
// them into the (outside, inside) index layout used here, and the two
// alternative readings are reported alongside.  Returns the grid points
// where `deriv` is negative.
inline std::vector<NonmonoPoint> nonmono_scan(const std::vector<double>& p_grid,
                                              const std::vector<double>& q_grid,
                                              double t_step = 1e-4) {
  if (!(t_step > 0.0)) throw std::invalid_argument("nonmono_scan: need t_step > 0");
  auto [W, Y] = nonmono_example();
  auto [Wp, Yp] = nonmono_example_layout();
  auto deriv = [&](const Matrix& Ym, const Matrix& Wm, int n, int m, const NormOrder& ord) {
    const double g0 = psi(BipartiteOp(n, m, Ym), ord);
    const double g2 = psi(BipartiteOp(n, m, Ym + 2.0 * t_step * Wm), ord);
    return (g2 - g0) / (2.0 * t_step);
  };
  std::vector<NonmonoPoint> found;
  for (double p : p_grid) {
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("nonmono_scan: p grid in [1, 2]");
    for (double q : q_grid) {
      if (q < p) continue;
      const NormOrder ord = make_order(p, q);
      NonmonoPoint pt;
      pt.p = p;
      pt.q = q;
      pt.deriv = deriv(Yp, Wp, 2, 2, ord);
      pt.deriv_printed = deriv(Y, W, 2, 2, ord);
      pt.deriv_m4 = deriv(Y, W, 4, 1, ord);
      if (pt.deriv < 0.0) found.push_back(pt);
    }
  }
  return found;
}

}  // namespace ncnorm
