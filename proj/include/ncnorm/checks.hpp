#pragma once

// Property-check suites behind `check --suite <name>`.  Each suite draws
// deterministic instances from a counter RNG, verifies the inequalities and
// identities of the corresponding results, and records violations; a report
// passes iff no violation was recorded.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ncnorm/cl.hpp"
#include "ncnorm/counterexamples.hpp"
#include "ncnorm/linalg.hpp"
#include "ncnorm/nc.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"
#include "ncnorm/random.hpp"

namespace ncnorm {

struct CheckFailure {
  std::uint64_t seed = 0;
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct CheckReport {
  std::string suite;
  int trials = 0;
  std::vector<CheckFailure> failures;
  bool passed = true;
};

namespace detail {

// lhs <= rhs + tol; slack = rhs + tol - lhs (negative on failure).
inline void check_le(CheckReport& rep, std::uint64_t seed, const std::string& desc, double lhs,
                     double rhs, double tol) {
  const double slack = rhs + tol - lhs;
  if (!(slack >= 0.0)) rep.failures.push_back({seed, desc, lhs, rhs, slack});
}

// |lhs - rhs| <= rel * max(1, |lhs|, |rhs|).
inline void check_close(CheckReport& rep, std::uint64_t seed, const std::string& desc, double lhs,
                        double rhs, double rel) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const double slack = rel * scale - std::abs(lhs - rhs);
  if (!(slack >= 0.0)) rep.failures.push_back({seed, desc, lhs, rhs, slack});
}

inline Matrix random_complex_diagonal(int d, CounterRng& rng) {
  Matrix D = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) D(i, i) = rng.cnormal();
  return D;
}

inline CheckReport finish(CheckReport rep) {
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace detail

// Lemma 1: norm axioms and closed forms — triangle and Hoelder on diagonals,
// the Appendix A(f) duality witness, the product form, the Schatten
// reduction at p = q, and the scalar t < 1 duality behind Lemma 2.
inline CheckReport run_lemma1(int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "lemma1";
  rep.trials = trials;
  const NormOrder ord = make_order(1.5, 3.0);
  const NormOrder dual = dual_order(ord);

  {  // exponent bookkeeping, once per run
    detail::check_close(rep, seed, "1/r = |1/p - 1/q|", ord.inv_r(),
                        std::abs(1.0 / ord.p - 1.0 / ord.q), 1e-14);
    detail::check_close(rep, seed, "duality of exponents", conjugate_exponent(dual.p), ord.p,
                        1e-12);
    detail::check_close(rep, seed, "r is shared with the dual order", dual.r, ord.r, 1e-12);
  }

  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(seed).derive(static_cast<std::uint64_t>(t));
    const std::uint64_t tag = seed + static_cast<std::uint64_t>(t);

    const Matrix Yd = detail::random_complex_diagonal(9, rng);
    const Matrix Wd = detail::random_complex_diagonal(9, rng);
    const BipartiteOp Y(3, 3, Yd), W(3, 3, Wd);
    const double ny = nc_norm_diagonal(Y, ord);
    const double nw = nc_norm_diagonal(W, ord);
    detail::check_le(rep, tag, "triangle inequality on diagonals",
                     nc_norm_diagonal(BipartiteOp(3, 3, Yd + Wd), ord), ny + nw, 1e-9);
    detail::check_le(rep, tag, "Hoelder |Tr YW| <= ||Y|| ||W||'",
                     std::abs((Yd * Wd).trace()), ny * nc_norm_diagonal(W, dual), 1e-9);
    {
      const Matrix Wstar = diagonal_dual_witness(Y, ord);
      detail::check_close(rep, tag, "dual witness attains the norm",
                          std::abs((Yd * Wstar).trace()), ny, 1e-6);
      detail::check_close(rep, tag, "dual witness has unit dual norm",
                          nc_norm_diagonal(BipartiteOp(3, 3, Wstar), dual), 1.0, 1e-9);
    }

    {  // product form, both regimes
      Matrix Y1 = random_psd(2, rng);
      Matrix Y2 = random_psd(2, rng);
      const BipartiteOp prod(2, 2, kron(Y1, Y2));
      for (const NormOrder& o : {ord, dual}) {
        const double expect = schatten_norm(Y1, o.q) * schatten_norm(Y2, o.p);
        detail::check_close(rep, tag, "product form ||Y1 (x) Y2|| = ||Y1||_q ||Y2||_p",
                            nc_norm(prod, o).value, expect, 1e-4);
      }
    }

    {  // Schatten reduction at p = q
      const BipartiteOp G(3, 2, random_complex(6, rng));
      const NormOrder eq = make_order(1.7, 1.7);
      detail::check_close(rep, tag, "p = q reduces to the Schatten norm", nc_norm(G, eq).value,
                          schatten_norm(G.mat, 1.7), 1e-8);
    }

    {  // scalar duality for 0 < t < 1: (sum a^t)^{1/t} = sum a_i b_i at b_i ~ a_i^{t-1}
      const double tt = 0.3 + 0.2 * (t % 3);
      const double tc = tt / (tt - 1.0);
      double st = 0.0;
      RealVector a(4);
      for (int i = 0; i < 4; ++i) {
        a[i] = rng.uniform(0.2, 2.0);
        st += std::pow(a[i], tt);
      }
      double cross = 0.0, constraint = 0.0;
      const double beta = std::pow(st, -1.0 / tc);
      for (int i = 0; i < 4; ++i) {
        const double b = beta * std::pow(a[i], tt - 1.0);
        cross += a[i] * b;
        constraint += std::pow(b, tc);
      }
      detail::check_close(rep, tag, "scalar duality constraint sum b^{t'} = 1", constraint, 1.0,
                          1e-12);
      detail::check_close(rep, tag, "scalar duality value (sum a^t)^{1/t}", cross,
                          std::pow(st, 1.0 / tt), 1e-10);
    }
  }
  return detail::finish(rep);
}

// Theorem 1: the Psi upper bound for PSD matrices (sharp on products) and
// the 2^{3-1/p} CL comparison for Hermitian matrices.
inline CheckReport run_thm1(int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "thm1";
  rep.trials = trials;
  OptimizerConfig cfg;
  cfg.restarts = 4;
  const NormOrder orders[3] = {make_order(1.0, 2.0), make_order(1.5, 3.0), make_order(2.0, 4.0)};

  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(seed).derive(static_cast<std::uint64_t>(t));
    const std::uint64_t tag = seed + static_cast<std::uint64_t>(t);
    const NormOrder& ord = orders[t % 3];

    {  // (a) ||Y||_NC <= Psi(Y) for PSD Y
      const BipartiteOp Y(3, 3, random_psd(9, rng));
      detail::check_le(rep, tag, "Theorem 1(a): nc lower <= psi", nc_norm_psd(Y, ord, cfg).lower,
                       psi(Y, ord), 1e-8);
    }
    if (t % 5 == 0) {  // sharpness on products
      const BipartiteOp Y(3, 2, kron(random_psd(3, rng), random_psd(2, rng)));
      detail::check_close(rep, tag, "Theorem 1(a) sharp on products",
                          nc_norm_psd(Y, ord, cfg).value, psi(Y, ord), 1e-5);
    }

    {  // (b) nc lower <= 2^{3-1/p} cl upper for Hermitian Y
      const double ps[3] = {1.0, 1.5, 2.0};
      const double p = ps[t % 3];
      const double q = (t % 2 == 0) ? p : 2.0 * p;
      const NormOrder o = make_order(p, q);
      const BipartiteOp Y(2, 2, random_hermitian(4, rng));
      const double lower = nc_norm(Y, o, cfg).lower;
      const double clu = cl_norm_hermitian(Y, o, cfg).estimate.upper;
      detail::check_le(rep, tag, "Theorem 1(b): nc lower <= 2^{3-1/p} cl upper", lower,
                       theorem1_constant(o) * clu, 1e-6);
    }
  }
  return detail::finish(rep);
}

// Lieb-Thirring: Tr((B^{1/2} (x) I) Y (B^{1/2} (x) I))^p <= Tr((B^p (x) I) Y^p)
// for PSD Y, density B, p >= 1.
inline CheckReport run_lieb_thirring(int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "lieb-thirring";
  rep.trials = trials;
  const double ps[3] = {1.2, 1.7, 2.0};
  const int dims[3][2] = {{2, 2}, {3, 2}, {4, 3}};
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(seed).derive(static_cast<std::uint64_t>(t));
    const std::uint64_t tag = seed + static_cast<std::uint64_t>(t);
    const double p = ps[t % 3];
    const int n = dims[(t / 3) % 3][0], m = dims[(t / 3) % 3][1];
    const Matrix Y = random_psd(n * m, rng);
    const Matrix B = random_density(n, rng);
    const Matrix Bh = lift_outside(matrix_power(B, 0.5), m);
    const double lhs = matrix_power(herm(Bh * Y * Bh), p).trace().real();
    const double rhs =
        (lift_outside(matrix_power(B, p), m) * matrix_power(Y, p)).trace().real();
    detail::check_le(rep, tag, "Lieb-Thirring trace inequality", lhs, rhs, 1e-9);
  }
  return detail::finish(rep);
}

// Finite-difference validation of psi_gradient and nc_objective_gradient.
inline CheckReport run_gradients(int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "gradients";
  rep.trials = trials;
  const NormOrder orders[3] = {make_order(1.2, 2.5), make_order(1.5, 3.0), make_order(2.0, 4.0)};
  const double h = 1e-5;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(seed).derive(static_cast<std::uint64_t>(t));
    const std::uint64_t tag = seed + static_cast<std::uint64_t>(t);
    const NormOrder& ord = orders[t % 3];
    const int n = 3, m = 2;

    Matrix Ym = random_psd(n * m, rng) + 0.5 * Matrix::Identity(n * m, n * m);
    Matrix D = random_hermitian(n * m, rng);
    D /= D.norm();
    {
      const BipartiteOp Y(n, m, Ym);
      const Matrix G = psi_gradient(Y, ord);
      const double an = (G * D).trace().real();
      const double fd = (psi(BipartiteOp(n, m, Ym + h * D), ord) -
                         psi(BipartiteOp(n, m, Ym - h * D), ord)) /
                        (2.0 * h);
      const double denom = std::max({std::abs(an), std::abs(fd), 1e-6});
      detail::check_le(rep, tag, "psi_gradient vs central difference", std::abs(an - fd) / denom,
                       1e-4, 0.0);
    }
    {
      const BipartiteOp Y(n, m, Ym);
      Matrix C = 0.5 * (random_density(n, rng) + Matrix::Identity(n, n) / n);
      Matrix Dc = random_hermitian(n, rng);
      Dc /= Dc.norm();
      const Matrix G = nc_objective_gradient(Y, C, ord);
      const double an = (G * Dc).trace().real();
      const double fd = (nc_objective(Y, C + h * Dc, ord) - nc_objective(Y, C - h * Dc, ord)) /
                        (2.0 * h);
      const double denom = std::max({std::abs(an), std::abs(fd), 1e-6});
      detail::check_le(rep, tag, "nc objective gradient vs central difference",
                       std::abs(an - fd) / denom, 1e-4, 0.0);
    }
  }
  return detail::finish(rep);
}

// Lemma pos-bound5 (p = 2 <= q: cl >= psi/sqrt(2)) and the eqn14 direction
// cl <= psi for PSD matrices.
inline CheckReport run_posbound(int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "posbound";
  rep.trials = trials;
  const double qs[3] = {2.0, 3.0, 4.0};
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(seed).derive(static_cast<std::uint64_t>(t));
    const std::uint64_t tag = seed + static_cast<std::uint64_t>(t);
    const NormOrder ord = make_order(2.0, qs[t % 3]);
    const BipartiteOp Y(2, 2, random_psd(4, rng));
    const CLResult cl = cl_norm_hermitian(Y, ord);
    const double ps = psi(Y, ord);
    detail::check_le(rep, tag, "pos-bound5: psi/sqrt(2) <= cl upper", cl_lower_p2(Y, ord),
                     cl.estimate.upper, 1e-6);
    detail::check_le(rep, tag, "eqn14: cl <= psi for PSD", cl.estimate.value, ps, 1e-8);
  }
  return detail::finish(rep);
}

// Appendix B: the scan must find a grid point with g'(0+) < -1e-6, stable
// under step refinement.
inline CheckReport run_nonmono() {
  CheckReport rep;
  rep.suite = "nonmono";
  rep.trials = 0;
  std::vector<double> p_grid, q_grid;
  for (double p = 1.1; p < 1.95; p += 0.1) p_grid.push_back(p);
  for (double q = 1.0; q <= 4.0 + 1e-9; q += 0.25) q_grid.push_back(q);

  auto stable_negatives = [&](double step) {
    std::vector<NonmonoPoint> out;
    for (const auto& pt : nonmono_scan(p_grid, q_grid, step))
      if (pt.deriv < -1e-6) out.push_back(pt);
    return out;
  };
  const auto coarse = stable_negatives(1e-4);
  const auto half = stable_negatives(5e-5);
  const auto fine = stable_negatives(1e-5);
  int stable = 0;
  for (const auto& a : coarse)
    for (const auto& b : half)
      for (const auto& c : fine)
        if (std::abs(a.p - b.p) < 1e-9 && std::abs(a.q - b.q) < 1e-9 &&
            std::abs(a.p - c.p) < 1e-9 && std::abs(a.q - c.q) < 1e-9)
          ++stable;
  if (stable == 0)
    rep.failures.push_back({0, "no grid point with g'(0+) < -1e-6 stable under step halving",
                            static_cast<double>(coarse.size()), static_cast<double>(fine.size()),
                            -1.0});
  return detail::finish(rep);
}

inline CheckReport run_suite(const std::string& name, int trials, std::uint64_t seed) {
  if (name == "lemma1") return run_lemma1(trials, seed);
  if (name == "thm1") return run_thm1(trials, seed);
  if (name == "lieb-thirring") return run_lieb_thirring(trials, seed);
  if (name == "gradients") return run_gradients(trials, seed);
  if (name == "posbound") return run_posbound(trials, seed);
  if (name == "nonmono") return run_nonmono();
  throw std::invalid_argument("unknown check suite: " + name);
}

// Search for CL non-monotonicity witnesses Y <= Y' with ||Y||_CL > ||Y'||_CL,
// growing Y' from the optimal Lemma 2 slack or the Appendix B direction.
// Absence at this scale is an observation, not a failure.
struct ClNonmonoWitness {
  double p = 0.0, q = 0.0, t = 0.0;
  double cl_base = 0.0, cl_grown = 0.0;
};

inline std::optional<ClNonmonoWitness> cl_nonmono_search(const OptimizerConfig& cfg = {}) {
  auto [Wp, Yp] = nonmono_example_layout();
  for (double p : {1.3, 1.5, 1.7})
    for (double q : {2.0, 3.0, 4.0}) {
      const NormOrder ord = make_order(p, q);
      const CLResult base = cl_norm_hermitian(BipartiteOp(2, 2, Yp), ord, cfg);
      std::vector<Matrix> directions = {base.optimal_A, Wp};
      for (const Matrix& dir : directions) {
        if (max_abs(dir) <= 1e-12) continue;
        for (double t : {0.1, 0.25, 0.5, 1.0}) {
          const CLResult grown =
              cl_norm_hermitian(BipartiteOp(2, 2, Matrix(Yp + t * dir)), ord, cfg);
          if (grown.estimate.value <
              base.estimate.value - 1e-6 * std::max(1.0, base.estimate.value))
            return ClNonmonoWitness{p, q, t, base.estimate.value, grown.estimate.value};
        }
      }
    }
  return std::nullopt;
}

}  // namespace ncnorm
