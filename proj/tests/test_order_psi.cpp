#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"
#include "ncnorm/random.hpp"

using namespace ncnorm;

namespace {

// Mixed-norm oracle for diagonal PSD operators: (sum_i (sum_j d_ij^p)^{q/p})^{1/q}.
double diagonal_psi_oracle(const BipartiteOp& Y, double p, double q) {
  double outer = 0.0;
  for (int i = 0; i < Y.n; ++i) {
    double inner = 0.0;
    for (int j = 0; j < Y.m; ++j)
      inner += std::pow(Y.mat(static_cast<long>(i) * Y.m + j, static_cast<long>(i) * Y.m + j).real(), p);
    outer += std::pow(inner, q / p);
  }
  return std::pow(outer, 1.0 / q);
}

}  // namespace

TEST_CASE("conjugate exponents") {
  REQUIRE(conjugate_exponent(1.0) == kInf);
  REQUIRE(std::isinf(conjugate_exponent(1.0)));
  REQUIRE(conjugate_exponent(kInf) == 1.0);
  REQUIRE(conjugate_exponent(2.0) == Catch::Approx(2.0));
  REQUIRE(conjugate_exponent(1.5) == Catch::Approx(3.0));
  REQUIRE_THROWS_AS(conjugate_exponent(0.5), std::invalid_argument);
}

TEST_CASE("make_order pins 1/r = |1/p - 1/q| and duality") {
  const NormOrder a = make_order(1.0, 2.0);
  REQUIRE(a.r == Catch::Approx(2.0));
  REQUIRE(a.r_dual == Catch::Approx(2.0));
  REQUIRE(a.sup_regime());

  const NormOrder b = make_order(1.5, 3.0);
  REQUIRE(b.r == Catch::Approx(3.0));
  REQUIRE(b.r_dual == Catch::Approx(1.5));
  REQUIRE(b.inv_r() == Catch::Approx(std::abs(1.0 / 1.5 - 1.0 / 3.0)));

  const NormOrder c = make_order(3.0, 1.5);
  REQUIRE(c.r == Catch::Approx(3.0));  // |1/p - 1/q| is symmetric
  REQUIRE(c.inf_regime());
  REQUIRE_FALSE(c.sup_regime());

  const NormOrder eq = make_order(2.0, 2.0);
  REQUIRE(std::isinf(eq.r));
  REQUIRE(eq.inv_r() == 0.0);

  const NormOrder d = dual_order(b);
  REQUIRE(d.p == Catch::Approx(3.0));
  REQUIRE(d.q == Catch::Approx(1.5));
  REQUIRE(d.r == Catch::Approx(b.r));

  const NormOrder inf_q = make_order(1.5, kInf);
  REQUIRE(inf_q.r == Catch::Approx(1.5));

  REQUIRE_THROWS_AS(make_order(0.9, 2.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_order(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("psi closed values") {
  const NormOrder ord = make_order(1.5, 3.0);
  SECTION("identity") {
    const BipartiteOp I(2, 3, Matrix::Identity(6, 6));
    REQUIRE(psi(I, ord) ==
            Catch::Approx(std::pow(2.0, 1.0 / 3.0) * std::pow(3.0, 1.0 / 1.5)).epsilon(1e-12));
  }
  SECTION("products split into Schatten norms") {
    CounterRng rng(21);
    const Matrix A = random_psd(2, rng);
    const Matrix B = random_psd(3, rng);
    const BipartiteOp P(2, 3, kron(A, B));
    REQUIRE(psi(P, ord) ==
            Catch::Approx(schatten_norm(A, ord.q) * schatten_norm(B, ord.p)).epsilon(1e-10));
  }
  SECTION("diagonal operators give the classical mixed norm") {
    const BipartiteOp D = random_instance("diagonal-psd", 3, 2, 23);
    REQUIRE(psi(D, ord) == Catch::Approx(diagonal_psi_oracle(D, 1.5, 3.0)).epsilon(1e-10));
  }
  SECTION("p equal q collapses to the Schatten norm") {
    CounterRng rng(24);
    const BipartiteOp Y(2, 2, random_psd(4, rng));
    REQUIRE(psi(Y, make_order(1.7, 1.7)) ==
            Catch::Approx(schatten_norm(Y.mat, 1.7)).epsilon(1e-10));
  }
}

TEST_CASE("psi domain handling") {
  const NormOrder ord = make_order(1.5, 3.0);
  CounterRng rng(25);
  Matrix H = random_hermitian(4, rng);
  H(0, 0) -= 10.0;
  REQUIRE_THROWS_AS(psi(BipartiteOp(2, 2, H), ord), std::domain_error);

  const Matrix P = random_psd(4, rng);
  const Matrix nudged = P - 1e-12 * Matrix::Identity(4, 4);
  REQUIRE_NOTHROW(psi(BipartiteOp(2, 2, nudged), ord));  // tolerated rounding negativity
  REQUIRE(psi(BipartiteOp(2, 2, Matrix(Matrix::Zero(4, 4))), ord) == 0.0);
}

TEST_CASE("psi is convex and positively homogeneous in the convex regime") {
  CounterRng rng(26);
  for (double p : {1.0, 1.5, 2.0}) {
    const NormOrder ord = make_order(p, 3.0);
    const Matrix Y1 = random_psd(6, rng);
    const Matrix Y2 = random_psd(6, rng);
    const double lam = 0.3;
    const BipartiteOp mix(3, 2, lam * Y1 + (1.0 - lam) * Y2);
    REQUIRE(psi(mix, ord) <= lam * psi(BipartiteOp(3, 2, Y1), ord) +
                                 (1.0 - lam) * psi(BipartiteOp(3, 2, Y2), ord) + 1e-9);
    REQUIRE(psi(BipartiteOp(3, 2, Matrix(2.5 * Y1)), ord) ==
            Catch::Approx(2.5 * psi(BipartiteOp(3, 2, Y1), ord)).epsilon(1e-10));
  }
}

TEST_CASE("psi_gradient matches finite differences") {
  CounterRng rng(27);
  const double h = 1e-5;
  for (double p : {1.2, 1.5, 2.0}) {
    const NormOrder ord = make_order(p, 3.0);
    const Matrix Y = random_psd(6, rng) + 0.5 * Matrix::Identity(6, 6);
    Matrix D = random_hermitian(6, rng);
    D /= D.norm();
    const Matrix G = psi_gradient(BipartiteOp(3, 2, Y), ord);
    REQUIRE(is_hermitian(G, 1e-10));
    const double an = (G * D).trace().real();
    const double fd = (psi(BipartiteOp(3, 2, Matrix(Y + h * D)), ord) -
                       psi(BipartiteOp(3, 2, Matrix(Y - h * D)), ord)) /
                      (2.0 * h);
    REQUIRE(std::abs(an - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("triple_bar_norm on scalars equals the absolute value") {
  // X + A = B with A, B >= 0 in dimension one: value = inf_{a >= max(0,-x)} (x + 2a).
  for (double x : {2.3, -1.1}) {
    for (double p : {1.0, 1.5, 2.0}) {
      const NormOrder ord = make_order(p, 2.0 * p);
      Matrix X(1, 1);
      X(0, 0) = x;
      const NormEstimate est = triple_bar_norm(BipartiteOp(1, 1, X), ord);
      double brute = kInf;  // scalar grid oracle
      for (double a = std::max(0.0, -x); a < std::max(0.0, -x) + 5.0; a += 1e-4)
        brute = std::min(brute, (x + a) + a);
      REQUIRE(est.value == Catch::Approx(std::abs(x)).margin(2e-4));
      REQUIRE(est.value <= brute + 1e-6);
      REQUIRE(est.status == SolveStatus::converged);
    }
  }
}

TEST_CASE("triple_bar_norm basic properties") {
  CounterRng rng(28);
  const NormOrder ord = make_order(1.5, 3.0);
  const Matrix P = random_psd(4, rng);
  const BipartiteOp Y(2, 2, P);
  const NormEstimate est = triple_bar_norm(Y, ord);
  REQUIRE(est.value <= psi(Y, ord) + 1e-8);  // A = 0 is feasible
  REQUIRE(est.lower <= est.value);
  REQUIRE(est.value <= est.upper);

  const NormEstimate neg = triple_bar_norm(BipartiteOp(2, 2, Matrix(-P)), ord);
  REQUIRE(neg.value == Catch::Approx(est.value).epsilon(1e-5));  // negation symmetry

  REQUIRE_THROWS_AS(triple_bar_norm(Y, make_order(3.0, 4.0)), std::invalid_argument);
  REQUIRE(triple_bar_norm(BipartiteOp(2, 2, Matrix(Matrix::Zero(4, 4))), ord).value == 0.0);
}
