#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ncnorm/counterexamples.hpp"
#include "ncnorm/nc.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"
#include "ncnorm/random.hpp"

using namespace ncnorm;

TEST_CASE("sign_unitaries enumerate and diagonalize by averaging") {
  const auto one = sign_unitaries(1);
  REQUIRE(one.size() == 2);
  REQUIRE(one[0](0, 0) == Complex(1.0, 0.0));
  REQUIRE(one[1](0, 0) == Complex(-1.0, 0.0));

  const auto three = sign_unitaries(3);
  REQUIRE(three.size() == 8);
  REQUIRE(max_abs(three[0] - Matrix::Identity(3, 3)) == 0.0);  // U_1 = I

  CounterRng rng(61);
  const Matrix A = random_complex(3, rng);
  Matrix avg = Matrix::Zero(3, 3);
  for (const Matrix& U : three) avg += U * A * U;  // direct summation oracle
  avg /= 8.0;
  Matrix diag_part = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) diag_part(i, i) = A(i, i);
  REQUIRE(max_abs(avg - diag_part) < 1e-13);

  REQUIRE_THROWS_AS(sign_unitaries(13), std::invalid_argument);
  REQUIRE_THROWS_AS(sign_unitaries(0), std::invalid_argument);
}

TEST_CASE("build_family structure") {
  const CounterexampleSpec spec = harmonic_lambda(2);
  const BipartiteOp Y = build_family(spec);
  REQUIRE(Y.n == 2);
  REQUIRE(Y.m == 4);
  REQUIRE(is_hermitian(Y.mat));
  REQUIRE(min_eigenvalue(Y.mat) > -1e-12);

  SECTION("idempotence under fractional powers") {
    REQUIRE(max_abs(matrix_power(Y.mat, 2.7) - Y.mat) < 1e-10);
  }
  SECTION("inside partial trace of Y^p recovers 2^n D") {
    // summation oracle: blocks are U_a |psi><psi| U_a, so Tr_2 Y = 2^n diag(lambda)
    Matrix expect = Matrix::Zero(2, 2);
    for (int j = 0; j < 2; ++j) expect(j, j) = 4.0 * spec.lambda[j];
    REQUIRE(max_abs(partial_trace_inside(Y) - expect) < 1e-12);
  }
  SECTION("block-diagonal over the inside index") {
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            if (a != b) REQUIRE(Y.mat(4 * i + a, 4 * k + b) == Complex(0.0, 0.0));
  }
  SECTION("conjugation by U_b permutes the blocks") {
    const auto us = sign_unitaries(2);
    for (const Matrix& U : us) {
      // U_b (U_a psi) = U_{a xor b} psi up to global structure: the multiset of
      // blocks is closed under conjugation
      for (int a = 0; a < 4; ++a) {
        Matrix block(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) block(i, k) = Y.mat(4 * i + a, 4 * k + a);
        const Matrix conj_block = U * block * U;
        bool matched = false;
        for (int c = 0; c < 4 && !matched; ++c) {
          Matrix other(2, 2);
          for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) other(i, k) = Y.mat(4 * i + c, 4 * k + c);
          matched = max_abs(conj_block - other) < 1e-14;
        }
        REQUIRE(matched);
      }
    }
  }
  REQUIRE_THROWS_AS(build_family(harmonic_lambda(6)), std::invalid_argument);
}

TEST_CASE("closed forms match dense evaluation") {
  for (int n : {2, 3}) {
    const CounterexampleSpec spec = harmonic_lambda(n);
    const BipartiteOp Y = build_family(spec);
    for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{1.5, 3.0}}) {
      const NormOrder ord = make_order(p, q);
      REQUIRE(psi_closed(spec, ord) == Catch::Approx(psi(Y, ord)).epsilon(1e-9));
      REQUIRE(nc_closed(spec, ord) ==
              Catch::Approx(nc_norm_psd(Y, ord).value).epsilon(1e-5));
    }
  }
}

TEST_CASE("closed-form special values") {
  const NormOrder ord = make_order(1.5, 3.0);
  SECTION("n = 1") {
    const CounterexampleSpec spec = harmonic_lambda(1);
    REQUIRE(psi_closed(spec, ord) == Catch::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-12));
    REQUIRE(nc_closed(spec, ord) == Catch::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-12));
  }
  SECTION("uniform weights") {
    RealVector lambda(4);
    lambda.setConstant(0.25);
    const CounterexampleSpec spec(4, lambda);
    const double expect = std::pow(16.0 * std::pow(4.0, 1.5 / 3.0 - 1.0), 1.0 / 1.5);
    REQUIRE(psi_closed(spec, ord) == Catch::Approx(expect).epsilon(1e-12));
  }
  SECTION("exponent coincidence at (1, 2)") {
    const NormOrder o12 = make_order(1.0, 2.0);
    for (int n : {1, 3, 7}) {
      const CounterexampleSpec spec = harmonic_lambda(n);
      REQUIRE(psi_closed(spec, o12) == Catch::Approx(nc_closed(spec, o12)).epsilon(1e-12));
    }
  }
  SECTION("regime errors") {
    const CounterexampleSpec spec = harmonic_lambda(2);
    REQUIRE_THROWS_AS(psi_closed(spec, make_order(2.0, 2.0)), std::invalid_argument);
    REQUIRE_THROWS_AS(nc_closed(spec, make_order(3.0, 4.0)), std::invalid_argument);
  }
}

TEST_CASE("harmonic_lambda normalization") {
  const CounterexampleSpec one = harmonic_lambda(1);
  REQUIRE(one.lambda[0] == Catch::Approx(1.0));
  const CounterexampleSpec two = harmonic_lambda(2);
  REQUIRE(two.lambda[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  REQUIRE(two.lambda[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  const CounterexampleSpec ten = harmonic_lambda(10);
  REQUIRE(ten.lambda.sum() == Catch::Approx(1.0).margin(1e-13));
  REQUIRE(ten.lambda[0] <= 1.0 / std::log(10.0));  // c <= 1/ln n
}

TEST_CASE("h_function pinned values and limits") {
  REQUIRE(h_function(2.0) == Catch::Approx(1.28254983016186).margin(1e-10));
  REQUIRE(h_function(1.5) == Catch::Approx(1.89680950814758).margin(1e-10));
  REQUIRE(h_function(2.0, 100000) == Catch::Approx(h_function(2.0, 1000000)).margin(1e-10));
  REQUIRE(h_function(1.5) > h_function(2.0));
  REQUIRE(h_function(2.0) > h_function(4.0));
  REQUIRE(h_function(40.0) == Catch::Approx(1.0).margin(1e-2));
  REQUIRE_THROWS_AS(h_function(1.0), std::domain_error);
  REQUIRE_THROWS_AS(h_function(0.7), std::domain_error);
}

TEST_CASE("harmonic weights bracket between c and c h(t)") {
  const CounterexampleSpec spec = harmonic_lambda(50);
  const double c = spec.lambda[0];
  const double t = 1.7;
  double nt = 0.0;
  for (int j = 0; j < 50; ++j) nt += std::pow(spec.lambda[j], t);
  nt = std::pow(nt, 1.0 / t);
  REQUIRE(nt >= c);
  REQUIRE(nt <= c * h_function(t) + 1e-12);
}

TEST_CASE("divergence_table growth and pinned endpoints") {
  const NormOrder ord = make_order(1.5, 3.0);
  const auto rows = divergence_table(ord, 4, 24);
  REQUIRE(rows.size() == 21);
  REQUIRE(rows.front().n == 4);
  REQUIRE(rows.back().n == 24);
  // frozen closed-form oracles
  REQUIRE(rows.front().ratio == Catch::Approx(1.02030921157).epsilon(1e-9));
  REQUIRE(rows.back().ratio == Catch::Approx(1.07492533631).epsilon(1e-9));
  for (size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].ratio > rows[i - 1].ratio);
  for (const auto& r : rows)
    REQUIRE(std::pow(r.ratio, 1.5) >= r.paper_bound - 1e-12);
  REQUIRE(rows.back().ratio / rows.front().ratio > 1.05);

  SECTION("flat ratio at the exponent coincidence") {
    const auto flat = divergence_table(make_order(1.0, 2.0), 2, 8);
    for (const auto& r : flat) REQUIRE(r.ratio == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("p = 2, q = 4 bound column endpoints") {
    // (ln n)^{p-1} / h(r')^p with r' = 4/3 (mpmath, 30 dps)
    const auto rows24 = divergence_table(make_order(2.0, 4.0), 4, 24);
    REQUIRE(rows24.front().paper_bound == Catch::Approx(0.2028766364888).epsilon(1e-10));
    REQUIRE(rows24.back().paper_bound == Catch::Approx(0.4650908852868).epsilon(1e-10));
  }
  SECTION("Theorem 2(b) composition: CL/NC lower bound grows at p = 2") {
    const auto rows24 = divergence_table(make_order(2.0, 4.0), 4, 24);
    for (size_t i = 1; i < rows24.size(); ++i) {
      const double prev = rows24[i - 1].psi / (std::sqrt(2.0) * rows24[i - 1].nc);
      const double cur = rows24[i].psi / (std::sqrt(2.0) * rows24[i].nc);
      REQUIRE(cur > prev);
    }
    const double front = rows24.front().psi / (std::sqrt(2.0) * rows24.front().nc);
    const double back = rows24.back().psi / (std::sqrt(2.0) * rows24.back().nc);
    REQUIRE(front == Catch::Approx(0.7217710896416).epsilon(1e-9));
    REQUIRE(back == Catch::Approx(0.7622636989621).epsilon(1e-9));
  }
  SECTION("regime errors") {
    REQUIRE_THROWS_AS(divergence_table(make_order(3.0, 1.5), 2, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(divergence_table(ord, 5, 4), std::invalid_argument);
  }
}

TEST_CASE("nonmono_example matches Appendix B") {
  const auto [W, Y] = nonmono_example();
  const double w = 3.0 - std::sqrt(10.0);
  REQUIRE(w == Catch::Approx(-0.16227766).margin(1e-7));
  REQUIRE(W(0, 1).real() == Catch::Approx(w));
  const Spectrum ws = eigh(W);
  REQUIRE(ws.eigenvalues[0] == Catch::Approx(w * w + 1.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) REQUIRE(std::abs(ws.eigenvalues[i]) < 1e-14);
  const Spectrum ys = eigh(Y);
  REQUIRE(ys.eigenvalues[0] == Catch::Approx(1.0));
  REQUIRE(ys.eigenvalues[1] == Catch::Approx(1.0));
  REQUIRE(std::abs(ys.eigenvalues[2]) < 1e-14);
  REQUIRE(std::abs(ys.eigenvalues[3]) < 1e-14);
}

TEST_CASE("nonmono_scan finds stable negative derivatives") {
  std::vector<double> p_grid, q_grid;
  for (double p = 1.1; p < 1.95; p += 0.1) p_grid.push_back(p);
  for (double q = 1.0; q <= 4.0 + 1e-9; q += 0.25) q_grid.push_back(q);

  const auto coarse = nonmono_scan(p_grid, q_grid, 1e-4);
  const auto fine = nonmono_scan(p_grid, q_grid, 1e-5);
  REQUIRE_FALSE(coarse.empty());
  REQUIRE_FALSE(fine.empty());

  SECTION("the (1.5, 3) point is negative with the known magnitude") {
    bool found = false;
    for (const auto& pt : coarse)
      if (std::abs(pt.p - 1.5) < 1e-9 && std::abs(pt.q - 3.0) < 1e-9) {
        found = true;
        REQUIRE(pt.deriv > -0.04);
        REQUIRE(pt.deriv < -0.02);
      }
    REQUIRE(found);
  }
  SECTION("alternative readings stay monotone where the primary dips") {
    for (const auto& pt : coarse) {
      REQUIRE(pt.deriv_printed > -1e-9);
      REQUIRE(pt.deriv_m4 > -1e-9);
    }
  }
  SECTION("baseline value") {
    auto [Wp, Yp] = nonmono_example_layout();
    (void)Wp;
    const NormOrder ord = make_order(1.5, 3.0);
    REQUIRE(psi(BipartiteOp(2, 2, Yp), ord) > 0.0);
  }
  REQUIRE_THROWS_AS(nonmono_scan({2.5}, {3.0}, 1e-4), std::invalid_argument);
  REQUIRE_THROWS_AS(nonmono_scan({1.5}, {3.0}, 0.0), std::invalid_argument);
}
