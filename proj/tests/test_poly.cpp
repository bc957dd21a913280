#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dlab/poly.hpp"
#include "dlab/rng.hpp"

using namespace dlab;

namespace {

// Independent oracle: plain term-by-term power summation.
cnum eval_term_by_term(const ComplexPoly& p, cnum z) {
  cnum acc = 0.0, zpow = 1.0;
  for (const auto& c : p.coeffs()) {
    acc += c * zpow;
    zpow *= z;
  }
  return acc;
}

const ComplexPoly kZ2m1 = ComplexPoly::parse("-1,0,1");     // z^2 - 1
const ComplexPoly kZ4m1 = ComplexPoly::parse("-1,0,0,0,1"); // z^4 - 1

}  // namespace

TEST_CASE("poly: construction trims negligible leading coefficients") {
  const ComplexPoly p(std::vector<cnum>{1.0, 2.0, 1e-20, 0.0});
  CHECK(p.degree() == 1);
  CHECK(p.coeffs()[1] == cnum(2.0));

  const ComplexPoly zero(std::vector<cnum>{0.0, 0.0, 0.0});
  CHECK(zero.degree() == 0);
  CHECK(zero.is_zero());
}

TEST_CASE("poly: Horner evaluation") {
  CHECK(kZ2m1(cnum(1.0)) == cnum(0.0));
  CHECK(kZ2m1(cnum(0.0, 2.0)) == cnum(-5.0));

  // agreement with the term-by-term oracle
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const cnum z = 2.0 * rng.next_complex_gaussian();
    const cnum fast = kZ4m1(z);
    const cnum slow = eval_term_by_term(kZ4m1, z);
    CHECK(std::abs(fast - slow) <= 1e-12 * (1.0 + std::abs(slow)));
  }
  const cnum z(1.0, 1.0);
  CHECK(std::abs(kZ4m1(z) - eval_term_by_term(kZ4m1, z)) <=
        1e-12 * std::abs(eval_term_by_term(kZ4m1, z)));
}

TEST_CASE("poly: derivative") {
  const ComplexPoly d = kZ2m1.derivative();
  CHECK(d.degree() == 1);
  CHECK(d.coeffs()[0] == cnum(0.0));
  CHECK(d.coeffs()[1] == cnum(2.0));

  CHECK(ComplexPoly(std::vector<cnum>{5.0}).derivative().is_zero());

  const ComplexPoly q = ComplexPoly::parse("0,3,0,0,1");  // z^4 + 3z
  const ComplexPoly dq = q.derivative();                  // 4z^3 + 3
  CHECK(dq.coeffs() == std::vector<cnum>{3.0, 0.0, 0.0, 4.0});
}

TEST_CASE("poly: roots of simple examples") {
  auto rs = kZ2m1.roots();
  REQUIRE(rs.size() == 2);
  std::sort(rs.begin(), rs.end(),
            [](cnum a, cnum b) { return a.real() < b.real(); });
  CHECK(std::abs(rs[0] - cnum(-1.0)) < 1e-12);
  CHECK(std::abs(rs[1] - cnum(1.0)) < 1e-12);

  const ComplexPoly q = ComplexPoly::parse("0,-1,1");  // z(z-1)
  auto qr = q.roots();
  REQUIRE(qr.size() == 2);
  std::sort(qr.begin(), qr.end(),
            [](cnum a, cnum b) { return a.real() < b.real(); });
  CHECK(std::abs(qr[0]) < 1e-12);
  CHECK(std::abs(qr[1] - cnum(1.0)) < 1e-12);

  CHECK_THROWS_AS(ComplexPoly(std::vector<cnum>{3.0}).roots(), std::invalid_argument);
}

TEST_CASE("poly: random monic quintic roots satisfy the residual bound") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cnum> coeffs(6);
    double max_coeff = 1.0;
    for (int k = 0; k < 5; ++k) {
      coeffs[static_cast<std::size_t>(k)] = 2.0 * rng.next_complex_gaussian();
      max_coeff = std::max(max_coeff, std::abs(coeffs[static_cast<std::size_t>(k)]));
    }
    coeffs[5] = 1.0;
    const ComplexPoly p(coeffs);
    const auto rs = p.roots();
    REQUIRE(rs.size() == 5);  // multiplicities sum to the degree
    for (const auto& r : rs)
      CHECK(std::abs(p(r)) < 1e-8 * (1.0 + max_coeff));
  }
}

TEST_CASE("poly: simple-zero detection") {
  CHECK(kZ2m1.simple_zeros(1e-6));
  CHECK_FALSE(ComplexPoly::parse("0,0,1").simple_zeros(1e-6));  // z^2, double root
  // 4th roots of unity are pairwise sqrt(2) apart
  CHECK(kZ4m1.simple_zeros(1e-6));
}

TEST_CASE("poly: divided difference") {
  CHECK(std::abs(kZ2m1.divided_difference(cnum(3.0), cnum(1.0)) - cnum(4.0)) < 1e-14);
  CHECK(std::abs(kZ4m1.divided_difference(cnum(2.0), cnum(1.0)) - cnum(15.0)) < 1e-13);

  // confluent case is bit-identical to evaluating the derivative
  Rng rng(3);
  const ComplexPoly d4 = kZ4m1.derivative();
  for (int i = 0; i < 20; ++i) {
    const cnum z = 3.0 * rng.next_complex_gaussian();
    CHECK(kZ4m1.divided_difference(z, z) == d4(z));
  }

  // (w - z) * Dp == p(w) - p(z) within the stated bound
  const ComplexPoly p = ComplexPoly::parse("1+1i,0,-2,0.5,1");
  for (int i = 0; i < 100; ++i) {
    const cnum w = 3.0 * rng.next_complex_gaussian();
    const cnum z = 3.0 * rng.next_complex_gaussian();
    const cnum lhs = (w - z) * p.divided_difference(w, z);
    const cnum rhs = p(w) - p(z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(p(w)) + std::abs(p(z))));
  }
}

TEST_CASE("poly: square completion base cases") {
  SUBCASE("d = 2 with phi_1 = 0") {
    const auto sc = complete_square({cnum(0.0)}, 2);
    REQUIRE(sc.u.size() == 2);
    REQUIRE(sc.q.size() == 1);
    CHECK(sc.u[0] == cnum(0.0));
    CHECK(sc.u[1] == cnum(1.0));
    CHECK(sc.q[0] == cnum(0.0));
  }
  SUBCASE("d = 3 closed form") {
    const cnum phi1(0.7, -0.2), phi2(-1.1, 0.4);
    const auto sc = complete_square({phi1, phi2}, 3);
    CHECK(sc.u[2] == cnum(1.0));
    CHECK(std::abs(sc.u[1] - 0.5 * phi2) < 1e-15);
    CHECK(std::abs(sc.u[0] - 0.5 * (phi1 - 0.25 * phi2 * phi2)) < 1e-15);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(complete_square({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(complete_square({cnum(1.0)}, 3), std::invalid_argument);
  }
}

TEST_CASE("poly: square completion identity at sampled points") {
  Rng rng(17);
  for (int d = 2; d <= 6; ++d) {
    std::vector<cnum> phis(static_cast<std::size_t>(d - 1));
    for (auto& phi : phis) phi = rng.next_complex_gaussian();
    const auto sc = complete_square(phis, d);

    for (int s = 0; s < 10; ++s) {
      const cnum f = 1.5 * rng.next_complex_gaussian();
      // A(f) = (phi_1 f + ... + phi_{d-1} f^{d-1} + f^d) f^{d-2}
      cnum inner = 0.0, fpow = f;
      for (int j = 1; j <= d - 1; ++j) {
        inner += phis[static_cast<std::size_t>(j - 1)] * fpow;
        fpow *= f;
      }
      inner += fpow;
      cnum a = inner;
      for (int j = 0; j < d - 2; ++j) a *= f;

      cnum b = 0.0;
      for (int j = d - 1; j >= 0; --j) b = b * f + sc.u[static_cast<std::size_t>(j)];
      cnum qs = 0.0;
      for (int j = d - 2; j >= 0; --j) qs = qs * f + sc.q[static_cast<std::size_t>(j)];

      const cnum residual = b * b - a - qs;
      CHECK(std::abs(residual) < 1e-10 * (1.0 + std::abs(a) + std::norm(b)));
    }
  }
}

TEST_CASE("poly: text round trip") {
  CHECK(kZ4m1.degree() == 4);
  const ComplexPoly p = ComplexPoly::parse("1+2i, 0, 3-4i");
  const ComplexPoly q = ComplexPoly::parse(p.to_string());
  CHECK(p.coeffs() == q.coeffs());
}
