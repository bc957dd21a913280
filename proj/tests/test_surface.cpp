#include <doctest.h>

#include <cmath>

#include "dlab/surface.hpp"

using namespace dlab;

namespace {
const Danielewski kS2(ComplexPoly::parse("-1,0,1"));      // x y = z^2 - 1
const Danielewski kS4(ComplexPoly::parse("-1,0,0,0,1"));  // x y = z^4 - 1
}  // namespace

TEST_CASE("surface: construction enforces simple zeros and degree") {
  CHECK_THROWS_AS(Danielewski(ComplexPoly::parse("0,0,1")), std::invalid_argument);
  CHECK_THROWS_AS(Danielewski(ComplexPoly::parse("5")), std::invalid_argument);
  CHECK(kS4.degree() == 4);
}

TEST_CASE("surface: containment") {
  CHECK(kS2.contains({cnum(1.0), cnum(-1.0), cnum(0.0)}, 1e-9));
  CHECK_FALSE(kS2.contains({cnum(1.0), cnum(1.0), cnum(0.0)}, 1e-9));
  // z0 = 2 solves z^4 = 16, and 2 * 7.5 = 15 = 16 - 1
  CHECK(kS4.contains({cnum(2.0), cnum(7.5), cnum(2.0)}, 1e-9));
}

TEST_CASE("surface: projection") {
  const auto [a0, b0] = project({cnum(1.0), cnum(-1.0), cnum(0.0)});
  CHECK(a0 == cnum(0.0));
  CHECK(b0 == cnum(0.0));
  const auto [a1, b1] = project({cnum(2.0), cnum(7.5), cnum(2.0)});
  CHECK(a1 == cnum(9.5));
  CHECK(b1 == cnum(2.0));

  // pi is symmetric in x and y
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const SurfacePoint p = kS4.random_point(1.0, rng);
    const SurfacePoint q{p.y, p.x, p.z};
    CHECK(project(p) == project(q));
  }
}

TEST_CASE("surface: fiber solves the quadratic on both sheets") {
  const auto [p1, p2] = kS2.fiber(cnum(0.0), cnum(0.0));
  CHECK(std::abs(p1.x * p2.x + cnum(1.0)) < 1e-14);  // roots of t^2 - 1 ... product -?
  CHECK(std::abs(p1.x + p2.x) < 1e-14);              // sum 0
  CHECK(kS2.contains(p1, 1e-9));
  CHECK(kS2.contains(p2, 1e-9));

  // recovers {2, 7.5} over (9.5, 2) on the quartic surface
  const auto [q1, q2] = kS4.fiber(cnum(9.5), cnum(2.0));
  const double lo = std::min(std::abs(q1.x), std::abs(q2.x));
  const double hi = std::max(std::abs(q1.x), std::abs(q2.x));
  CHECK(std::abs(hi - 7.5) < 1e-10);
  CHECK(std::abs(lo - 2.0) < 1e-10);

  // the two orderings are exact swaps of one another
  CHECK(q1.x == q2.y);
  CHECK(q1.y == q2.x);
  CHECK(q1.z == q2.z);
}

TEST_CASE("surface: fiber of the projection returns the unordered pair") {
  Rng rng(9);
  int tested = 0;
  while (tested < 100) {
    const SurfacePoint p = kS4.random_point(1.5, rng);
    const auto [a, b] = project(p);
    // stay away from the ramification locus by a margin
    const cnum disc = a * a - 4.0 * kS4.poly()(b);
    if (std::abs(disc) < 1e-6) continue;
    const auto [f1, f2] = kS4.fiber(a, b);
    const double scale = 1.0 + std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double d1 = std::max({std::abs(f1.x - p.x), std::abs(f1.y - p.y),
                                std::abs(f1.z - p.z)});
    const double d2 = std::max({std::abs(f2.x - p.x), std::abs(f2.y - p.y),
                                std::abs(f2.z - p.z)});
    CHECK(std::min(d1, d2) < 1e-10 * scale);
    ++tested;
  }
}

TEST_CASE("surface: random points are reproducible and on the surface") {
  Rng rng(42);
  const SurfacePoint p = kS4.random_point(1.0, rng);
  Rng rng2(42);
  const SurfacePoint q = kS4.random_point(1.0, rng2);
  CHECK(p.x == q.x);
  CHECK(p.y == q.y);
  CHECK(p.z == q.z);

  Rng rng3(7);
  for (int i = 0; i < 200; ++i)
    CHECK(kS4.contains(kS4.random_point(2.0, rng3), 1e-9));
}

TEST_CASE("surface: mean projection norm grows linearly in scale") {
  // |pi(P)| = |(a, b)| is Gaussian-norm distributed, so doubling the scale
  // doubles the mean.
  auto mean_pi = [&](double scale, std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const SurfacePoint p = kS4.random_point(scale, rng);
      const auto [a, b] = project(p);
      sum += std::sqrt(std::norm(a) + std::norm(b));
    }
    return sum / n;
  };
  const double m1 = mean_pi(1.0, 123);
  const double m2 = mean_pi(2.0, 456);
  CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("surface: xz chart") {
  const SurfacePoint p = kS2.chart_xz(cnum(1.0), cnum(0.0));
  CHECK(p.x == cnum(1.0));
  CHECK(p.y == cnum(-1.0));
  CHECK(p.z == cnum(0.0));
  CHECK(kS2.contains(p, 1e-12));

  const SurfacePoint q = kS4.chart_xz(cnum(2.0), cnum(2.0));
  CHECK(q.y == cnum(7.5));
  CHECK_THROWS_AS(kS4.chart_xz(cnum(0.0), cnum(1.0)), std::invalid_argument);
}

TEST_CASE("surface: exhaustion radius tau") {
  CHECK(tau({cnum(1.0), cnum(-1.0), cnum(0.0)}) ==
        -std::numeric_limits<double>::infinity());
  CHECK(tau({cnum(0.5), cnum(0.5), cnum(0.0)}) == doctest::Approx(0.0));  // pi = (1,0)
  CHECK(tau({cnum(1.0), cnum(2.0), cnum(4.0)}) == doctest::Approx(std::log(5.0)));
}
