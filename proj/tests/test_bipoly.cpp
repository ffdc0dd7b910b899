#include <doctest.h>

#include <random>

#include "bidisk/bipoly.hpp"
#include "bidisk/errors.hpp"

using namespace bidisk;

namespace {

const cplx I(0.0, 1.0);

BiPoly fave() { return BiPoly(1, 1, {2.0, -1.0, -1.0, 0.0}); }

BiPoly randomPoly(std::mt19937& g, int n1, int n2) {
  std::normal_distribution<double> d;
  std::vector<cplx> c((n1 + 1) * (n2 + 1));
  for (auto& x : c) x = {d(g), d(g)};
  return BiPoly(n1, n2, c);
}

}  // namespace

TEST_SUITE("bipoly") {
  TEST_CASE("evaluation") {
    CHECK(std::abs(fave().eval(1.0, 1.0)) == 0.0);
    CHECK(fave().eval(0.0, 0.0) == cplx(2.0));
    CHECK(std::abs(BiPoly::monomial(1, 1).eval(I, I) - cplx(-1.0)) < 1e-15);
    CHECK(eval(fave(), 0.5, 0.25) == cplx(1.25));
  }

  TEST_CASE("bidegree invariant") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(BiPoly{m}, DomainError);
    const BiPoly t = BiPoly::fromTrimmed(m);
    CHECK(t.n1() == 0);
    CHECK(t.n2() == 1);
    CHECK(BiPoly().isZero());
  }

  TEST_CASE("reflection examples") {
    const BiPoly r = reflect(fave());
    CHECK(r.n1() == 1);
    CHECK(r.n2() == 1);
    CHECK(std::abs(r(0, 0)) <= 1e-14);
    CHECK(std::abs(r(1, 0) + 1.0) <= 1e-14);
    CHECK(std::abs(r(0, 1) + 1.0) <= 1e-14);
    CHECK(std::abs(r(1, 1) - 2.0) <= 1e-14);

    const BiPoly one = reflect(BiPoly::constant(1.0));
    CHECK(one.n1() == 0);
    CHECK(one(0, 0) == cplx(1.0));

    const BiPoly r2 = reflect(BiPoly(1, 0, {2.0, -1.0}));
    CHECK(r2(0, 0) == cplx(-1.0));
    CHECK(r2(1, 0) == cplx(2.0));

    CHECK_THROWS_AS(reflect(BiPoly()), DomainError);
  }

  TEST_CASE("reflection is an involution and matches the evaluation identity") {
    std::mt19937 g(7);
    for (int t = 0; t < 50; ++t) {
      const int n1 = t % 5, n2 = (t / 5) % 5;
      const BiPoly p = randomPoly(g, n1, n2);
      const BiPoly rr = reflect(reflect(p));
      CHECK((rr.coeffs() - p.coeffs()).cwiseAbs().maxCoeff() <= 1e-14 * p.scale());
      const cplx z1 = std::polar(0.7, 0.3 * t), z2 = std::polar(1.3, -0.2 * t);
      const cplx lhs = reflect(p).eval(z1, z2);
      const cplx rhs = std::pow(z1, n1) * std::pow(z2, n2) * std::conj(p.eval(1.0 / std::conj(z1), 1.0 / std::conj(z2)));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }

  TEST_CASE("slices") {
    const UniPoly s = slice(fave(), 1, 1.0);
    REQUIRE(s.degree() == 1);
    CHECK(std::abs(s.coeffs[0] - 1.0) < 1e-15);
    CHECK(std::abs(s.coeffs[1] + 1.0) < 1e-15);

    CHECK(slice(BiPoly::monomial(1, 1), 1, 0.0).isZero());

    const UniPoly s2 = slice(reflect(fave()), 2, I);
    REQUIRE(s2.degree() == 1);
    CHECK(std::abs(s2.coeffs[0] + I) < 1e-15);
    CHECK(std::abs(s2.coeffs[1] - (2.0 * I - 1.0)) < 1e-15);

    std::mt19937 g(3);
    const BiPoly p = randomPoly(g, 3, 4);
    for (int k = 0; k < 10; ++k) {
      const cplx xi = std::polar(0.9, 0.7 * k), w = std::polar(1.1, -0.4 * k);
      CHECK(std::abs(slice(p, 1, xi).eval(w) - p.eval(xi, w)) < 1e-13 * p.scale() * 10);
      CHECK(std::abs(slice(p, 2, xi).eval(w) - p.eval(w, xi)) < 1e-13 * p.scale() * 10);
    }
  }

  TEST_CASE("roots") {
    auto r1 = roots(UniPoly{{1.0, -1.0}});
    REQUIRE(r1.size() == 1);
    CHECK(std::abs(r1[0] - 1.0) < 1e-14);

    auto r2 = roots(UniPoly{{1.0, 0.0, 1.0}});
    REQUIRE(r2.size() == 2);
    CHECK(std::abs(r2[0] - I) < 1e-14);  // argument pi/2 before 3pi/2
    CHECK(std::abs(r2[1] + I) < 1e-14);

    CHECK_THROWS_AS(roots(UniPoly{}), DomainError);

    // fave level slice at alpha = i against the closed-form parameterization
    const cplx alpha = I;
    const BiPoly lvl = reflect(fave()) - alpha * fave();
    for (int k = 0; k < 8; ++k) {
      const cplx xi = std::polar(1.0, 0.4 + 0.7 * k);
      const auto r = roots(slice(lvl, 1, xi));
      REQUIRE(r.size() == 1);
      const cplx g = (2.0 * alpha - alpha * xi + xi) / (2.0 * xi - 1.0 + alpha);
      CHECK(std::abs(r[0] - g) < 1e-12);
    }

    // reconstruction for random degree <= 12
    std::mt19937 g(11);
    std::normal_distribution<double> d;
    for (int n = 1; n <= 12; ++n) {
      std::vector<cplx> c(n + 1);
      for (auto& x : c) x = {d(g), d(g)};
      const UniPoly q{c};
      const auto r = roots(q);
      REQUIRE(static_cast<int>(r.size()) == n);
      for (int t = 0; t < 5; ++t) {
        const cplx z = std::polar(0.8, 1.1 * t);
        cplx prod = c.back();
        for (const cplx& x : r) prod *= (z - x);
        CHECK(std::abs(prod - q.eval(z)) < 1e-10 * std::max(1.0, std::abs(q.eval(z))) * 10);
      }
    }
  }

  TEST_CASE("stability") {
    CHECK(isStable(fave()).stable);
    CHECK(isStable(fave()).sampled);
    CHECK_FALSE(isStable(BiPoly(1, 0, {1.0, -2.0})).stable);
    CHECK(isStable(BiPoly::constant(1.0)).stable);
    CHECK(isStable(BiPoly(1, 1, {3.0, -1.0, -1.0, 0.0})).stable);
  }

  TEST_CASE("partial derivatives") {
    const BiPoly a = partial(BiPoly::monomial(1, 1), 2);
    CHECK(a.n1() == 1);
    CHECK(a.n2() == 0);
    CHECK(a(1, 0) == cplx(1.0));
    const BiPoly b = partial(fave(), 1);
    CHECK(b.n1() == 0);
    CHECK(b.n2() == 0);
    CHECK(b(0, 0) == cplx(-1.0));
    const BiPoly c = partial(reflect(fave()), 2);
    CHECK(c(0, 0) == cplx(-1.0));
    CHECK(c(1, 0) == cplx(2.0));
  }

  TEST_CASE("arithmetic") {
    const BiPoly p = fave(), q = reflect(fave());
    const cplx z1(0.3, 0.1), z2(-0.2, 0.5);
    CHECK(std::abs((p * q).eval(z1, z2) - p.eval(z1, z2) * q.eval(z1, z2)) < 1e-14);
    CHECK(std::abs((p - q).eval(z1, z2) - (p.eval(z1, z2) - q.eval(z1, z2))) < 1e-14);
    CHECK((p - p).isZero());
    CHECK(std::abs(p.swapped().eval(z1, z2) - p.eval(z2, z1)) < 1e-15);
  }
}
