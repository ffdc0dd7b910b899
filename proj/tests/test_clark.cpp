#include <doctest.h>

#include <numbers>

#include "bidisk/clark.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/profiles.hpp"

using namespace bidisk;

namespace {
const cplx I(0.0, 1.0);
const double kPi = std::numbers::pi;
}  // namespace

TEST_SUITE("clark") {
  TEST_CASE("z1 z2 measure") {
    const ClarkMeasureQuad mu = buildClarkMeasure(rifZW(), 1.0, 256);
    REQUIRE(mu.nodes.size() == 256);
    for (const auto& n : mu.nodes) {
      CHECK(std::abs(n.z2 - std::conj(n.z1)) < 1e-14);
      CHECK(std::abs(n.weight - 1.0) < 1e-14);
    }
    CHECK(std::abs(totalMass(mu) - 1.0) < 1e-14);
    CHECK(std::abs(integrate(mu, [](cplx, cplx) { return cplx(1.0); }) - 1.0) < 1e-14);
    CHECK(std::abs(integrate(mu, [](cplx a, cplx) { return a; })) < 1e-14);
    const ClarkMeasureQuad mi = buildClarkMeasure(rifZW(), I, 256);
    CHECK(std::abs(integrate(mi, [](cplx a, cplx b) { return a * b; }) - I) < 1e-14);
  }

  TEST_CASE("fave measure") {
    const ClarkMeasureQuad mu = buildClarkMeasure(rifFave(), I, 512);
    CHECK(mu.branches.branches.size() == 1);
    CHECK(std::abs(totalMass(mu) - 1.0) < 1e-8);
    for (const auto& n : mu.nodes) CHECK(n.mass >= 0.0);
    // the node at xi = 1 sits on the singular point
    CHECK(mu.excluded.size() == 1);
    CHECK(mu.massDeficitEstimate < 1e-3 * totalMass(mu));
    CHECK_THROWS_AS(buildClarkMeasure(rifFave(), -1.0, 256), ExceptionalAlphaError);
  }

  TEST_CASE("mass identity with phi(0) != 0") {
    const Rif b = rifBlaschke2();
    for (double t : {0.3, 1.9, -2.2}) {
      const cplx alpha = std::polar(1.0, t);
      const double expected = (1.0 - 1.0 / 16.0) / std::norm(alpha - 0.25);
      CHECK(std::abs(massIdentity(b, alpha) - expected) < 1e-14);
      CHECK(std::abs(totalMass(buildClarkMeasure(b, alpha, 1024)) - expected) < 1e-10);
    }
  }

  TEST_CASE("Poisson identity") {
    CHECK(poissonResidual(buildClarkMeasure(rifZW(), 1.0, 256), rifZW(), 0.0, 0.0) < 1e-12);
    CHECK(poissonResidual(buildClarkMeasure(rifZW(), I, 1024), rifZW(), 0.3, 0.2 * I) < 1e-8);
    CHECK(poissonResidual(buildClarkMeasure(rifFave(), I, 4096), rifFave(), 0.5, 0.5) < 1e-6);
    CHECK_THROWS_AS(poissonResidual(buildClarkMeasure(rifZW(), I, 256), rifZW(), 1.0, 0.0), DomainError);
    CHECK(std::abs(poissonKernel(0.0, I) - 1.0) < 1e-15);
  }

  TEST_CASE("disintegration") {
    CHECK(disintegrationResidual(rifZW(), [](cplx, cplx) { return cplx(1.0); }, 16, 256) < 1e-12);
    CHECK(disintegrationResidual(rifZW(), [](cplx a, cplx) { return cplx(a.real()); }, 64, 256) < 1e-10);
    // fave: alpha values near the exceptional -1 dominate; the residual shrinks with N and is
    // small once the sampled alphas keep away from -1
    auto f = [](cplx a, cplx b) { return cplx(std::norm(a + b)); };
    const double r1024 = disintegrationResidual(rifFave(), f, 64, 1024);
    const double r4096 = disintegrationResidual(rifFave(), f, 64, 4096);
    CHECK(r4096 < r1024);
    CHECK(disintegrationResidual(rifFave(), f, 16, 4096) < 1e-3);
  }

  TEST_CASE("support geometry") {
    const ClarkMeasureQuad a = buildClarkMeasure(rifZW(), 1.0, 1024);
    const ClarkMeasureQuad b = buildClarkMeasure(rifZW(), I, 1024);
    // parallel lines theta2 = -theta1 + c, offsets differing by pi/2
    CHECK(std::abs(supportDistance(a, b) - kPi / 2 / std::sqrt(2.0)) < 2 * kPi / 1024);
    CHECK(supportDistance(a, a) == 0.0);

    const ClarkMeasureQuad f1 = buildClarkMeasure(rifFave(), 1.0, 8192);
    const ClarkMeasureQuad fi = buildClarkMeasure(rifFave(), I, 8192);
    CHECK(supportDistance(f1, fi) < 1e-5);
    const auto meet = supportIntersections(f1, fi, 1e-5);
    CHECK_FALSE(meet.empty());
    for (const auto& p : meet) CHECK(torusDistance(p, {1.0, 1.0}) < 1e-2);
  }

  TEST_CASE("epsilon boxes") {
    const ClarkMeasureQuad mu = buildClarkMeasure(rifZW(), 1.0, 4096);
    const double m2 = epsilonBoxMass(mu, 1.0, 1.0, 0.2);
    CHECK(std::abs(m2 - 0.2 / (2 * kPi)) < 2.0 / 4096);
    const double m1 = epsilonBoxMass(mu, 1.0, 1.0, 0.1);
    CHECK(std::abs(m2 / m1 - 2.0) < 0.1);
    CHECK(epsilonBoxMass(mu, 1.0, 1.0, 7.0) == doctest::Approx(totalMass(mu)));

    const ClarkMeasureQuad b = buildClarkMeasure(rifBlaschke2(), I, 4096);
    const ClarkNode& n = b.nodes[700];
    const double e2 = epsilonBoxMass(b, n.z1, n.z2, 0.1), e1 = epsilonBoxMass(b, n.z1, n.z2, 0.05);
    CHECK(std::abs(e2 / e1 - 2.0) < 0.1);
  }
}
