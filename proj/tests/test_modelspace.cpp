#include <doctest.h>

#include <random>

#include "bidisk/errors.hpp"
#include "bidisk/modelspace.hpp"
#include "bidisk/profiles.hpp"

using namespace bidisk;

namespace {
const cplx I(0.0, 1.0);

Eigen::MatrixXcd polyMul(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, int n) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) c(i + k, j + l) += a(i, j) * b(k, l);
  return c;
}

Eigen::MatrixXcd padded(const Eigen::MatrixXcd& a, int n) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  c.topLeftCorner(a.rows(), a.cols()) = a;
  return c;
}

// basis coordinates of f by projection on the boundary grid, plus the fit residual
std::pair<Eigen::VectorXcd, double> coordinates(const Rif& phi, const KphiBasis& B, int G,
                                                const std::function<cplx(cplx, cplx)>& f) {
  const auto ang = gridAngles(G);
  std::vector<cplx> z1, z2;
  for (double a : ang)
    for (double b : ang) {
      z1.push_back(std::polar(1.0, a));
      z2.push_back(std::polar(1.0, b));
    }
  const Eigen::MatrixXcd A = evalBasis(phi, B, z1, z2);
  Eigen::VectorXcd F(z1.size());
  for (size_t r = 0; r < z1.size(); ++r) F(r) = f(z1[r], z2[r]);
  const Eigen::VectorXcd c = A.adjoint() * F / (double(G) * G);
  return {c, (A * c - F).norm() / F.norm()};
}

// u_i = v_i for z1 z2, so monomial coordinates are V U V^*
Eigen::MatrixXcd inMonomials(const KphiBasis& B, const Eigen::MatrixXcd& U) { return B.V * U * B.V.adjoint(); }

std::vector<ClarkModel> faveLevels() {
  std::vector<ClarkModel> out;
  for (int D : {8, 12, 16}) out.push_back(buildClarkModel(rifFave(), I, {D, 256, 4096, 2, 0.5, 1e-4}));
  return out;
}
}  // namespace

TEST_SUITE("modelspace") {
  TEST_CASE("backward shift") {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(3, 3);
    f(1, 1) = 1.0;
    Eigen::MatrixXcd z2 = Eigen::MatrixXcd::Zero(3, 3);
    z2(0, 1) = 1.0;
    CHECK((backwardShift(f, 1) - z2).norm() < 1e-15);
    Eigen::MatrixXcd sq = Eigen::MatrixXcd::Zero(3, 3);
    sq(0, 2) = 1.0;
    CHECK(backwardShift(sq, 1).norm() == 0.0);
    CHECK_THROWS_AS(backwardShift(sq, 3), DomainError);

    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXcd a(4, 4), b(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          a(i, j) = {g(rng), g(rng)};
          b(i, j) = {g(rng), g(rng)};
        }
      const int n = 6;
      // B1(fg) = f B1 g + g(0, .) B1 f
      Eigen::MatrixXcd b0 = Eigen::MatrixXcd::Zero(4, 4);
      b0.row(0) = b.row(0);
      const Eigen::MatrixXcd lhs = backwardShift(polyMul(a, b, n), 1);
      const Eigen::MatrixXcd rhs = polyMul(a, backwardShift(padded(b, 3), 1), n) +
                                   polyMul(b0, backwardShift(padded(a, 3), 1), n);
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }

  TEST_CASE("model space bases") {
    const KphiBasis zw = projectKphi(rifZW(), makeTruncatedHardy(4));
    CHECK(zw.size() == 9);
    const TruncatedHardy s4 = makeTruncatedHardy(4);
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) CHECK(zw.V.row(s4.index(k, l)).norm() < 1e-12);
    CHECK((zw.V.adjoint() * zw.V - Eigen::MatrixXcd::Identity(9, 9)).norm() < 1e-10);

    const Rif z1 = makeRif(BiPoly::constant(1.0), {1, 0});
    const TruncatedHardy s6 = makeTruncatedHardy(6);
    const KphiBasis b1 = projectKphi(z1, s6);
    CHECK(b1.size() == 7);
    for (int k = 1; k <= 6; ++k)
      for (int l = 0; l <= 6; ++l) CHECK(b1.V.row(s6.index(k, l)).norm() < 1e-12);

    // retained subspace: Q is self-adjoint and nearly idempotent there
    const KphiBasis fb = projectKphi(rifFave(), makeTruncatedHardy(8, 64));
    CHECK((fb.projector - fb.projector.adjoint()).norm() < 1e-12);
    CHECK((fb.V.adjoint() * fb.V - Eigen::MatrixXcd::Identity(fb.size(), fb.size())).norm() < 1e-10);

    // the fave symbol is discontinuous, so the grid Gram residual converges slowly
    const double r64 = projectorResidual(rifFave(), fb, 64);
    const double r128 = projectorResidual(rifFave(), fb, 128);
    const double r256 = projectorResidual(rifFave(), fb, 256);
    MESSAGE("fave grid Gram residual: " << r64 << " " << r128 << " " << r256);
    CHECK(r128 < r64);
    CHECK(r256 < r128);
    CHECK(projectorResidual(rifZW(), zw, 64) < 1e-12);

    for (const Rif& phi : {rifZW(), rifFave(), rifBlaschke2(), rifCross()}) {
      int prev = 0;
      for (int D : {4, 6, 8}) {
        const int d = projectKphi(phi, makeTruncatedHardy(D)).size();
        CHECK(d > prev);
        prev = d;
      }
    }
    CHECK_THROWS_AS(makeTruncatedHardy(8, 96), DomainError);
    CHECK(makeTruncatedHardy(40).G == 128);
    CHECK(makeTruncatedHardy(8, 0, true).G == 128);
  }

  TEST_CASE("compressed shifts and psi") {
    const TruncatedHardy s = makeTruncatedHardy(8);
    const KphiBasis B = projectKphi(rifZW(), s);
    const Eigen::MatrixXcd S1 = inMonomials(B, compressedShift(rifZW(), B, s, 1).matrix);
    const Eigen::MatrixXcd S2 = inMonomials(B, compressedShift(rifZW(), B, s, 2).matrix);
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dim());
      e(s.index(k + 1, 0)) = 1.0;
      CHECK((S1.col(s.index(k, 0)) - e).norm() < 1e-12);
      e.setZero();
      e(s.index(0, k + 1)) = 1.0;
      CHECK((S2.col(s.index(0, k)) - e).norm() < 1e-12);
    }
    for (int l = 1; l <= 8; ++l) {
      CHECK(S1.col(s.index(0, l)).norm() < 1e-12);
      CHECK(S2.col(s.index(l, 0)).norm() < 1e-12);
    }
    // <S1 f, g> = <f, B1 g> for f, g in K_phi of interior degree
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(s.dim()), h = f;
    for (int k = 0; k < 8; ++k) {
      f(s.index(k, 0)) = {g(rng), g(rng)};
      h(s.index(k, 0)) = {g(rng), g(rng)};
      f(s.index(0, k)) = {g(rng), g(rng)};
      h(s.index(0, k)) = {g(rng), g(rng)};
    }
    Eigen::MatrixXcd hm(9, 9);
    for (int k = 0; k <= 8; ++k)
      for (int l = 0; l <= 8; ++l) hm(k, l) = h(s.index(k, l));
    const Eigen::MatrixXcd bh = backwardShift(hm, 1);
    cplx rhs = 0.0;
    for (int k = 0; k <= 8; ++k)
      for (int l = 0; l <= 8; ++l) rhs += std::conj(bh(k, l)) * f(s.index(k, l));
    const cplx lhs = h.dot(S1 * f);
    CHECK(std::abs(lhs - rhs) < 1e-10);

    const cplx alpha = std::polar(1.0, 0.7);
    for (auto z : {std::pair<cplx, cplx>{0.3, 0.2 * I}, {cplx(-0.5, 0.1), 0.6}, {0.1 * I, cplx(0.4, -0.4)}}) {
      CHECK(std::abs(psiAlphaAt(rifZW(), alpha, 1, z.first, z.second) - std::conj(alpha) * z.second) < 1e-14);
      const cplx ac = std::conj(alpha), w1 = z.first, w2 = z.second;
      const cplx closed = 2.0 * ac / ((1.0 - ac) * w2 - 2.0) * ((w2 - 1.0) * (w2 - 1.0) / (2.0 - w1 - w2));
      CHECK(std::abs(psiAlphaAt(rifFave(), alpha, 1, w1, w2) - closed) < 1e-13);
    }
    CHECK(psiAlpha(rifFave(), I, 1, makeTruncatedHardy(8)).maxModulus < 1e6);
    CHECK_THROWS_AS(psiAlpha(rifFave(), -1.0, 1, makeTruncatedHardy(8)), ExceptionalAlphaError);
  }

  TEST_CASE("Clark unitaries for z1 z2") {
    const cplx alpha = std::polar(1.0, 1.1);
    const ClarkModel m = buildClarkModel(rifZW(), alpha, {8, 0, 1024, 2, 0.5, 1e-4});
    const TruncatedHardy& s = m.space;
    const Eigen::MatrixXcd U1 = inMonomials(m.basis, m.ops.U1.matrix);
    const Eigen::MatrixXcd U2 = inMonomials(m.basis, m.ops.U2.matrix);
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dim());
      e(s.index(k + 1, 0)) = 1.0;
      CHECK((U1.col(s.index(k, 0)) - e).norm() < 1e-12);
      e.setZero();
      e(s.index(0, k + 1)) = 1.0;
      CHECK((U2.col(s.index(0, k)) - e).norm() < 1e-12);
    }
    for (int l = 1; l <= 8; ++l) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dim());
      e(s.index(0, l - 1)) = alpha;
      CHECK((U1.col(s.index(0, l)) - e).norm() < 1e-12);
      e.setZero();
      e(s.index(l - 1, 0)) = alpha;
      CHECK((U2.col(s.index(l, 0)) - e).norm() < 1e-12);
    }
    CHECK(m.residuals.at("unitarity") < 1e-8);
    CHECK(m.residuals.at("commutation") < 1e-10);
    CHECK(m.residuals.at("isometry") < 1e-6);
    CHECK(m.residuals.at("intertwining") < 1e-6);
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(m.basis.size(), m.basis.size());
    CHECK(commutationResidual(Id, Id, m.W) == 0.0);
  }

  TEST_CASE("cross case splitting") {
    // phi = z1 psi(z2) with psi = (2 z2 - 1)/(2 - z2): K_phi = K_psi + psi H^2(z2), U1 = z1 on K_psi
    const Rif phi = rifCross();
    const TruncatedHardy s = makeTruncatedHardy(20, 128);
    const KphiBasis B = projectKphi(phi, s);
    const cplx alpha = std::polar(1.0, -0.4);
    const UnitaryPair ops = clarkUnitaryPair(phi, alpha, B, s);
    auto psi = [](cplx w) { return (2.0 * w - 1.0) / (2.0 - w); };
    for (int k : {0, 2, 5}) {
      auto f1 = [k](cplx a, cplx b) { return std::pow(a, k) / (1.0 - 0.5 * b); };
      auto z1f1 = [k](cplx a, cplx b) { return std::pow(a, k + 1) / (1.0 - 0.5 * b); };
      const auto [c, fit] = coordinates(phi, B, s.G, f1);
      const auto [c1, fit1] = coordinates(phi, B, s.G, z1f1);
      CHECK(fit < 1e-4);
      CHECK(fit1 < 1e-4);
      CHECK((ops.U1.matrix * c - c1).norm() < 1e-4 * c.norm());
    }
    // psi f2 goes to alpha f2
    for (int l : {0, 1, 4}) {
      auto psif2 = [&, l](cplx, cplx b) { return psi(b) * std::pow(b, l); };
      auto f2 = [l](cplx, cplx b) { return std::pow(b, l); };
      const auto [c, fit] = coordinates(phi, B, s.G, psif2);
      const auto [c2, fit2] = coordinates(phi, B, s.G, f2);
      CHECK(fit < 1e-4);
      CHECK(fit2 < 1e-4);
      CHECK((ops.U1.matrix * c - alpha * c2).norm() < 1e-4 * c.norm());
    }
  }

  TEST_CASE("Clark embedding") {
    const cplx alpha = std::polar(1.0, 0.3);
    const ClarkModel m = buildClarkModel(rifZW(), alpha, {16, 0, 1024, 2, 0.5, 1e-4});
    // J maps the coordinates conj(u_i(w)) of k^phi_w to (1 - alpha conj(phi(w))) k_w at the nodes
    const cplx w1 = 0.3, w2 = 0.2;
    const Eigen::VectorXcd c = evalBasis(rifZW(), m.basis, {w1}, {w2}).row(0).adjoint();
    const Eigen::VectorXcd Jc = m.J * c;
    const cplx factor = 1.0 - alpha * std::conj(rifZW().value(w1, w2));
    double err = 0.0;
    for (size_t r = 0; r < m.mu.nodes.size(); ++r) {
      const auto& nd = m.mu.nodes[r];
      const cplx k = 1.0 / ((1.0 - std::conj(w1) * nd.z1) * (1.0 - std::conj(w2) * nd.z2));
      err = std::max(err, std::abs(Jc(r) - std::sqrt(nd.mass) * factor * k));
    }
    CHECK(err < 1e-6);

    // <J z1, J z2> = 0
    const TruncatedHardy& s = m.space;
    const Eigen::VectorXcd a = m.J * m.basis.V.adjoint() * Eigen::VectorXcd::Unit(s.dim(), s.index(1, 0));
    const Eigen::VectorXcd b = m.J * m.basis.V.adjoint() * Eigen::VectorXcd::Unit(s.dim(), s.index(0, 1));
    CHECK(std::abs(b.dot(a)) < 1e-12);

    // adjoint by collocation agrees with J^* on a combination of basis functions
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    Eigen::VectorXcd coef(m.basis.size());
    for (auto& x : coef) x = {g(rng), g(rng)};
    Eigen::VectorXd sq(m.mu.nodes.size());
    for (size_t r = 0; r < m.mu.nodes.size(); ++r) sq(r) = std::sqrt(m.mu.nodes[r].mass);
    const Eigen::VectorXcd h = sq.cwiseInverse().asDiagonal() * (m.J * coef);
    const Eigen::VectorXcd viaAdj = adjointJ(rifZW(), m.basis, m.mu, h);
    const Eigen::VectorXcd viaJ = m.J.adjoint() * (sq.asDiagonal() * h);
    CHECK((viaAdj - viaJ).norm() < 1e-8 * coef.norm());
    CHECK((viaJ - coef).norm() < 1e-8 * coef.norm());

    const ClarkModel m1 = buildClarkModel(rifZW(), 1.0, {8, 0, 1024, 2, 0.5, 1e-4});
    const Eigen::VectorXcd one = adjointJ(rifZW(), m1.basis, m1.mu, Eigen::VectorXcd::Ones(m1.mu.nodes.size()));
    const cplx val = (evalBasis(rifZW(), m1.basis, {0.2}, {cplx(0.1, -0.3)}) * one)(0);
    CHECK(std::abs(val - 1.0) < 1e-8);
  }

  TEST_CASE("P_phi necessity") {
    const TruncatedHardy s = makeTruncatedHardy(12);
    const KphiBasis bz = projectKphi(rifZW(), s);
    CHECK(pPhiNecessity(rifZW(), I, bz, s).value < 1e-10);
    const KphiBasis bb = projectKphi(rifBlaschke2(), s);
    CHECK(pPhiNecessity(rifBlaschke2(), I, bb, s).value > 1e-3);
    const TruncatedHardy sf = makeTruncatedHardy(12, 0, true);
    const KphiBasis bf = projectKphi(rifFave(), sf);
    CHECK(pPhiNecessity(rifFave(), I, bf, sf).value > 1e-3);
    const KphiBasis bc = projectKphi(rifCross(), s);
    const PPhiReport rc = pPhiNecessity(rifCross(), I, bc, s);
    CHECK(rc.crossCase);
    CHECK(rc.value < 1e-10);
    const Rif z1 = makeRif(BiPoly::constant(1.0), {1, 0});
    CHECK_THROWS_AS(pPhiNecessity(z1, I, projectKphi(z1, s), s), HypothesisError);
  }

  TEST_CASE("fave refinement") {
    const auto levels = faveLevels();
    for (const char* key : {"unitarity", "commutation", "intertwining", "intertwining2"}) {
      MESSAGE(std::string(key) << ": " << levels[0].residuals.at(key) << " " << levels[1].residuals.at(key) << " "
                  << levels[2].residuals.at(key));
      CHECK(levels[1].residuals.at(key) < levels[0].residuals.at(key));
      CHECK(levels[2].residuals.at(key) < levels[1].residuals.at(key));
    }
    // fave is symmetric under z1 <-> z2
    for (const auto& m : levels)
      CHECK(std::abs(m.residuals.at("intertwining1") - m.residuals.at("intertwining2")) <
            0.25 * m.residuals.at("intertwining"));
    CHECK_THROWS_AS(buildClarkModel(rifFave(), -1.0, {8, 0, 1024, 2, 0.5, 1e-4}), ExceptionalAlphaError);
  }
}
