#include "bidisk/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

int nextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// phi on the boundary grid; nudged radially inward if the denominator vanishes there
cplx phiGrid(const Rif& phi, cplx z1, cplx z2) {
  const cplx pv = phi.p.eval(z1, z2);
  if (std::abs(pv) > 1e-12 * phi.scale()) return phi.q.eval(z1, z2) / pv;
  const double r = 1.0 - 1e-9;
  return phi.value(r * z1, r * z2);
}

Eigen::MatrixXcd vandermonde(const std::vector<cplx>& z, int D) {
  Eigen::MatrixXcd M(z.size(), D + 1);
  for (size_t r = 0; r < z.size(); ++r) {
    cplx w = 1.0;
    for (int k = 0; k <= D; ++k) {
      M(r, k) = w;
      w *= z[r];
    }
  }
  return M;
}

// Visits the G x G grid in blocks of z1-rows. Row index of a block is a + rows * b.
struct GridBlock {
  int a0 = 0, rows = 0;
  Eigen::MatrixXcd U;          // (rows*G) x d basis values
  Eigen::VectorXcd z1, z2;     // flattened coordinates
  Eigen::VectorXcd phiValues;  // flattened phi
};

void forEachGridBlock(const Rif& phi, const KphiBasis& B, int G,
                      const std::function<void(const GridBlock&)>& visit) {
  const int D = B.D, d = B.size(), D1 = D + 1;
  const auto ang = gridAngles(G);
  std::vector<cplx> zs(G);
  for (int a = 0; a < G; ++a) zs[a] = std::polar(1.0, ang[a]);
  const Eigen::MatrixXcd Z = vandermonde(zs, D);  // G x (D+1)
  // TV(k, i*G + b) = sum_l V_i(k,l) zeta2_b^l
  Eigen::MatrixXcd TV(D1, static_cast<Eigen::Index>(G) * d), TG(D1, static_cast<Eigen::Index>(G) * d);
  for (int i = 0; i < d; ++i) {
    const Eigen::MatrixXcd Cv = Eigen::Map<const Eigen::MatrixXcd>(B.V.col(i).data(), D1, D1).transpose();
    const Eigen::MatrixXcd Cg = Eigen::Map<const Eigen::MatrixXcd>(B.Gc.col(i).data(), D1, D1).transpose();
    // column-major map of a row-major (k,l) vector gives (l,k); transpose restores (k,l)
    TV.middleCols(static_cast<Eigen::Index>(i) * G, G) = Cv * Z.transpose();
    TG.middleCols(static_cast<Eigen::Index>(i) * G, G) = Cg * Z.transpose();
  }
  const Eigen::VectorXd invSqrt = B.lambda.cwiseSqrt().cwiseInverse();
  const int blockRows = std::max(1, std::min(G, 32768 / G));
  GridBlock blk;
  for (int a0 = 0; a0 < G; a0 += blockRows) {
    const int rows = std::min(blockRows, G - a0);
    const Eigen::MatrixXcd Z1 = Z.middleRows(a0, rows);
    Eigen::MatrixXcd XV = Z1 * TV, XG = Z1 * TG;  // rows x (G*d)
    const Eigen::Index n = static_cast<Eigen::Index>(rows) * G;
    blk.a0 = a0;
    blk.rows = rows;
    blk.z1.resize(n);
    blk.z2.resize(n);
    blk.phiValues.resize(n);
    for (int b = 0; b < G; ++b)
      for (int a = 0; a < rows; ++a) {
        const Eigen::Index r = a + static_cast<Eigen::Index>(rows) * b;
        blk.z1(r) = zs[a0 + a];
        blk.z2(r) = zs[b];
        blk.phiValues(r) = phiGrid(phi, zs[a0 + a], zs[b]);
      }
    Eigen::Map<Eigen::MatrixXcd> MV(XV.data(), n, d), MG(XG.data(), n, d);
    blk.U = (MV - blk.phiValues.asDiagonal() * MG) * invSqrt.asDiagonal();
    visit(blk);
  }
}

}  // namespace

TruncatedHardy makeTruncatedHardy(int D, int G, bool singular) {
  if (D < 0) throw DomainError("negative degree cutoff");
  TruncatedHardy s;
  s.D = D;
  if (G == 0) {
    G = nextPowerOfTwo(std::max(2 * D + 2, 64));
    if (singular) G *= 2;
  }
  if (!isPowerOfTwo(G) || G < 2 * D + 2) throw DomainError("grid size must be a power of two >= 2D+2");
  s.G = G;
  return s;
}

std::vector<double> gridAngles(int G) {
  std::vector<double> t(G);
  for (int k = 0; k < G; ++k) t[k] = kTwoPi * (k + 0.5) / G;
  return t;
}

Eigen::MatrixXcd taylorCoefficients(const Rif& phi, int n) {
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  const cplx p00 = phi.p(0, 0);
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      cplx acc = phi.q(k, l);
      for (int a = 0; a <= std::min(k, phi.p.n1()); ++a)
        for (int b = 0; b <= std::min(l, phi.p.n2()); ++b)
          if (a || b) acc -= phi.p(a, b) * F(k - a, l - b);
      F(k, l) = acc / p00;
    }
  return F;
}

Eigen::MatrixXcd backwardShift(const Eigen::MatrixXcd& f, int axis) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
  if (axis == 1) out.topRows(f.rows() - 1) = f.bottomRows(f.rows() - 1);
  else if (axis == 2) out.leftCols(f.cols() - 1) = f.rightCols(f.cols() - 1);
  else throw DomainError("axis must be 1 or 2");
  return out;
}

KphiBasis projectKphi(const Rif& phi, const TruncatedHardy& space, double spectralCut) {
  const int D = space.D, n = space.dim();
  KphiBasis B;
  B.D = D;
  B.spectralCut = spectralCut;
  B.taylor = taylorCoefficients(phi, D);
  B.lower = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k <= D; ++k)
    for (int l = 0; l <= D; ++l)
      for (int k2 = 0; k2 <= k; ++k2)
        for (int l2 = 0; l2 <= l; ++l2) B.lower(space.index(k, l), space.index(k2, l2)) = B.taylor(k - k2, l - l2);
  B.projector = Eigen::MatrixXcd::Identity(n, n) - B.lower * B.lower.adjoint();
  const Eigen::MatrixXcd Qh = 0.5 * (B.projector + B.projector.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Qh);
  std::vector<int> keep;
  for (int i = n - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > spectralCut) keep.push_back(i);
  B.lambda.resize(keep.size());
  B.V.resize(n, keep.size());
  for (size_t j = 0; j < keep.size(); ++j) {
    B.lambda(j) = es.eigenvalues()(keep[j]);
    B.V.col(j) = es.eigenvectors().col(keep[j]);
  }
  B.Gc = B.lower.adjoint() * B.V;
  return B;
}

Eigen::MatrixXcd evalBasis(const Rif& phi, const KphiBasis& B, const std::vector<cplx>& z1,
                           const std::vector<cplx>& z2) {
  const int D = B.D, D1 = D + 1;
  const size_t n = z1.size();
  Eigen::MatrixXcd M(n, D1 * D1);
  Eigen::VectorXcd f(n);
  for (size_t r = 0; r < n; ++r) {
    cplx a = 1.0;
    for (int k = 0; k <= D; ++k) {
      cplx b = a;
      for (int l = 0; l <= D; ++l) {
        M(r, k * D1 + l) = b;
        b *= z2[r];
      }
      a *= z1[r];
    }
    f(r) = phi.value(z1[r], z2[r]);
  }
  return (M * B.V - f.asDiagonal() * (M * B.Gc)) * B.lambda.cwiseSqrt().cwiseInverse().asDiagonal();
}

Eigen::MatrixXcd evalBasisEdge(const Rif& phi, const KphiBasis& B, int axis, const std::vector<cplx>& w) {
  const std::vector<cplx> zero(w.size(), 0.0);
  if (axis == 1) return evalBasis(phi, B, zero, w);
  if (axis == 2) return evalBasis(phi, B, w, zero);
  throw DomainError("axis must be 1 or 2");
}

double projectorResidual(const Rif& phi, const KphiBasis& B, int G) {
  const int d = B.size();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d, d);
  forEachGridBlock(phi, B, G, [&](const GridBlock& blk) { gram.noalias() += blk.U.adjoint() * blk.U; });
  gram /= double(G) * double(G);
  return opNorm(gram - Eigen::MatrixXcd::Identity(d, d));
}

cplx psiAlphaAt(const Rif& phi, cplx alpha, int axis, cplx z1, cplx z2) {
  const cplx f = phiGrid(phi, z1, z2);
  const cplx ac = std::conj(alpha);
  if (axis == 1) {
    const cplx f0 = phi.value(0.0, z2);
    return ac * (f - f0) / z1 / (1.0 - ac * f0);
  }
  if (axis == 2) {
    const cplx f0 = phi.value(z1, 0.0);
    return ac * (f - f0) / z2 / (1.0 - ac * f0);
  }
  throw DomainError("axis must be 1 or 2");
}

PsiAlpha psiAlpha(const Rif& phi, cplx alpha, int axis, const TruncatedHardy& space) {
  // the grid avoids the poles, so unboundedness alone would go unnoticed
  if (isExceptional(phi, alpha)) throw ExceptionalAlphaError("alpha is exceptional for this function");
  PsiAlpha out;
  out.axis = axis;
  out.alpha = alpha;
  out.G = space.G;
  const auto ang = gridAngles(space.G);
  out.samples.resize(space.G, space.G);
  for (int a = 0; a < space.G; ++a)
    for (int b = 0; b < space.G; ++b) {
      const cplx v = psiAlphaAt(phi, alpha, axis, std::polar(1.0, ang[a]), std::polar(1.0, ang[b]));
      out.samples(a, b) = v;
      out.maxModulus = std::max(out.maxModulus, std::isfinite(std::abs(v)) ? std::abs(v) : 1e300);
    }
  if (out.maxModulus > 1e6) throw ExceptionalAlphaError("psi_alpha is unbounded on the grid");
  return out;
}

UnitaryPair clarkUnitaryPair(const Rif& phi, cplx alpha, const KphiBasis& B, const TruncatedHardy& space) {
  if (isExceptional(phi, alpha)) throw ExceptionalAlphaError("alpha is exceptional for this function");
  const int G = space.G, d = B.size();
  const auto ang = gridAngles(G);
  std::vector<cplx> zs(G);
  for (int a = 0; a < G; ++a) zs[a] = std::polar(1.0, ang[a]);
  const Eigen::MatrixXcd E1 = evalBasisEdge(phi, B, 1, zs);  // u_i(0, zeta2_b)
  const Eigen::MatrixXcd E2 = evalBasisEdge(phi, B, 2, zs);  // u_i(zeta1_a, 0)
  Eigen::MatrixXcd S1 = Eigen::MatrixXcd::Zero(d, d), S2 = S1, R1 = S1, R2 = S1;
  double psiMax = 0.0;
  forEachGridBlock(phi, B, G, [&](const GridBlock& blk) {
    const Eigen::Index n = blk.U.rows();
    Eigen::VectorXcd c1(n), c2(n);
    Eigen::MatrixXcd rep1(n, d), rep2(n, d);
    for (int b = 0; b < G; ++b)
      for (int a = 0; a < blk.rows; ++a) {
        const Eigen::Index r = a + static_cast<Eigen::Index>(blk.rows) * b;
        const cplx p1 = psiAlphaAt(phi, alpha, 1, blk.z1(r), blk.z2(r));
        const cplx p2 = psiAlphaAt(phi, alpha, 2, blk.z1(r), blk.z2(r));
        psiMax = std::max({psiMax, std::abs(p1), std::abs(p2)});
        c1(r) = std::conj(p1);
        c2(r) = std::conj(p2);
        rep1.row(r) = E1.row(b);
        rep2.row(r) = E2.row(blk.a0 + a);
      }
    S1.noalias() += blk.U.adjoint() * (blk.z1.asDiagonal() * blk.U);
    S2.noalias() += blk.U.adjoint() * (blk.z2.asDiagonal() * blk.U);
    R1.noalias() += rep1.adjoint() * (c1.asDiagonal() * blk.U);
    R2.noalias() += rep2.adjoint() * (c2.asDiagonal() * blk.U);
  });
  if (!(psiMax <= 1e6)) throw ExceptionalAlphaError("psi_alpha is unbounded on the grid");
  const double w = 1.0 / (double(G) * double(G));
  UnitaryPair out;
  out.S1 = {S1 * w, "kphi", {}};
  out.S2 = {S2 * w, "kphi", {}};
  out.U1 = {(S1 + R1) * w, "kphi", {}};
  out.U2 = {(S2 + R2) * w, "kphi", {}};
  out.U1.residuals["psiMax"] = psiMax;
  out.U2.residuals["psiMax"] = psiMax;
  return out;
}

TruncatedOperator compressedShift(const Rif& phi, const KphiBasis& B, const TruncatedHardy& space, int axis) {
  const int G = space.G, d = B.size();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(d, d);
  forEachGridBlock(phi, B, G, [&](const GridBlock& blk) {
    const Eigen::VectorXcd& z = axis == 1 ? blk.z1 : blk.z2;
    S.noalias() += blk.U.adjoint() * (z.asDiagonal() * blk.U);
  });
  return {S / (double(G) * double(G)), "kphi", {}};
}

TruncatedOperator clarkUnitary(const Rif& phi, cplx alpha, int axis, const KphiBasis& B,
                               const TruncatedHardy& space) {
  if (axis != 1 && axis != 2) throw DomainError("axis must be 1 or 2");
  UnitaryPair pr = clarkUnitaryPair(phi, alpha, B, space);
  return axis == 1 ? pr.U1 : pr.U2;
}

Eigen::MatrixXcd embeddingJ(const Rif& phi, const KphiBasis& B, const ClarkMeasureQuad& mu) {
  std::vector<cplx> z1, z2;
  Eigen::VectorXd s(mu.nodes.size());
  for (size_t r = 0; r < mu.nodes.size(); ++r) {
    z1.push_back(mu.nodes[r].z1);
    z2.push_back(mu.nodes[r].z2);
    s(r) = std::sqrt(mu.nodes[r].mass);
  }
  return s.asDiagonal() * evalBasis(phi, B, z1, z2);
}

Eigen::VectorXcd adjointJ(const Rif& phi, const KphiBasis& B, const ClarkMeasureQuad& mu,
                          const Eigen::VectorXcd& h) {
  if (h.size() != static_cast<Eigen::Index>(mu.nodes.size())) throw DomainError("sample count mismatch");
  const int d = B.size();
  const int s = std::max(static_cast<int>(std::ceil(std::sqrt(double(d)))), B.D + 1);
  std::vector<cplx> z1, z2;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      z1.push_back(std::polar(0.5, kTwoPi * a / s));
      z2.push_back(std::polar(0.5, kTwoPi * b / s));
    }
  Eigen::VectorXcd y(z1.size());
  for (size_t r = 0; r < z1.size(); ++r) {
    cplx acc = 0.0;
    for (size_t j = 0; j < mu.nodes.size(); ++j) {
      const auto& nd = mu.nodes[j];
      acc += h(j) * nd.mass / ((1.0 - z1[r] * std::conj(nd.z1)) * (1.0 - z2[r] * std::conj(nd.z2)));
    }
    y(r) = (1.0 - std::conj(mu.alpha) * phi.value(z1[r], z2[r])) * acc;
  }
  const Eigen::MatrixXcd A = evalBasis(phi, B, z1, z2);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12)
    throw CollocationError("collocation matrix is ill-conditioned");
  return svd.solve(y);
}

Eigen::MatrixXcd probeSubspace(const KphiBasis& B, int Dp) {
  const int D = B.D, D1 = D + 1, m = std::min(Dp, D);
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(D1 * D1, (m + 1) * (m + 1));
  int c = 0;
  for (int k = 0; k <= m; ++k)
    for (int l = 0; l <= m; ++l) E(k * D1 + l, c++) = 1.0;
  const Eigen::MatrixXcd coords = B.lambda.cwiseSqrt().asDiagonal() * (B.V.adjoint() * E);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coords, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > 1e-8 * sv(0)) ++r;
  return svd.matrixU().leftCols(r);
}

double opNorm(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) return 0.0;
  if (A.rows() > 2 * A.cols()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  if (A.cols() > 2 * A.rows()) return opNorm(A.adjoint());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

double unitarityResidual(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& W) {
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  return std::max(opNorm((U.adjoint() * U - I) * W), opNorm((U * U.adjoint() - I) * W));
}

double commutationResidual(const Eigen::MatrixXcd& U1, const Eigen::MatrixXcd& U2, const Eigen::MatrixXcd& W) {
  return opNorm((U1 * U2 - U2 * U1) * W);
}

double commutationResidual(const TruncatedOperator& U1, const TruncatedOperator& U2, const Eigen::MatrixXcd& W) {
  if (U1.basisRef != U2.basisRef || U1.matrix.rows() != U2.matrix.rows())
    throw DomainError("operators act on different bases");
  return commutationResidual(U1.matrix, U2.matrix, W);
}

IntertwiningReport intertwiningResidual(const Eigen::MatrixXcd& J, const Eigen::MatrixXcd& U,
                                        const ClarkMeasureQuad& mu, int axis, const Eigen::MatrixXcd& W) {
  Eigen::VectorXcd m(mu.nodes.size());
  for (size_t r = 0; r < mu.nodes.size(); ++r) m(r) = axis == 1 ? mu.nodes[r].z1 : mu.nodes[r].z2;
  IntertwiningReport rep;
  rep.residual = opNorm((J * U - m.asDiagonal() * J) * W);
  rep.vForm = opNorm(J.adjoint() * m.conjugate().asDiagonal() - U.adjoint() * J.adjoint());
  return rep;
}

PPhiReport pPhiNecessity(const Rif& phi, cplx alpha, const KphiBasis& B, const TruncatedHardy& space) {
  const int D = B.D, G = space.G, d = B.size();
  const Eigen::MatrixXcd& F = B.taylor;
  double dep1 = 0.0, dep2 = 0.0, edge = 0.0;
  for (int k = 0; k <= D; ++k)
    for (int l = 0; l <= D; ++l) {
      if (k > 0) dep1 = std::max(dep1, std::abs(F(k, l)));
      if (l > 0) dep2 = std::max(dep2, std::abs(F(k, l)));
      if (k == 0) edge = std::max(edge, std::abs(F(k, l)));
    }
  if (dep1 < 1e-12 || dep2 < 1e-12) throw HypothesisError("phi must depend on both variables");
  PPhiReport rep;
  rep.crossCase = edge < 1e-12;

  // T(b, j) = sum_a conj(psi) u_j at (a, b)
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(G, d);
  forEachGridBlock(phi, B, G, [&](const GridBlock& blk) {
    for (int b = 0; b < G; ++b)
      for (int a = 0; a < blk.rows; ++a) {
        const Eigen::Index r = a + static_cast<Eigen::Index>(blk.rows) * b;
        const cplx c = std::conj(psiAlphaAt(phi, alpha, 1, blk.z1(r), blk.z2(r)));
        T.row(b) += c * blk.U.row(r);
      }
  });
  const auto ang = gridAngles(G);
  const int D1 = D + 1;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(D1 * D1, d);  // coefficients of P_{H^2_2} part, row k = 0
  for (int l = 0; l <= D; ++l)
    for (int b = 0; b < G; ++b) H.row(l) += std::polar(1.0, -l * ang[b]) * T.row(b);
  H /= double(G) * double(G);
  const Eigen::MatrixXcd out = B.lower.adjoint() * H;  // ||(I - P_phi) h|| = ||P_+(conj(phi) h)||
  for (int j = 0; j < d; ++j) rep.value = std::max(rep.value, out.col(j).norm());
  return rep;
}

ClarkModel buildClarkModel(const Rif& phi, cplx alpha, const ModelConfig& cfg) {
  ClarkModel m;
  m.cfg = cfg;
  m.space = makeTruncatedHardy(cfg.D, cfg.G, !phi.singular.points.empty());
  m.basis = projectKphi(phi, m.space, cfg.spectralCut);
  ClarkOptions co;
  co.exclusionRadius = cfg.exclusionRadius;
  m.mu = buildClarkMeasure(phi, alpha, cfg.N, co);
  m.ops = clarkUnitaryPair(phi, alpha, m.basis, m.space);
  m.J = embeddingJ(phi, m.basis, m.mu);
  m.W = probeSubspace(m.basis, cfg.probeDegree);

  auto& r = m.residuals;
  r["dim"] = m.basis.size();
  r["unitarity1"] = unitarityResidual(m.ops.U1.matrix, m.W);
  r["unitarity2"] = unitarityResidual(m.ops.U2.matrix, m.W);
  r["unitarity"] = std::max(r["unitarity1"], r["unitarity2"]);
  r["commutation"] = commutationResidual(m.ops.U1, m.ops.U2, m.W);
  const auto i1 = intertwiningResidual(m.J, m.ops.U1.matrix, m.mu, 1, m.W);
  const auto i2 = intertwiningResidual(m.J, m.ops.U2.matrix, m.mu, 2, m.W);
  r["intertwining1"] = i1.residual;
  r["intertwining2"] = i2.residual;
  r["intertwining"] = std::max(i1.residual, i2.residual);
  r["vform1"] = i1.vForm;
  r["vform2"] = i2.vForm;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.J);
  const auto& sv = svd.singularValues();
  r["isometry"] = std::max(std::abs(sv(0) - 1.0), std::abs(sv(sv.size() - 1) - 1.0));
  r["commutationFull"] = opNorm(m.ops.U1.matrix * m.ops.U2.matrix - m.ops.U2.matrix * m.ops.U1.matrix);
  for (auto* op : {&m.ops.U1, &m.ops.U2}) {
    op->residuals["unitarity"] = op == &m.ops.U1 ? r["unitarity1"] : r["unitarity2"];
    op->residuals["commutation"] = r["commutation"];
    op->residuals["intertwining"] = op == &m.ops.U1 ? r["intertwining1"] : r["intertwining2"];
  }
  return m;
}

}  // namespace bidisk
