#include "bidisk/koszul.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd singularValues(const Eigen::MatrixXcd& M) {
  if (M.rows() * M.cols() > 4096) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues();
}

double norm2(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  return singularValues(M)(0);
}

// ref: the pair's own scale, so a delta made entirely of round-off has rank 0
int rankAbove(const Eigen::VectorXd& sv, double tol, double absTol, double ref, double* smin) {
  const double thr = std::max(tol * std::max(sv.size() ? sv(0) : 0.0, ref), absTol);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  if (smin) *smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  return r;
}

KoszulReport ranksUnchecked(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, cplx l1, cplx l2, double tol,
                            double absTol, double scale) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd d1(2 * n, n), d2(n, 2 * n);
  d1 << A - l1 * I, B - l2 * I;
  d2 << -(B - l2 * I), A - l1 * I;
  KoszulReport rep;
  rep.lambda1 = l1;
  rep.lambda2 = l2;
  rep.n = static_cast<int>(n);
  rep.tolerance = tol;
  rep.absTolerance = absTol;
  rep.rankDelta1 = rankAbove(singularValues(d1), tol, absTol, scale, &rep.sigmaMin1);
  rep.rankDelta2 = rankAbove(singularValues(d2), tol, absTol, scale, &rep.sigmaMin2);
  rep.singular = !(rep.rankDelta1 == n && rep.rankDelta2 == n);
  return rep;
}

std::string hashMatrices(std::initializer_list<const Eigen::MatrixXcd*> ms) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto* m : ms) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m->data());
    const size_t len = static_cast<size_t>(m->size()) * sizeof(cplx);
    for (size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Number of eigenvalues of diag(a) + Z C Z^* below zero, with C^{-1} = Cinv, via
// In(A + Z C Z^*) = In(A) + In(-C^{-1} - Z^* A^{-1} Z) - In(-C^{-1}).
int negativeCount(const Eigen::VectorXd& a, const Eigen::MatrixXcd& Z, const Eigen::MatrixXcd& Cinv) {
  int neg = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) < 0.0) ++neg;
  const Eigen::MatrixXcd S = -Cinv - Z.adjoint() * a.cwiseInverse().asDiagonal() * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(-Cinv, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es1.eigenvalues().size(); ++i)
    if (es1.eigenvalues()(i) < 0.0) ++neg;
  for (Eigen::Index i = 0; i < es2.eigenvalues().size(); ++i)
    if (es2.eigenvalues()(i) < 0.0) --neg;
  return neg;
}

template <class F>
void parallelRows(int n, F&& body) {
  const unsigned hw = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t)
    pool.emplace_back([&, t] {
      for (int i = static_cast<int>(t); i < n; i += static_cast<int>(hw)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

KoszulReport koszulRanks(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, cplx lambda1, cplx lambda2,
                         double tol, double absTol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw DomainError("Koszul pair must be square of equal size");
  const double comm = norm2(A * B - B * A);
  if (comm >= 1e-8 * std::max(norm2(A) * norm2(B), 1e-300) && comm > 0.0)
    throw CommutationError("matrices do not commute (residual " + std::to_string(comm) + ")");
  return ranksUnchecked(A, B, lambda1, lambda2, tol, absTol, std::max(norm2(A), norm2(B)));
}

std::vector<std::pair<cplx, cplx>> jointEigenvalues(const Eigen::MatrixXcd& A0, const Eigen::MatrixXcd& B0) {
  std::vector<std::pair<cplx, cplx>> out;
  Eigen::MatrixXcd A = A0, B = B0;
  const double scale = std::max({norm2(A0), norm2(B0), 1.0});
  while (A.rows() > 0) {
    const Eigen::Index n = A.rows();
    if (n == 1) {
      out.emplace_back(A(0, 0), B(0, 0));
      break;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esA(A, false);
    const cplx mu = esA.eigenvalues()(0);
    // eigenspace of A at mu: right singular vectors with small singular values
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A - mu * Eigen::MatrixXcd::Identity(n, n), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) > 1e-6 * scale) throw RefinementError("no eigenvector found at a computed eigenvalue");
    Eigen::Index k = 0;
    const double cut = std::max(1e-7 * scale, 100.0 * sv(n - 1));
    for (Eigen::Index i = 0; i < n; ++i)
      if (sv(i) <= cut) ++k;
    const Eigen::MatrixXcd Nsp = svd.matrixV().rightCols(k);
    const Eigen::MatrixXcd Bn = Nsp.adjoint() * B * Nsp;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esB(Bn, true);
    Eigen::VectorXcd v = Nsp * esB.eigenvectors().col(0);
    v.normalize();
    const cplx a = v.dot(A * v), b = v.dot(B * v);
    if ((A * v - a * v).norm() > 1e-6 * scale || (B * v - b * v).norm() > 1e-6 * scale)
      throw RefinementError("common eigenvector refinement failed");
    out.emplace_back(a, b);
    // deflate on the orthogonal complement of v
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd Wc = Q.rightCols(n - 1);
    A = Wc.adjoint() * A * Wc;
    B = Wc.adjoint() * B * Wc;
  }
  return out;
}

std::vector<std::pair<double, double>> SpectrumScan::maskedAngles() const {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < gridN; ++i)
    for (int j = 0; j < gridN; ++j)
      if (at(i, j)) out.emplace_back(angles[i], angles[j]);
  return out;
}

std::vector<double> scanAngles(int gridN) {
  std::vector<double> a(gridN);
  const double h = 2.0 * kPi / gridN;
  for (int k = 0; k < gridN; ++k) a[k] = -kPi + (k + 0.5) * h;
  return a;
}

double cellRadius(int gridN) {
  const double h = 2.0 * kPi / gridN;
  return std::sqrt(2.0) * 2.0 * std::sin(h / 4.0);
}

SpectrumScan taylorSpectrumOnTorus(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, int gridN, double tol,
                                   double widening) {
  if (gridN < 1) throw DomainError("grid size must be positive");
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  if (widening == 0.0) {
    if (norm2(A.adjoint() * A - I) > 1e-6 || norm2(B.adjoint() * B - I) > 1e-6)
      throw HypothesisError("scan inputs must be unitary to 1e-6");
    const double comm = norm2(A * B - B * A);
    if (comm > 1e-8 * std::max(norm2(A) * norm2(B), 1e-300))
      throw CommutationError("scan inputs do not commute");
  }
  SpectrumScan s;
  s.gridN = gridN;
  s.angles = scanAngles(gridN);
  s.tol = tol;
  s.widening = widening;
  s.absTol = cellRadius(gridN) * (1.0 + 1e-9) + widening;  // closed cells: corner points count
  s.mask.assign(static_cast<size_t>(gridN) * gridN, 0);
  s.inputHash = hashMatrices({&A, &B});
  // sigma_min of delta1/delta2 is 1-Lipschitz in lambda, so absTol covers the whole cell
  const double scale = std::max(norm2(A), norm2(B));
  std::vector<int> counts(gridN, 0);
  parallelRows(gridN, [&](int i) {
    const cplx l1 = std::polar(1.0, s.angles[i]);
    for (int j = 0; j < gridN; ++j) {
      const cplx l2 = std::polar(1.0, s.angles[j]);
      const KoszulReport r = ranksUnchecked(A, B, l1, l2, tol, s.absTol, scale);
      s.mask[static_cast<size_t>(i) * gridN + j] = r.singular ? 1 : 0;
      ++counts[i];
    }
  });
  for (int c : counts) s.evaluatedCells += c;
  return s;
}

SpectrumScan taylorSpectrumPerturbedDiagonal(const Eigen::VectorXcd& m1, const Eigen::VectorXcd& m2,
                                             const Eigen::MatrixXcd& X1, const Eigen::MatrixXcd& X2,
                                             const Eigen::MatrixXcd& Y, int gridN, double widening) {
  const Eigen::Index N = m1.size(), r = Y.cols();
  if (m2.size() != N || X1.rows() != N || X2.rows() != N || Y.rows() != N || X1.cols() != r || X2.cols() != r)
    throw DomainError("inconsistent perturbed-diagonal pair");
  SpectrumScan s;
  s.gridN = gridN;
  s.angles = scanAngles(gridN);
  s.tol = 0.0;
  s.widening = widening;
  s.absTol = cellRadius(gridN) * (1.0 + 1e-9) + widening;  // closed cells: corner points count
  s.mask.assign(static_cast<size_t>(gridN) * gridN, 0);
  s.inputHash = hashMatrices({&X1, &X2, &Y});
  const double e = (norm2(X1) + norm2(X2)) * norm2(Y);
  const double thr = s.absTol, thr2 = thr * thr;
  const Eigen::MatrixXcd YY = Y.adjoint() * Y;
  const Eigen::MatrixXcd K = X1.adjoint() * X1 + X2.adjoint() * X2;
  const Eigen::MatrixXcd Ir = Eigen::MatrixXcd::Identity(r, r);
  // C = [[K, I], [I, 0]]  ->  C^{-1} = [[0, I], [I, -K]]
  Eigen::MatrixXcd C1inv = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
  C1inv.topRightCorner(r, r) = Ir;
  C1inv.bottomLeftCorner(r, r) = Ir;
  C1inv.bottomRightCorner(r, r) = -K;
  Eigen::MatrixXcd C2inv = Eigen::MatrixXcd::Zero(4 * r, 4 * r);
  C2inv.topRightCorner(2 * r, 2 * r) = Eigen::MatrixXcd::Identity(2 * r, 2 * r);
  C2inv.bottomLeftCorner(2 * r, 2 * r) = Eigen::MatrixXcd::Identity(2 * r, 2 * r);
  C2inv.block(2 * r, 2 * r, r, r) = -YY;
  C2inv.block(3 * r, 3 * r, r, r) = -YY;

  std::vector<int> counts(gridN, 0);
  parallelRows(gridN, [&](int i) {
    const cplx l1 = std::polar(1.0, s.angles[i]);
    Eigen::VectorXd a(N);
    Eigen::VectorXcd d1(N), d2(N);
    for (int j = 0; j < gridN; ++j) {
      const cplx l2 = std::polar(1.0, s.angles[j]);
      double dmin2 = std::numeric_limits<double>::infinity();
      for (Eigen::Index t = 0; t < N; ++t) {
        d1(t) = m1(t) - l1;
        d2(t) = m2(t) - l2;
        a(t) = std::norm(d1(t)) + std::norm(d2(t));
        dmin2 = std::min(dmin2, a(t));
      }
      const double dmin = std::sqrt(dmin2);
      bool singular;
      if (dmin - e > thr) {
        singular = false;
      } else if (dmin + e <= thr) {
        singular = true;
      } else {
        ++counts[i];
        Eigen::VectorXd shifted = a.array() - thr2;
        for (Eigen::Index t = 0; t < N; ++t)
          if (shifted(t) == 0.0) shifted(t) = -1e-300;
        // delta1^* delta1 = diag(a) + [Y, P] C1 [Y, P]^*,  P = conj(D1) X1 + conj(D2) X2
        Eigen::MatrixXcd Z1(N, 2 * r);
        Z1.leftCols(r) = Y;
        Z1.rightCols(r) = d1.conjugate().asDiagonal() * X1 + d2.conjugate().asDiagonal() * X2;
        // delta2 delta2^* = diag(a) + [X1, X2, D1 Y, D2 Y] C2 [...]^*
        Eigen::MatrixXcd Z2(N, 4 * r);
        Z2.leftCols(r) = X1;
        Z2.middleCols(r, r) = X2;
        Z2.middleCols(2 * r, r) = d1.asDiagonal() * Y;
        Z2.rightCols(r) = d2.asDiagonal() * Y;
        singular = negativeCount(shifted, Z1, C1inv) > 0 || negativeCount(shifted, Z2, C2inv) > 0;
      }
      s.mask[static_cast<size_t>(i) * gridN + j] = singular ? 1 : 0;
    }
  });
  for (int c : counts) s.evaluatedCells += c;
  return s;
}

double torusHausdorff(const std::vector<std::pair<double, double>>& a,
                      const std::vector<std::pair<double, double>>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto dist = [](const std::pair<double, double>& x, const std::pair<double, double>& y) {
    return std::hypot(std::remainder(x.first - y.first, 2.0 * kPi), std::remainder(x.second - y.second, 2.0 * kPi));
  };
  auto directed = [&](const auto& x, const auto& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace bidisk
