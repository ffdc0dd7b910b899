#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bidisk/clark.hpp"
#include "bidisk/rif.hpp"

namespace bidisk {

// Polynomials z1^k z2^l, 0 <= k,l <= D, sampled on a G x G boundary grid.
struct TruncatedHardy {
  int D = 8;
  int G = 64;
  int dim() const { return (D + 1) * (D + 1); }
  int index(int k, int l) const { return k * (D + 1) + l; }
};

// G defaults to max(2D+2, 64) rounded up to a power of two, doubled for singular functions.
TruncatedHardy makeTruncatedHardy(int D, int G = 0, bool singular = false);

// Taylor coefficients of phi, indices 0..n in each variable.
Eigen::MatrixXcd taylorCoefficients(const Rif& phi, int n);

// Coefficient arrays are (D+1) x (D+1), entry (k,l) multiplying z1^k z2^l.
Eigen::MatrixXcd backwardShift(const Eigen::MatrixXcd& f, int axis);

// Orthonormal functions u_i = (v_i - phi g_i) / sqrt(lambda_i) in K_phi, where v_i are
// eigenvectors of the compressed projector Q = I - L L^* on the polynomial space and g_i = L^* v_i.
struct KphiBasis {
  int D = 0;
  double spectralCut = 0.5;
  Eigen::MatrixXcd taylor;     // (D+1) x (D+1)
  Eigen::MatrixXcd lower;      // multiplication by phi, truncated
  Eigen::MatrixXcd projector;  // Q
  Eigen::VectorXd lambda;      // retained eigenvalues
  Eigen::MatrixXcd V;          // retained eigenvectors (monomial coordinates)
  Eigen::MatrixXcd Gc;         // L^* V
  int size() const { return static_cast<int>(lambda.size()); }
};

KphiBasis projectKphi(const Rif& phi, const TruncatedHardy& space, double spectralCut = 0.5);

// Basis values: rows are points, columns basis functions.
Eigen::MatrixXcd evalBasis(const Rif& phi, const KphiBasis& B, const std::vector<cplx>& z1,
                           const std::vector<cplx>& z2);
// u_i(0, w) for axis 1, u_i(w, 0) for axis 2.
Eigen::MatrixXcd evalBasisEdge(const Rif& phi, const KphiBasis& B, int axis, const std::vector<cplx>& w);

// Gram residual ||B_G^* B_G - I|| of the basis sampled on the G x G grid.
double projectorResidual(const Rif& phi, const KphiBasis& B, int G);

struct TruncatedOperator {
  Eigen::MatrixXcd matrix;
  std::string basisRef;
  std::map<std::string, double> residuals;
};

std::vector<double> gridAngles(int G);  // 2 pi (k + 1/2) / G

struct PsiAlpha {
  int axis = 1;
  cplx alpha;
  int G = 0;
  Eigen::MatrixXcd samples;  // (a,b) at (grid[a], grid[b])
  double maxModulus = 0.0;
};

cplx psiAlphaAt(const Rif& phi, cplx alpha, int axis, cplx z1, cplx z2);
PsiAlpha psiAlpha(const Rif& phi, cplx alpha, int axis, const TruncatedHardy& space);

TruncatedOperator compressedShift(const Rif& phi, const KphiBasis& B, const TruncatedHardy& space, int axis);
TruncatedOperator clarkUnitary(const Rif& phi, cplx alpha, int axis, const KphiBasis& B,
                               const TruncatedHardy& space);

struct UnitaryPair {
  TruncatedOperator S1, S2, U1, U2;
};
// One grid pass for both axes.
UnitaryPair clarkUnitaryPair(const Rif& phi, cplx alpha, const KphiBasis& B, const TruncatedHardy& space);

Eigen::MatrixXcd embeddingJ(const Rif& phi, const KphiBasis& B, const ClarkMeasureQuad& mu);
// Weighted Cauchy transform at collocation points, fitted in the basis.
Eigen::VectorXcd adjointJ(const Rif& phi, const KphiBasis& B, const ClarkMeasureQuad& mu,
                          const Eigen::VectorXcd& h);

// Orthonormal coordinates of P_phi(Poly_Dp) inside the basis span.
Eigen::MatrixXcd probeSubspace(const KphiBasis& B, int Dp);

double opNorm(const Eigen::MatrixXcd& A);
double unitarityResidual(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& W);
double commutationResidual(const Eigen::MatrixXcd& U1, const Eigen::MatrixXcd& U2, const Eigen::MatrixXcd& W);
double commutationResidual(const TruncatedOperator& U1, const TruncatedOperator& U2, const Eigen::MatrixXcd& W);

struct IntertwiningReport {
  double residual = 0.0;  // ||(J U - M J) W||
  double vForm = 0.0;     // ||J^* conj(M) - U^* J^*||
};
IntertwiningReport intertwiningResidual(const Eigen::MatrixXcd& J, const Eigen::MatrixXcd& U,
                                        const ClarkMeasureQuad& mu, int axis, const Eigen::MatrixXcd& W);

struct PPhiReport {
  double value = 0.0;
  bool crossCase = false;  // phi(0, z2) vanishes identically
};
PPhiReport pPhiNecessity(const Rif& phi, cplx alpha, const KphiBasis& B, const TruncatedHardy& space);

// Full pipeline for one (phi, alpha) and refinement level.
struct ModelConfig {
  int D = 8;
  int G = 0;
  int N = 1024;
  int probeDegree = 2;
  double spectralCut = 0.5;
  double exclusionRadius = 1e-4;
};

struct ClarkModel {
  ModelConfig cfg;
  TruncatedHardy space;
  KphiBasis basis;
  ClarkMeasureQuad mu;
  UnitaryPair ops;
  Eigen::MatrixXcd J;
  Eigen::MatrixXcd W;
  std::map<std::string, double> residuals;
};

ClarkModel buildClarkModel(const Rif& phi, cplx alpha, const ModelConfig& cfg);

}  // namespace bidisk
